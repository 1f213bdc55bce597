#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace viescore {

struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An encoded raster image kept as its on-disk bytes plus sniffed media type.
struct ImageData {
    std::string media_type;  // e.g. "image/png"
    std::vector<std::uint8_t> bytes;

    bool operator==(const ImageData&) const = default;
};

/// Sniffs the media type from magic bytes. Throws DecodeError on unknown input.
std::string sniff_media_type(const std::vector<std::uint8_t>& bytes);

/// Loads image bytes from disk and verifies they decode.
ImageData load_image(const std::string& path);

/// Wraps raw bytes, sniffing the media type and verifying decodability.
ImageData image_from_bytes(std::vector<std::uint8_t> bytes);

/// Base-64 text of the image's encoded bytes.
std::string encode_image(const ImageData& image);

/// Merges >= 2 images left to right. Height is the max height; shorter
/// panels are bottom-padded with black. Result is PNG-encoded.
struct SingleImage : std::runtime_error {
    using std::runtime_error::runtime_error;
};
ImageData concat_horizontal(const std::vector<ImageData>& images);

struct ImageDims {
    int width = 0;
    int height = 0;
};
ImageDims image_dims(const ImageData& image);

/// Decoded pixel fetch for tests (BGR triplet at x, y).
std::array<std::uint8_t, 3> pixel_at(const ImageData& image, int x, int y);

/// Encodes a solid-color PNG; used by fixtures and the synthetic pipeline.
ImageData make_solid_png(int width, int height, std::uint8_t r, std::uint8_t g,
                         std::uint8_t b);

}  // namespace viescore
