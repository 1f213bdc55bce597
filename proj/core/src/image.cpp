#include "viescore/image.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <array>

#include "viescore/util.hpp"

namespace viescore {

namespace {

cv::Mat decode_or_throw(const ImageData& image) {
    cv::Mat buf(1, static_cast<int>(image.bytes.size()), CV_8UC1,
                const_cast<std::uint8_t*>(image.bytes.data()));
    cv::Mat mat = cv::imdecode(buf, cv::IMREAD_COLOR);
    if (mat.empty()) throw DecodeError("image bytes failed to decode");
    return mat;
}

ImageData encode_png(const cv::Mat& mat) {
    std::vector<std::uint8_t> out;
    if (!cv::imencode(".png", mat, out)) throw DecodeError("png encode failed");
    return ImageData{"image/png", std::move(out)};
}

}  // namespace

std::string sniff_media_type(const std::vector<std::uint8_t>& bytes) {
    static const std::array<std::uint8_t, 8> png_magic = {0x89, 'P', 'N', 'G',
                                                          0x0D, 0x0A, 0x1A, 0x0A};
    if (bytes.size() >= 8 && std::equal(png_magic.begin(), png_magic.end(), bytes.begin()))
        return "image/png";
    if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF)
        return "image/jpeg";
    if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') return "image/bmp";
    if (bytes.size() >= 12 && bytes[8] == 'W' && bytes[9] == 'E' && bytes[10] == 'B' &&
        bytes[11] == 'P')
        return "image/webp";
    throw DecodeError("unrecognized image format");
}

ImageData load_image(const std::string& path) {
    return image_from_bytes(read_file_bytes(path));
}

ImageData image_from_bytes(std::vector<std::uint8_t> bytes) {
    ImageData image;
    image.media_type = sniff_media_type(bytes);
    image.bytes = std::move(bytes);
    decode_or_throw(image);
    return image;
}

std::string encode_image(const ImageData& image) {
    if (image.bytes.empty()) throw DecodeError("empty image bytes");
    return base64_encode(image.bytes);
}

ImageData concat_horizontal(const std::vector<ImageData>& images) {
    if (images.size() < 2) throw SingleImage("concat_horizontal needs >= 2 images");
    std::vector<cv::Mat> mats;
    mats.reserve(images.size());
    int max_height = 0;
    int total_width = 0;
    for (const ImageData& img : images) {
        mats.push_back(decode_or_throw(img));
        max_height = std::max(max_height, mats.back().rows);
        total_width += mats.back().cols;
    }
    cv::Mat canvas(max_height, total_width, CV_8UC3, cv::Scalar(0, 0, 0));
    int x = 0;
    for (const cv::Mat& m : mats) {
        m.copyTo(canvas(cv::Rect(x, 0, m.cols, m.rows)));
        x += m.cols;
    }
    return encode_png(canvas);
}

ImageDims image_dims(const ImageData& image) {
    cv::Mat mat = decode_or_throw(image);
    return ImageDims{mat.cols, mat.rows};
}

std::array<std::uint8_t, 3> pixel_at(const ImageData& image, int x, int y) {
    cv::Mat mat = decode_or_throw(image);
    auto px = mat.at<cv::Vec3b>(y, x);
    return {px[0], px[1], px[2]};
}

ImageData make_solid_png(int width, int height, std::uint8_t r, std::uint8_t g,
                         std::uint8_t b) {
    cv::Mat mat(height, width, CV_8UC3, cv::Scalar(b, g, r));
    return encode_png(mat);
}

}  // namespace viescore
