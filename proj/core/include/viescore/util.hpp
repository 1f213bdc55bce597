#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace viescore {

std::string sha256_hex(std::span<const std::uint8_t> data);
std::string sha256_hex(std::string_view text);

std::string base64_encode(std::span<const std::uint8_t> data);

/// splitmix64 step; the deterministic RNG used for penalty fills and mocks.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D9285EE5E65371ULL;
    return z ^ (z >> 31);
}

/// FNV-1a over a string, for seeding keyed RNG streams.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Unbiased uniform draw from {0, ..., bound-1} via rejection sampling.
std::uint64_t uniform_below(std::uint64_t& state, std::uint64_t bound);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> data);
void write_file_text(const std::string& path, std::string_view text);
std::string read_file_text(const std::string& path);

}  // namespace viescore
