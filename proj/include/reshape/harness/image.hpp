#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "reshape/matrix.hpp"

namespace reshape::harness {

/// Grayscale image as intensities in [0, 1].
struct GrayImage {
    DenseMatrix matrix;
    int source_bit_depth = 8;
};

/// Malformed PGM header or payload.
class ImageParseError : public std::runtime_error {
public:
    ImageParseError(const std::string& what, std::size_t byte_offset);
    std::size_t byte_offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Anything that is not a P2/P5 graymap.
class ImageFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decodes a P2 (ASCII) or P5 (binary) graymap held in memory.
GrayImage parse_pgm(std::string_view bytes);
GrayImage load_gray_image(const std::filesystem::path& path);

/// P5 bytes with maxval 255. Values are clamped to [0, 1] and rounded half
/// away from zero.
std::string encode_pgm(const DenseMatrix& intensities);
void write_gray_image(const DenseMatrix& intensities, const std::filesystem::path& path);
void write_gray_image(const GrayImage& image, const std::filesystem::path& path);

/// Center crop to the largest (multiple of p) x (multiple of q) window; the
/// offsets are floor(remainder / 2). Throws std::invalid_argument when the
/// image is smaller than a single tile.
GrayImage crop_to_tile_multiple(const GrayImage& image, std::size_t p, std::size_t q);

}  // namespace reshape::harness
