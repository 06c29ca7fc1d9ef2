#include "reshape/harness/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace reshape::harness {

namespace {

class PgmCursor {
public:
    explicit PgmCursor(std::string_view bytes) : bytes_(bytes) {}

    std::size_t offset() const noexcept { return pos_; }
    bool at_end() const noexcept { return pos_ >= bytes_.size(); }

    void skip_whitespace_and_comments()
    {
        while (pos_ < bytes_.size()) {
            const auto c = static_cast<unsigned char>(bytes_[pos_]);
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                return;
            }
        }
    }

    unsigned long read_unsigned(const char* what)
    {
        skip_whitespace_and_comments();
        if (at_end()) throw ImageParseError(std::string("unexpected end of data while reading ") + what, pos_);
        const std::size_t start = pos_;
        unsigned long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
            if (value > 0xFFFFFFFFul) throw ImageParseError(std::string(what) + " out of range", start);
            ++pos_;
        }
        if (pos_ == start) throw ImageParseError(std::string("expected a decimal ") + what, start);
        return value;
    }

    // The single whitespace byte that separates maxval from a binary raster.
    void expect_single_whitespace()
    {
        if (at_end() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            throw ImageParseError("expected whitespace before binary raster", pos_);
        }
        ++pos_;
    }

    unsigned char byte_at(std::size_t i) const { return static_cast<unsigned char>(bytes_[i]); }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
    void advance(std::size_t n) noexcept { pos_ += n; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

int bit_depth_for(unsigned long maxval)
{
    int bits = 0;
    while ((1ul << bits) - 1 < maxval) ++bits;
    return bits;
}

}  // namespace

ImageParseError::ImageParseError(const std::string& what, std::size_t byte_offset)
    : std::runtime_error("PGM parse error at byte " + std::to_string(byte_offset) + ": " + what), offset_(byte_offset)
{
}

GrayImage parse_pgm(std::string_view bytes)
{
    if (bytes.size() < 2 || bytes[0] != 'P') throw ImageFormatError("not a PNM file (missing 'P' magic)");
    const char kind = bytes[1];
    if (kind != '2' && kind != '5') {
        throw ImageFormatError(std::string("unsupported PNM magic 'P") + kind + "' (only P2 and P5 graymaps)");
    }

    PgmCursor cur(bytes);
    cur.advance(2);
    if (!cur.at_end() && !std::isspace(cur.byte_at(cur.offset())) && bytes[cur.offset()] != '#') {
        throw ImageParseError("expected whitespace after magic", cur.offset());
    }
    const std::size_t width_at = cur.offset();
    const unsigned long width = cur.read_unsigned("width");
    const unsigned long height = cur.read_unsigned("height");
    if (width == 0 || height == 0) throw ImageParseError("image dimensions must be positive", width_at);
    const std::size_t maxval_at = cur.offset();
    const unsigned long maxval = cur.read_unsigned("maxval");
    if (maxval == 0 || maxval > 65535) throw ImageParseError("maxval must be in [1, 65535]", maxval_at);

    const std::size_t count = static_cast<std::size_t>(width) * height;
    std::vector<double> values(count);
    const double scale = static_cast<double>(maxval);

    if (kind == '5') {
        cur.expect_single_whitespace();
        const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
        if (cur.remaining() < count * sample_bytes) {
            throw ImageParseError("truncated raster: need " + std::to_string(count * sample_bytes) + " bytes, have " +
                                      std::to_string(cur.remaining()),
                                  bytes.size());
        }
        const std::size_t base = cur.offset();
        for (std::size_t i = 0; i < count; ++i) {
            unsigned long sample = cur.byte_at(base + i * sample_bytes);
            if (sample_bytes == 2) sample = (sample << 8) | cur.byte_at(base + i * sample_bytes + 1);
            if (sample > maxval) throw ImageParseError("sample exceeds maxval", base + i * sample_bytes);
            values[i] = static_cast<double>(sample) / scale;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t at = cur.offset();
            const unsigned long sample = cur.read_unsigned("sample");
            if (sample > maxval) throw ImageParseError("sample exceeds maxval", at);
            values[i] = static_cast<double>(sample) / scale;
        }
    }
    return GrayImage{DenseMatrix(height, width, std::move(values)), bit_depth_for(maxval)};
}

GrayImage load_gray_image(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open image " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_pgm(buf.str());
    } catch (const ImageParseError& e) {
        throw ImageParseError(path.string() + ": " + e.what(), e.byte_offset());
    }
}

std::string encode_pgm(const DenseMatrix& intensities)
{
    std::string out = "P5\n" + std::to_string(intensities.cols()) + " " + std::to_string(intensities.rows()) + "\n255\n";
    out.reserve(out.size() + intensities.size());
    for (double v : intensities.entries()) {
        const double clamped = std::clamp(v, 0.0, 1.0);
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(clamped * 255.0))));
    }
    return out;
}

void write_gray_image(const DenseMatrix& intensities, const std::filesystem::path& path)
{
    const std::string bytes = encode_pgm(intensities);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_gray_image(const GrayImage& image, const std::filesystem::path& path)
{
    write_gray_image(image.matrix, path);
}

GrayImage crop_to_tile_multiple(const GrayImage& image, std::size_t p, std::size_t q)
{
    const DenseMatrix& m = image.matrix;
    if (p == 0 || q == 0 || m.rows() < p || m.cols() < q) {
        throw std::invalid_argument("crop_to_tile_multiple: " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + " image is smaller than one " + std::to_string(p) +
                                    "x" + std::to_string(q) + " tile");
    }
    const std::size_t rows = (m.rows() / p) * p;
    const std::size_t cols = (m.cols() / q) * q;
    if (rows == m.rows() && cols == m.cols()) return image;

    const std::size_t top = (m.rows() - rows) / 2;
    const std::size_t left = (m.cols() - cols) / 2;
    DenseMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = m(top + i, left + j);
    return GrayImage{std::move(out), image.source_bit_depth};
}

}  // namespace reshape::harness
