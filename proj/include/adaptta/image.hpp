#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace adaptta {

/// 8-bit interleaved RGB raster, row-major. Immutable once built.
class Image {
 public:
  static constexpr int kChannels = 3;

  /// Throws GeometryError unless width, height >= 1 and
  /// data.size() == width * height * 3.
  Image(int width, int height, std::vector<std::uint8_t> data);

  /// Image filled with a single RGB value.
  static Image filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const std::uint8_t> data() const noexcept { return data_; }

  std::uint8_t at(int x, int y, int c) const noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

// Binary PPM (P6, maxval 255). The header may contain '#' comments; a single
// whitespace byte separates maxval from the pixel payload. Bytes after the
// payload are ignored.
Image decode_ppm(std::span<const std::uint8_t> bytes);

/// Canonical encoding: "P6\n<w> <h>\n255\n" followed by the raw samples.
std::vector<std::uint8_t> encode_ppm(const Image& img);

/// Throws DataError when the file cannot be read, PpmError when it cannot be
/// decoded.
Image read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const Image& img);

}  // namespace adaptta
