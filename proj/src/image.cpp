#include "adaptta/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "adaptta/errors.hpp"

namespace adaptta {

Image::Image(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw GeometryError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                        std::to_string(height));
  }
  const auto expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * kChannels;
  if (data_.size() != expected) {
    throw GeometryError("image data has " + std::to_string(data_.size()) + " bytes, expected " +
                        std::to_string(expected));
  }
}

Image Image::filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (width < 1 || height < 1) {
    throw GeometryError("image dimensions must be positive");
  }
  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * kChannels);
  for (std::size_t i = 0; i < data.size(); i += kChannels) {
    data[i] = r;
    data[i + 1] = g;
    data[i + 2] = b;
  }
  return Image(width, height, std::move(data));
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_whitespace_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Reads a decimal field preceded by whitespace/comments.
  long read_uint(const char* field) {
    const std::size_t before = pos_;
    skip_whitespace_and_comments();
    if (pos_ == before) {
      throw PpmError(PpmErrc::kMalformedHeader, std::string("missing separator before ") + field);
    }
    if (pos_ >= bytes_.size()) {
      throw PpmError(PpmErrc::kMalformedHeader, std::string("header ends before ") + field);
    }
    if (!std::isdigit(bytes_[pos_])) {
      throw PpmError(PpmErrc::kMalformedHeader, std::string("expected digits for ") + field);
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<int>::max()) {
        throw PpmError(PpmErrc::kMalformedHeader, std::string(field) + " is too large");
      }
      ++pos_;
    }
    return value;
  }

  // The single whitespace byte that terminates the header.
  void read_terminator() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw PpmError(PpmErrc::kMalformedHeader, "maxval must be followed by one whitespace byte");
    }
    ++pos_;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Image decode_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw PpmError(PpmErrc::kBadMagic, "not a PNM file");
  }
  if (bytes[1] != '6') {
    throw PpmError(PpmErrc::kBadMagic,
                   std::string("unsupported magic P") + static_cast<char>(bytes[1]) + ", only P6 is accepted");
  }
  HeaderReader reader(bytes);
  reader.advance(2);
  const long width = reader.read_uint("width");
  const long height = reader.read_uint("height");
  const long maxval = reader.read_uint("maxval");
  if (width < 1 || height < 1) {
    throw PpmError(PpmErrc::kMalformedHeader, "width and height must be positive");
  }
  if (maxval != 255) {
    throw PpmError(PpmErrc::kUnsupportedMaxval, "maxval " + std::to_string(maxval) + " is not 255");
  }
  reader.read_terminator();

  const auto payload = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * Image::kChannels;
  const std::size_t available = bytes.size() - reader.pos();
  if (available < payload) {
    throw PpmError(PpmErrc::kTruncatedPixels, "pixel data truncated: " + std::to_string(available) + " of " +
                                                  std::to_string(payload) + " bytes");
  }
  const auto first = bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos());
  std::vector<std::uint8_t> data(first, first + static_cast<std::ptrdiff_t>(payload));
  return Image(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

std::vector<std::uint8_t> encode_ppm(const Image& img) {
  const std::string header =
      "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out;
  out.reserve(header.size() + img.data().size());
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open image " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_ppm(bytes);
}

void write_ppm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write image " + path.string());
  }
  const auto bytes = encode_ppm(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw DataError("failed writing image " + path.string());
  }
}

}  // namespace adaptta
