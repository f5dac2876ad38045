#include "adaptta/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adaptta/errors.hpp"

namespace adaptta {

bool ViewSpec::fits(int source_width, int source_height) const noexcept {
  return crop_x >= 0 && crop_y >= 0 && crop_w >= 1 && crop_h >= 1 &&
         static_cast<long>(crop_x) + crop_w <= source_width &&
         static_cast<long>(crop_y) + crop_h <= source_height;
}

namespace {

struct Tap {
  int lo;
  int hi;
  double frac;
};

// Pixel-center mapping from destination index to source coordinate:
// ((2 * dst + 1) * in - out) / (2 * out), clamped to [0, in - 1].
std::vector<Tap> make_taps(int in, int out) {
  std::vector<Tap> taps(static_cast<std::size_t>(out));
  for (int d = 0; d < out; ++d) {
    const double num = static_cast<double>(2L * d + 1) * in - out;
    double src = num / (2.0 * out);
    if (src < 0.0) src = 0.0;
    int lo = static_cast<int>(std::floor(src));
    if (lo >= in - 1) {
      taps[d] = {in - 1, in - 1, 0.0};
    } else {
      taps[d] = {lo, lo + 1, src - lo};
    }
  }
  return taps;
}

}  // namespace

Image resize(const Image& img, int width, int height) {
  if (width < 1 || height < 1) {
    throw GeometryError("resize target must be positive, got " + std::to_string(width) + "x" +
                        std::to_string(height));
  }
  if (width == img.width() && height == img.height()) {
    return img;
  }
  const auto xs = make_taps(img.width(), width);
  const auto ys = make_taps(img.height(), height);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height * Image::kChannels);
  std::size_t k = 0;
  for (int y = 0; y < height; ++y) {
    const Tap& ty = ys[y];
    for (int x = 0; x < width; ++x) {
      const Tap& tx = xs[x];
      for (int c = 0; c < Image::kChannels; ++c) {
        const double top = (1.0 - tx.frac) * img.at(tx.lo, ty.lo, c) + tx.frac * img.at(tx.hi, ty.lo, c);
        const double bottom = (1.0 - tx.frac) * img.at(tx.lo, ty.hi, c) + tx.frac * img.at(tx.hi, ty.hi, c);
        const double v = std::nearbyint((1.0 - ty.frac) * top + ty.frac * bottom);
        out[k++] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  return Image(width, height, std::move(out));
}

Image resize_to_square(const Image& img, int side) { return resize(img, side, side); }

Image prepare_source(const Image& img, int side) {
  if (side < 1) {
    throw GeometryError("source side must be positive");
  }
  const int w = img.width();
  const int h = img.height();
  if (w == h) {
    return resize_to_square(img, side);
  }
  const long shorter = std::min(w, h);
  auto scaled = [&](long longer) {
    return static_cast<int>(std::max<long>(side, (longer * side + shorter / 2) / shorter));
  };
  const int new_w = w < h ? side : scaled(w);
  const int new_h = h < w ? side : scaled(h);
  const Image resized = resize(img, new_w, new_h);
  return crop(resized, ViewSpec{(new_w - side) / 2, (new_h - side) / 2, side, side, false});
}

Image crop(const Image& img, const ViewSpec& spec) {
  if (!spec.fits(img.width(), img.height())) {
    throw GeometryError("crop (" + std::to_string(spec.crop_x) + "," + std::to_string(spec.crop_y) + "," +
                        std::to_string(spec.crop_w) + "," + std::to_string(spec.crop_h) + ") outside " +
                        std::to_string(img.width()) + "x" + std::to_string(img.height()) + " image");
  }
  constexpr int kC = Image::kChannels;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(spec.crop_w) * spec.crop_h * kC);
  const auto src = img.data();
  for (int y = 0; y < spec.crop_h; ++y) {
    const std::size_t row = (static_cast<std::size_t>(spec.crop_y + y) * img.width() + spec.crop_x) * kC;
    std::uint8_t* dst = out.data() + static_cast<std::size_t>(y) * spec.crop_w * kC;
    if (!spec.hflip) {
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(row), spec.crop_w * kC, dst);
      continue;
    }
    for (int x = 0; x < spec.crop_w; ++x) {
      const std::size_t from = row + static_cast<std::size_t>(spec.crop_w - 1 - x) * kC;
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(from), kC, dst + static_cast<std::size_t>(x) * kC);
    }
  }
  return Image(spec.crop_w, spec.crop_h, std::move(out));
}

Image hflip(const Image& img) {
  return crop(img, ViewSpec{0, 0, img.width(), img.height(), true});
}

}  // namespace adaptta
