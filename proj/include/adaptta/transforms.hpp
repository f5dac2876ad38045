#pragma once

#include "adaptta/image.hpp"

namespace adaptta {

/// One element of a test-time augmentation policy: a crop rectangle in
/// source coordinates, optionally mirrored left-to-right after cropping.
struct ViewSpec {
  int crop_x = 0;
  int crop_y = 0;
  int crop_w = 0;
  int crop_h = 0;
  bool hflip = false;

  bool fits(int source_width, int source_height) const noexcept;

  friend bool operator==(const ViewSpec&, const ViewSpec&) = default;
};

/// Bilinear resize with pixel-center sampling (align_corners = false):
/// source coordinate = (dst + 0.5) * in / out - 0.5, clamped to the image.
/// Interpolation runs in double precision and rounds half-to-even.
Image resize(const Image& img, int width, int height);

/// resize(img, side, side). Throws GeometryError if side < 1.
Image resize_to_square(const Image& img, int side);

/// Resizes so the shorter side equals `side`, then center-crops the longer
/// side to obtain a side x side square. Square inputs reduce to
/// resize_to_square.
Image prepare_source(const Image& img, int side);

/// Extracts spec's rectangle, then mirrors columns if spec.hflip.
/// Throws GeometryError if the rectangle is empty or leaves the image.
Image crop(const Image& img, const ViewSpec& spec);

Image hflip(const Image& img);

}  // namespace adaptta
