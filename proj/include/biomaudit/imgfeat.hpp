#pragma once

#include <cstdint>

#include "biomaudit/types.hpp"

namespace biomaudit {

enum class LaplacianKernel { FourNeighbor, EightNeighbor };

/// Perceived-brightness channel weights; must be non-negative and sum to 1.
struct LuminosityWeights {
  double r = 0.299;
  double g = 0.587;
  double b = 0.114;
};

struct ImageFeatures {
  double resolution = 0.0;  // width * height
  double luminosity = 0.0;  // in [0, 255]
  double blurriness = 0.0;  // variance of Laplacian response, >= 0
};

std::int64_t resolution(const PixelBuffer& img);

/// Mean over pixels of sqrt(wr*R^2 + wg*G^2 + wb*B^2).
double luminosity(const PixelBuffer& img, const LuminosityWeights& weights = {});

/// Per-pixel 0.299R + 0.587G + 0.114B, kept as real values (no quantization).
GrayImage grayscale(const PixelBuffer& img);

/// Population variance of the 3x3 Laplacian response, computed over the
/// valid region only (no border padding). Throws TooSmall when either
/// dimension is < 3.
double laplacian_variance(const GrayImage& img,
                          LaplacianKernel kernel = LaplacianKernel::FourNeighbor);

double blurriness(const PixelBuffer& img, LaplacianKernel kernel = LaplacianKernel::FourNeighbor);

ImageFeatures compute_image_features(const PixelBuffer& img, const LuminosityWeights& weights = {},
                                     LaplacianKernel kernel = LaplacianKernel::FourNeighbor);

}  // namespace biomaudit
