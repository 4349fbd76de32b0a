#include "biomaudit/imgfeat.hpp"

#include <cmath>

#include "biomaudit/errors.hpp"

namespace biomaudit {

std::int64_t resolution(const PixelBuffer& img) {
  return static_cast<std::int64_t>(img.width) * img.height;
}

double luminosity(const PixelBuffer& img, const LuminosityWeights& w) {
  double sum = 0.0;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* px = img.data.data() + 3 * i;
    const double r = px[0], g = px[1], b = px[2];
    sum += std::sqrt(w.r * r * r + w.g * g * g + w.b * b * b);
  }
  return sum / static_cast<double>(n);
}

GrayImage grayscale(const PixelBuffer& img) {
  GrayImage out = GrayImage::create(img.width, img.height);
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* px = img.data.data() + 3 * i;
    out.data[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
  }
  return out;
}

double laplacian_variance(const GrayImage& img, LaplacianKernel kernel) {
  if (img.width < 3 || img.height < 3) {
    throw Error(ErrorKind::TooSmall, "laplacian needs at least 3x3, got " +
                                         std::to_string(img.width) + "x" +
                                         std::to_string(img.height));
  }
  const bool eight = kernel == LaplacianKernel::EightNeighbor;
  const std::int64_t count =
      static_cast<std::int64_t>(img.width - 2) * (img.height - 2);

  // Two passes keep the population variance numerically stable.
  double sum = 0.0;
  for (int y = 1; y + 1 < img.height; ++y) {
    for (int x = 1; x + 1 < img.width; ++x) {
      double r = img.at(x - 1, y) + img.at(x + 1, y) + img.at(x, y - 1) + img.at(x, y + 1);
      if (eight) {
        r += img.at(x - 1, y - 1) + img.at(x + 1, y - 1) + img.at(x - 1, y + 1) +
             img.at(x + 1, y + 1);
        r -= 8.0 * img.at(x, y);
      } else {
        r -= 4.0 * img.at(x, y);
      }
      sum += r;
    }
  }
  const double mean = sum / static_cast<double>(count);

  double sq = 0.0;
  for (int y = 1; y + 1 < img.height; ++y) {
    for (int x = 1; x + 1 < img.width; ++x) {
      double r = img.at(x - 1, y) + img.at(x + 1, y) + img.at(x, y - 1) + img.at(x, y + 1);
      if (eight) {
        r += img.at(x - 1, y - 1) + img.at(x + 1, y - 1) + img.at(x - 1, y + 1) +
             img.at(x + 1, y + 1);
        r -= 8.0 * img.at(x, y);
      } else {
        r -= 4.0 * img.at(x, y);
      }
      const double d = r - mean;
      sq += d * d;
    }
  }
  return sq / static_cast<double>(count);
}

double blurriness(const PixelBuffer& img, LaplacianKernel kernel) {
  return laplacian_variance(grayscale(img), kernel);
}

ImageFeatures compute_image_features(const PixelBuffer& img, const LuminosityWeights& weights,
                                     LaplacianKernel kernel) {
  ImageFeatures f;
  f.resolution = static_cast<double>(resolution(img));
  f.luminosity = luminosity(img, weights);
  f.blurriness = blurriness(img, kernel);
  return f;
}

}  // namespace biomaudit
