#include "biomaudit/imageio.hpp"

#include <cstdint>
#include <fstream>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "biomaudit/errors.hpp"

namespace biomaudit {

namespace {

bool has_png_magic(const std::vector<std::uint8_t>& b) {
  static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  if (b.size() < 8) return false;
  for (int i = 0; i < 8; ++i)
    if (b[i] != sig[i]) return false;
  return true;
}

bool has_jpeg_magic(const std::vector<std::uint8_t>& b) {
  return b.size() >= 3 && b[0] == 0xff && b[1] == 0xd8 && b[2] == 0xff;
}

}  // namespace

PixelBuffer decode_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::MissingFile, path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (!has_png_magic(bytes) && !has_jpeg_magic(bytes)) {
    throw Error(ErrorKind::UnsupportedFormat, path.string() + ": not a PNG or JPEG file");
  }
  cv::Mat bgr = cv::imdecode(bytes, cv::IMREAD_COLOR);
  if (bgr.empty() || bgr.channels() != 3) {
    throw Error(ErrorKind::DecodeError, path.string());
  }

  PixelBuffer img = PixelBuffer::create(bgr.cols, bgr.rows);
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      std::uint8_t* px = img.pixel(x, y);
      px[0] = row[x][2];
      px[1] = row[x][1];
      px[2] = row[x][0];
    }
  }
  return img;
}

void write_png(const std::filesystem::path& path, const PixelBuffer& img) {
  cv::Mat bgr(img.height, img.width, CV_8UC3);
  for (int y = 0; y < img.height; ++y) {
    cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t* px = img.pixel(x, y);
      row[x] = cv::Vec3b(px[2], px[1], px[0]);
    }
  }
  std::vector<unsigned char> bytes;
  if (!cv::imencode(".png", bgr, bytes)) {
    throw Error(ErrorKind::WriteError, "PNG encode failed for " + path.string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::WriteError, "cannot open " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorKind::WriteError, "write failed for " + path.string());
  }
}

}  // namespace biomaudit
