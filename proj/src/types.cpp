#include "biomaudit/types.hpp"

#include "biomaudit/errors.hpp"

namespace biomaudit {

const std::array<const char*, kKeypointCount> kKeypointNames = {
    "nose",        "left_eye",      "right_eye",  "left_ear",    "right_ear",
    "left_shoulder", "right_shoulder", "left_elbow", "right_elbow", "left_wrist",
    "right_wrist", "left_hip",      "right_hip",  "left_knee",   "right_knee",
    "left_ankle",  "right_ankle"};

const char* to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "?";
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "val") return Split::val;
  if (s == "test") return Split::test;
  throw Error(ErrorKind::ParseError, "unknown split value '" + s + "'");
}

PixelBuffer PixelBuffer::create(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::InvalidConfig, "pixel buffer dimensions must be >= 1");
  }
  PixelBuffer buf;
  buf.width = width;
  buf.height = height;
  buf.data.assign(static_cast<std::size_t>(width) * height * 3, 0);
  return buf;
}

GrayImage GrayImage::create(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::InvalidConfig, "gray image dimensions must be >= 1");
  }
  GrayImage img;
  img.width = width;
  img.height = height;
  img.data.assign(static_cast<std::size_t>(width) * height, 0.0);
  return img;
}

}  // namespace biomaudit
