#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace biomaudit {

enum class Split { train, val, test };

const char* to_string(Split split);
Split split_from_string(const std::string& s);  // throws ParseError

/// One person-crop sample as listed in the input manifest.
/// Gender encoding is fixed: 0 = female, 1 = male.
struct ImageRecord {
  std::string sample_id;
  std::string path;
  std::string dataset;
  Split split = Split::test;
  int gender_gt = 0;
};

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double conf = 0.0;
};

// COCO keypoint order; all keypoint indexing in the toolkit uses these.
enum CocoKeypoint : std::size_t {
  kNose = 0,
  kLeftEye,
  kRightEye,
  kLeftEar,
  kRightEar,
  kLeftShoulder,
  kRightShoulder,
  kLeftElbow,
  kRightElbow,
  kLeftWrist,
  kRightWrist,
  kLeftHip,
  kRightHip,
  kLeftKnee,
  kRightKnee,
  kLeftAnkle,
  kRightAnkle,
  kKeypointCount
};

extern const std::array<const char*, kKeypointCount> kKeypointNames;

struct KeypointSet {
  std::array<Keypoint, kKeypointCount> pts{};

  Keypoint& operator[](std::size_t i) { return pts[i]; }
  const Keypoint& operator[](std::size_t i) const { return pts[i]; }
};

struct Prediction {
  std::string model_id;
  std::string sample_id;
  int gender_pred = 0;
};

struct PredictionTable {
  std::vector<Prediction> rows;
  std::vector<std::string> model_ids;  // sorted, unique
};

/// 8-bit RGB image, row-major, 3 channels interleaved.
struct PixelBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // size = width * height * 3

  static PixelBuffer create(int width, int height);

  std::uint8_t* pixel(int x, int y) { return data.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
  const std::uint8_t* pixel(int x, int y) const {
    return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
};

/// Real-valued single-channel plane; feature math runs on this so that
/// properties can be checked on synthetic non-quantized inputs.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // size = width * height

  static GrayImage create(int width, int height);

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// One fully joined sample: manifest record, keypoints and the per-model
/// predictions aligned with the join's model_ids list.
struct SampleRow {
  ImageRecord record;
  KeypointSet keypoints;
  std::vector<int> preds;
};

}  // namespace biomaudit
