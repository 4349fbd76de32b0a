#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "biomaudit/subjfeat.hpp"
#include "biomaudit/types.hpp"

namespace biomaudit {

/// Square head region: centered at the ear midpoint with side equal to 2/9
/// of the body-crop height. The pixel rect (x0,y0)-(x1,y1) is the real box
/// clamped to image bounds, top-left inclusive, bottom-right exclusive.
struct HeadBox {
  double cx = 0.0;
  double cy = 0.0;
  double side = 0.0;
  int x0 = 0, y0 = 0;
  int x1 = 0, y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
};

std::pair<double, double> head_center(const KeypointSet& kp);

/// Throws DegenerateBox when clamping leaves an empty rect, InvalidConfig
/// when body_height <= 0.
HeadBox head_box(const KeypointSet& kp, double body_height, int img_width, int img_height);

PixelBuffer crop(const PixelBuffer& img, const HeadBox& box);

struct CropInput {
  std::string sample_id;
  std::string image_path;
  int gender_gt = 0;
  KeypointSet keypoints;
  Pose pose = Pose::frontal;
};

struct FaceCropEntry {
  std::string sample_id;
  std::string face_path;  // relative to the manifest's directory
  int gender_gt = 0;
};

struct CropBatchResult {
  std::vector<FaceCropEntry> manifest;  // sorted by sample_id
  std::size_t skipped_nonfrontal = 0;
  std::vector<std::pair<std::string, std::string>> errors;  // (sample_id, error)
};

/// Crops the head box of every frontal sample into out_dir/faces/<id>.png,
/// using the full crop height as body height. Non-frontal samples are
/// skipped with accounting; per-sample failures are recorded without
/// aborting the batch. Throws WriteError only when out_dir itself is
/// unusable.
CropBatchResult crop_heads(std::vector<CropInput> samples, const std::filesystem::path& out_dir);

}  // namespace biomaudit
