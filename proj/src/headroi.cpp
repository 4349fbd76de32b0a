#include "biomaudit/headroi.hpp"

#include <algorithm>
#include <cmath>

#include "biomaudit/errors.hpp"
#include "biomaudit/imageio.hpp"

namespace biomaudit {

std::pair<double, double> head_center(const KeypointSet& kp) {
  return {0.5 * (kp[kLeftEar].x + kp[kRightEar].x), 0.5 * (kp[kLeftEar].y + kp[kRightEar].y)};
}

HeadBox head_box(const KeypointSet& kp, double body_height, int img_width, int img_height) {
  if (body_height <= 0.0) {
    throw Error(ErrorKind::InvalidConfig, "body height must be > 0");
  }
  HeadBox box;
  std::tie(box.cx, box.cy) = head_center(kp);
  box.side = 2.0 * body_height / 9.0;

  const double half = box.side / 2.0;
  box.x0 = std::max(0, static_cast<int>(std::floor(box.cx - half)));
  box.y0 = std::max(0, static_cast<int>(std::floor(box.cy - half)));
  box.x1 = std::min(img_width, static_cast<int>(std::ceil(box.cx + half)));
  box.y1 = std::min(img_height, static_cast<int>(std::ceil(box.cy + half)));
  if (box.x0 >= box.x1 || box.y0 >= box.y1) {
    throw Error(ErrorKind::DegenerateBox, "clamped head box is empty");
  }
  return box;
}

PixelBuffer crop(const PixelBuffer& img, const HeadBox& box) {
  PixelBuffer out = PixelBuffer::create(box.width(), box.height());
  for (int y = box.y0; y < box.y1; ++y) {
    const std::uint8_t* src = img.pixel(box.x0, y);
    std::uint8_t* dst = out.pixel(0, y - box.y0);
    std::copy(src, src + 3 * static_cast<std::size_t>(box.width()), dst);
  }
  return out;
}

namespace {

std::string sanitize_id(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

}  // namespace

CropBatchResult crop_heads(std::vector<CropInput> samples, const std::filesystem::path& out_dir) {
  const std::filesystem::path faces_dir = out_dir / "faces";
  std::error_code ec;
  std::filesystem::create_directories(faces_dir, ec);
  if (ec || !std::filesystem::is_directory(faces_dir)) {
    throw Error(ErrorKind::WriteError, "cannot create " + faces_dir.string());
  }

  std::sort(samples.begin(), samples.end(),
            [](const CropInput& a, const CropInput& b) { return a.sample_id < b.sample_id; });

  CropBatchResult result;
  for (const CropInput& sample : samples) {
    if (sample.pose != Pose::frontal) {
      ++result.skipped_nonfrontal;
      continue;
    }
    try {
      PixelBuffer img = decode_image(sample.image_path);
      HeadBox box = head_box(sample.keypoints, static_cast<double>(img.height), img.width,
                             img.height);
      PixelBuffer face = crop(img, box);
      const std::string rel = "faces/" + sanitize_id(sample.sample_id) + ".png";
      write_png(out_dir / rel, face);
      result.manifest.push_back({sample.sample_id, rel, sample.gender_gt});
    } catch (const Error& e) {
      result.errors.emplace_back(sample.sample_id, e.what());
    }
  }
  return result;
}

}  // namespace biomaudit
