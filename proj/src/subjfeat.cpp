#include "biomaudit/subjfeat.hpp"

#include <cmath>

#include "biomaudit/errors.hpp"

namespace biomaudit {

const std::array<const char*, kFeatureCount> kFeatureNames = {
    "resolution", "luminosity", "blurriness", "face_conf", "upper_conf", "lower_conf", "pose"};

const char* to_string(Pose pose) {
  switch (pose) {
    case Pose::frontal: return "frontal";
    case Pose::sideways: return "sideways";
    case Pose::backside: return "backside";
  }
  return "?";
}

Pose pose_from_string(const std::string& s) {
  if (s == "frontal") return Pose::frontal;
  if (s == "sideways") return Pose::sideways;
  if (s == "backside") return Pose::backside;
  throw Error(ErrorKind::ParseError, "unknown pose value '" + s + "'");
}

Pose pose_from_ordinal(int v) {
  if (v < 0 || v > 2) {
    throw Error(ErrorKind::ParseError, "pose ordinal out of range: " + std::to_string(v));
  }
  return static_cast<Pose>(v);
}

std::size_t feature_index(const std::string& name) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (name == kFeatureNames[i]) return i;
  }
  throw Error(ErrorKind::UnknownFeature, name);
}

double region_confidence(const KeypointSet& kp, Region region) {
  std::size_t first = 0, count = 0;
  switch (region) {
    case Region::face:
      first = kNose;
      count = 5;
      break;
    case Region::upper:
      first = kLeftShoulder;
      count = 6;
      break;
    case Region::lower:
      first = kLeftHip;
      count = 6;
      break;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += kp[first + i].conf;
  return sum / static_cast<double>(count);
}

Pose classify_pose(const KeypointSet& kp) {
  const double shoulder_length = std::abs(kp[kRightShoulder].x - kp[kLeftShoulder].x);
  const double shoulder_y = 0.5 * (kp[kLeftShoulder].y + kp[kRightShoulder].y);
  const double hip_y = 0.5 * (kp[kLeftHip].y + kp[kRightHip].y);
  const double upper_height = std::abs(shoulder_y - hip_y);
  if (upper_height == 0.0) {
    throw Error(ErrorKind::DegenerateGeometry, "shoulder-hip height is zero");
  }
  if (shoulder_length / upper_height < 0.5) {
    return Pose::sideways;
  }
  return kp[kLeftShoulder].x > kp[kRightShoulder].x ? Pose::frontal : Pose::backside;
}

SubjectFeatures compute_subject_features(const KeypointSet& kp) {
  SubjectFeatures f;
  f.face_conf = region_confidence(kp, Region::face);
  f.upper_conf = region_confidence(kp, Region::upper);
  f.lower_conf = region_confidence(kp, Region::lower);
  f.pose = classify_pose(kp);
  return f;
}

FeatureRow build_feature_row(const ImageRecord& record, const ImageFeatures& img,
                             const SubjectFeatures& subj, int meta_label) {
  FeatureRow row;
  row.sample_id = record.sample_id;
  row.dataset = record.dataset;
  row.split = record.split;
  row.gender_gt = record.gender_gt;
  row.values[kFeatResolution] = img.resolution;
  row.values[kFeatLuminosity] = img.luminosity;
  row.values[kFeatBlurriness] = img.blurriness;
  row.values[kFeatFaceConf] = subj.face_conf;
  row.values[kFeatUpperConf] = subj.upper_conf;
  row.values[kFeatLowerConf] = subj.lower_conf;
  row.values[kFeatPose] = static_cast<double>(static_cast<int>(subj.pose));
  row.pose = subj.pose;
  row.meta_label = meta_label;
  return row;
}

}  // namespace biomaudit
