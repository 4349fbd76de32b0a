#pragma once

#include <array>
#include <string>

#include "biomaudit/imgfeat.hpp"
#include "biomaudit/types.hpp"

namespace biomaudit {

enum class Region { face, upper, lower };

// Ordinal encoding is fixed so attributions stay reproducible:
// frontal = 0, sideways = 1, backside = 2.
enum class Pose : int { frontal = 0, sideways = 1, backside = 2 };

const char* to_string(Pose pose);
Pose pose_from_string(const std::string& s);  // throws ParseError
Pose pose_from_ordinal(int v);                // throws ParseError

/// Mean keypoint confidence over a body region: face = nose, eyes, ears (5);
/// upper = shoulders, elbows, wrists (6); lower = hips, knees, ankles (6).
double region_confidence(const KeypointSet& kp, Region region);

/// Three-way pose from shoulder/hip geometry. Sideways is decided first:
/// |x_rsho - x_lsho| / |mean_y(shoulders) - mean_y(hips)| < 0.5 -> sideways.
/// Otherwise the subject is frontal when the left shoulder is the rightmost
/// one in image coordinates (origin top-left), else backside.
/// Throws DegenerateGeometry when the shoulder-hip height is zero.
Pose classify_pose(const KeypointSet& kp);

struct SubjectFeatures {
  double face_conf = 0.0;
  double upper_conf = 0.0;
  double lower_conf = 0.0;
  Pose pose = Pose::frontal;
};

SubjectFeatures compute_subject_features(const KeypointSet& kp);

inline constexpr std::size_t kFeatureCount = 7;
extern const std::array<const char*, kFeatureCount> kFeatureNames;
// Fixed feature order: resolution, luminosity, blurriness, face_conf,
// upper_conf, lower_conf, pose.
enum FeatureIndex : std::size_t {
  kFeatResolution = 0,
  kFeatLuminosity,
  kFeatBlurriness,
  kFeatFaceConf,
  kFeatUpperConf,
  kFeatLowerConf,
  kFeatPose,
};

std::size_t feature_index(const std::string& name);  // throws UnknownFeature

struct FeatureRow {
  std::string sample_id;
  std::string dataset;
  Split split = Split::test;
  int gender_gt = 0;
  std::array<double, kFeatureCount> values{};
  Pose pose = Pose::frontal;
  int meta_label = -1;  // -1 until assigned
};

FeatureRow build_feature_row(const ImageRecord& record, const ImageFeatures& img,
                             const SubjectFeatures& subj, int meta_label = -1);

}  // namespace biomaudit
