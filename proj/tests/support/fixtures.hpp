#pragma once

// Shared synthetic-data builders for the unit, CLI and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "biomaudit/imageio.hpp"
#include "biomaudit/tree.hpp"
#include "biomaudit/types.hpp"

namespace fixtures {

/// Seeded RNG with fully pinned output (mt19937_64 raw draws only; standard
/// library distributions are implementation-defined).
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t integer(std::uint64_t n) { return gen() % n; }
};

inline biomaudit::PixelBuffer solid_image(int w, int h, std::uint8_t r, std::uint8_t g,
                                          std::uint8_t b) {
  auto img = biomaudit::PixelBuffer::create(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto* px = img.pixel(x, y);
      px[0] = r;
      px[1] = g;
      px[2] = b;
    }
  }
  return img;
}

inline biomaudit::PixelBuffer noise_image(int w, int h, Rng& rng) {
  auto img = biomaudit::PixelBuffer::create(w, h);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.integer(256));
  return img;
}

/// Structured image with gradients, stripes and speckle, a stand-in for a
/// natural photo in sharpness tests.
inline biomaudit::PixelBuffer textured_image(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  auto img = biomaudit::PixelBuffer::create(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double g1 = 127.0 + 90.0 * std::sin(x * 0.35) * std::cos(y * 0.23);
      const double g2 = 40.0 * ((x / 8 + y / 8) % 2);
      const double noise = 25.0 * (rng.uniform() - 0.5);
      const double v = std::clamp(g1 * 0.6 + g2 + noise + 30.0, 0.0, 255.0);
      auto* px = img.pixel(x, y);
      px[0] = static_cast<std::uint8_t>(v);
      px[1] = static_cast<std::uint8_t>(std::clamp(v * 0.9 + 12.0, 0.0, 255.0));
      px[2] = static_cast<std::uint8_t>(std::clamp(255.0 - v * 0.7, 0.0, 255.0));
    }
  }
  return img;
}

/// Keypoints laid out like a plausible standing subject inside a w x h crop.
/// facing: 0 frontal, 1 sideways, 2 backside.
inline biomaudit::KeypointSet subject_keypoints(int w, int h, int facing, Rng& rng) {
  using namespace biomaudit;
  KeypointSet kp;
  const double cx = w / 2.0;
  const double jitter = 0.02 * w;
  auto j = [&] { return rng.uniform(-jitter, jitter); };

  double half_shoulder = 0.22 * w;   // wide: ratio above 0.5
  double lsho_x, rsho_x;
  const double sho_y = 0.22 * h, hip_y = 0.52 * h;
  if (facing == 1) {
    half_shoulder = 0.04 * w;  // narrow: ratio below 0.5
  }
  if (facing == 2) {
    lsho_x = cx - half_shoulder;  // left shoulder on the image left: backside
    rsho_x = cx + half_shoulder;
  } else {
    lsho_x = cx + half_shoulder;
    rsho_x = cx - half_shoulder;
  }

  kp[kNose] = {cx + j(), 0.08 * h + j(), rng.uniform(0.5, 1.0)};
  kp[kLeftEye] = {cx + 0.03 * w + j(), 0.06 * h + j(), rng.uniform(0.5, 1.0)};
  kp[kRightEye] = {cx - 0.03 * w + j(), 0.06 * h + j(), rng.uniform(0.5, 1.0)};
  kp[kLeftEar] = {cx + 0.06 * w + j(), 0.07 * h + j(), rng.uniform(0.5, 1.0)};
  kp[kRightEar] = {cx - 0.06 * w + j(), 0.07 * h + j(), rng.uniform(0.5, 1.0)};
  kp[kLeftShoulder] = {lsho_x + j(), sho_y + j(), rng.uniform(0.4, 1.0)};
  kp[kRightShoulder] = {rsho_x + j(), sho_y + j(), rng.uniform(0.4, 1.0)};
  kp[kLeftElbow] = {lsho_x + j(), 0.36 * h + j(), rng.uniform(0.4, 1.0)};
  kp[kRightElbow] = {rsho_x + j(), 0.36 * h + j(), rng.uniform(0.4, 1.0)};
  kp[kLeftWrist] = {lsho_x + j(), 0.48 * h + j(), rng.uniform(0.3, 1.0)};
  kp[kRightWrist] = {rsho_x + j(), 0.48 * h + j(), rng.uniform(0.3, 1.0)};
  kp[kLeftHip] = {cx + 0.1 * w + j(), hip_y + j(), rng.uniform(0.3, 1.0)};
  kp[kRightHip] = {cx - 0.1 * w + j(), hip_y + j(), rng.uniform(0.3, 1.0)};
  kp[kLeftKnee] = {cx + 0.1 * w + j(), 0.74 * h + j(), rng.uniform(0.2, 1.0)};
  kp[kRightKnee] = {cx - 0.1 * w + j(), 0.74 * h + j(), rng.uniform(0.2, 1.0)};
  kp[kLeftAnkle] = {cx + 0.1 * w + j(), 0.93 * h + j(), rng.uniform(0.2, 1.0)};
  kp[kRightAnkle] = {cx - 0.1 * w + j(), 0.93 * h + j(), rng.uniform(0.2, 1.0)};
  return kp;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string keypoints_json_entry(const std::string& id, const biomaudit::KeypointSet& kp,
                                        bool last) {
  std::string s = "  {\"image_id\": \"" + id + "\", \"keypoints\": [";
  char buf[64];
  for (std::size_t k = 0; k < biomaudit::kKeypointCount; ++k) {
    std::snprintf(buf, sizeof(buf), "%.10g, %.10g, %.10g", kp[k].x, kp[k].y, kp[k].conf);
    s += buf;
    if (k + 1 < biomaudit::kKeypointCount) s += ", ";
  }
  s += "], \"score\": 1.0}";
  if (!last) s += ",";
  return s + "\n";
}

/// Fresh empty directory under the current working directory.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::current_path() / "test_tmp" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct SyntheticDataset {
  std::filesystem::path dir;
  std::filesystem::path manifest;
  std::filesystem::path keypoints;
  std::filesystem::path predictions;
  std::vector<std::string> sample_ids;
};

/// Full synthetic dataset on disk: images spread over three "datasets" with
/// distinct size/blur profiles, keypoints covering all three poses, and five
/// models whose errors concentrate on small images.
inline SyntheticDataset synthetic_dataset(const std::string& name, std::size_t n_samples,
                                          std::uint64_t seed) {
  using namespace biomaudit;
  SyntheticDataset ds;
  ds.dir = temp_dir(name);
  std::filesystem::create_directories(ds.dir / "img");
  Rng rng(seed);

  std::string manifest = "sample_id,path,dataset,split,gender_gt\n";
  std::string keypoints = "[\n";
  std::string predictions = "model_id,sample_id,gender_pred\n";
  const char* datasets[3] = {"setA", "setB", "setC"};
  const char* models[5] = {"m1", "m2", "m3", "m4", "m5"};

  for (std::size_t i = 0; i < n_samples; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "s%04zu", i);
    ds.sample_ids.push_back(id);
    const int which = static_cast<int>(i % 3);
    const int w = 24 + static_cast<int>(rng.integer(20)) + 30 * which;
    const int h = 2 * w + static_cast<int>(rng.integer(16));

    PixelBuffer img = textured_image(w, h, seed ^ (i * 7919));
    const auto rel = std::string("img/") + id + ".png";
    write_png(ds.dir / rel, img);

    const int facing = static_cast<int>(rng.integer(3));
    KeypointSet kp = subject_keypoints(w, h, facing, rng);

    const int gender = static_cast<int>(rng.integer(2));
    manifest += std::string(id) + "," + (ds.dir / rel).string() + "," + datasets[which] +
                ",test," + std::to_string(gender) + "\n";
    keypoints += keypoints_json_entry(id, kp, i + 1 == n_samples);

    // small images draw more model errors
    const double err_rate = which == 0 ? 0.35 : (which == 1 ? 0.15 : 0.05);
    for (const char* model : models) {
      const int pred = rng.uniform() < err_rate ? 1 - gender : gender;
      predictions += std::string(model) + "," + id + "," + std::to_string(pred) + "\n";
    }
  }
  keypoints += "]\n";

  ds.manifest = ds.dir / "manifest.csv";
  ds.keypoints = ds.dir / "keypoints.json";
  ds.predictions = ds.dir / "predictions.csv";
  write_file(ds.manifest, manifest);
  write_file(ds.keypoints, keypoints);
  write_file(ds.predictions, predictions);
  return ds;
}

/// Random small decision tree over n features, values in [-1, 1],
/// thresholds in [0, 1].
inline biomaudit::DecisionTree random_tree(std::size_t n_features, int max_depth, Rng& rng) {
  using biomaudit::TreeNode;
  std::vector<TreeNode> nodes;
  // build recursively; ~70% chance to split while depth remains
  const std::function<int(int)> build = [&](int depth) -> int {
    const int self = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (depth >= max_depth || rng.uniform() < 0.3) {
      nodes[self].value = rng.uniform(-1.0, 1.0);
      return self;
    }
    nodes[self].feature = static_cast<int>(rng.integer(n_features));
    nodes[self].threshold = rng.uniform();
    const int left = build(depth + 1);
    const int right = build(depth + 1);
    nodes[self].left = left;
    nodes[self].right = right;
    return self;
  };
  build(0);
  return biomaudit::DecisionTree(std::move(nodes));
}

inline biomaudit::TreeEnsemble random_ensemble(std::size_t n_features, std::size_t n_trees,
                                               int max_depth, Rng& rng) {
  biomaudit::TreeEnsemble model;
  model.n_features = n_features;
  model.base_score = rng.uniform(-0.5, 0.5);
  model.shrinkage = rng.uniform(0.2, 1.0);
  for (std::size_t t = 0; t < n_trees; ++t) {
    model.trees.push_back(random_tree(n_features, max_depth, rng));
  }
  return model;
}

inline biomaudit::Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  auto m = biomaudit::Matrix::create(rows, cols);
  for (auto& v : m.data) v = rng.uniform();
  return m;
}

}  // namespace fixtures
