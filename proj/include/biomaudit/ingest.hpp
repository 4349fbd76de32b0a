#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <vector>

#include "biomaudit/types.hpp"

namespace biomaudit {

/// Manifest CSV: header `sample_id,path,dataset,split,gender_gt`.
/// Throws MissingFile, ParseError (row-indexed), DuplicateId.
std::vector<ImageRecord> load_manifest(const std::filesystem::path& path);

struct KeypointLoadResult {
  std::map<std::string, KeypointSet> by_sample;
  std::size_t clamped_confidences = 0;   // inputs outside [0,1], clamped
  std::size_t duplicate_entries = 0;     // repeated image_id, last entry wins
};

/// Keypoints JSON: array of {"image_id": str, "keypoints": [51 numbers], ...}.
/// The flat vector is (x0,y0,c0,...,x16,y16,c16) in COCO order; the entry's
/// "score" field, when present, is ignored. Throws MissingFile, ParseError,
/// WrongArity.
KeypointLoadResult load_keypoints(const std::filesystem::path& path);

/// Predictions CSV: header `model_id,sample_id,gender_pred`.
/// Throws MissingFile, ParseError, DuplicatePair.
PredictionTable load_predictions(const std::filesystem::path& path);

/// Merges several prediction files (e.g. one per model) into one table.
PredictionTable load_predictions(const std::vector<std::filesystem::path>& paths);

struct JoinDrops {
  std::size_t manifest = 0;     // manifest samples that did not join
  std::size_t keypoints = 0;    // keypoint samples that did not join
  std::size_t predictions = 0;  // predicted samples that did not join
};

struct JoinResult {
  std::vector<SampleRow> rows;           // sorted by sample_id
  std::vector<std::string> model_ids;    // non-empty iff predictions joined
  JoinDrops drops;
};

/// Inner join on sample_id, sorted by sample_id. A sample joins only when it
/// has a manifest row, keypoints, and (when predictions are supplied) a
/// prediction from every model. Drops are counted per source; throws
/// EmptyJoin when the intersection is empty.
JoinResult join_records(const std::vector<ImageRecord>& manifest,
                        const std::map<std::string, KeypointSet>& keypoints,
                        const PredictionTable* predictions = nullptr);

}  // namespace biomaudit
