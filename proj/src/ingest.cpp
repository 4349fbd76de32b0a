#include "biomaudit/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "biomaudit/csv.hpp"
#include "biomaudit/errors.hpp"

namespace biomaudit {

namespace {

void require_header(const CsvTable& table, const std::vector<std::string>& expected,
                    const std::string& what) {
  if (table.header != expected) {
    std::string got;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      if (i) got += ',';
      got += table.header[i];
    }
    throw Error(ErrorKind::ParseError, what + ": unexpected header '" + got + "'");
  }
}

}  // namespace

std::vector<ImageRecord> load_manifest(const std::filesystem::path& path) {
  CsvTable table = read_csv(path);
  require_header(table, {"sample_id", "path", "dataset", "split", "gender_gt"}, path.string());

  std::vector<ImageRecord> records;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    ImageRecord rec;
    rec.sample_id = row[0];
    rec.path = row[1];
    rec.dataset = row[2];
    if (rec.sample_id.empty() || rec.path.empty()) {
      throw Error(ErrorKind::ParseError,
                  "row " + std::to_string(r + 1) + ": empty sample_id or path");
    }
    try {
      rec.split = split_from_string(row[3]);
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, "row " + std::to_string(r + 1) + ": " + e.detail());
    }
    rec.gender_gt = parse_binary(row[4], r + 1);
    if (!seen.insert(rec.sample_id).second) {
      throw Error(ErrorKind::DuplicateId, rec.sample_id);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

KeypointLoadResult load_keypoints(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::MissingFile, path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorKind::ParseError, path.string() + ": top-level JSON array expected");
  }

  KeypointLoadResult result;
  std::size_t index = 0;
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("image_id") || !entry.contains("keypoints")) {
      throw Error(ErrorKind::ParseError,
                  path.string() + ": entry " + std::to_string(index) +
                      " needs image_id and keypoints");
    }
    const std::string sample_id = entry.at("image_id").get<std::string>();
    const auto& flat = entry.at("keypoints");
    if (!flat.is_array() || flat.size() != 3 * kKeypointCount) {
      throw Error(ErrorKind::WrongArity,
                  sample_id + ": expected 51 keypoint numbers, got " +
                      std::to_string(flat.is_array() ? flat.size() : 0));
    }
    KeypointSet kps;
    for (std::size_t k = 0; k < kKeypointCount; ++k) {
      if (!flat[3 * k].is_number() || !flat[3 * k + 1].is_number() || !flat[3 * k + 2].is_number()) {
        throw Error(ErrorKind::ParseError, sample_id + ": non-numeric keypoint value");
      }
      kps[k].x = flat[3 * k].get<double>();
      kps[k].y = flat[3 * k + 1].get<double>();
      double conf = flat[3 * k + 2].get<double>();
      if (conf < 0.0 || conf > 1.0) {
        conf = std::clamp(conf, 0.0, 1.0);
        ++result.clamped_confidences;
      }
      kps[k].conf = conf;
    }
    if (!result.by_sample.emplace(sample_id, kps).second) {
      result.by_sample[sample_id] = kps;  // last entry wins
      ++result.duplicate_entries;
    }
    ++index;
  }
  return result;
}

PredictionTable load_predictions(const std::filesystem::path& path) {
  return load_predictions(std::vector<std::filesystem::path>{path});
}

PredictionTable load_predictions(const std::vector<std::filesystem::path>& paths) {
  PredictionTable table;
  std::set<std::string> models;
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& path : paths) {
    CsvTable csv = read_csv(path);
    require_header(csv, {"model_id", "sample_id", "gender_pred"}, path.string());
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
      const auto& row = csv.rows[r];
      Prediction pred;
      pred.model_id = row[0];
      pred.sample_id = row[1];
      if (pred.model_id.empty() || pred.sample_id.empty()) {
        throw Error(ErrorKind::ParseError,
                    "row " + std::to_string(r + 1) + ": empty model_id or sample_id");
      }
      pred.gender_pred = parse_binary(row[2], r + 1);
      if (!pairs.emplace(pred.model_id, pred.sample_id).second) {
        throw Error(ErrorKind::DuplicatePair, pred.model_id + "," + pred.sample_id);
      }
      models.insert(pred.model_id);
      table.rows.push_back(std::move(pred));
    }
  }
  table.model_ids.assign(models.begin(), models.end());
  return table;
}

JoinResult join_records(const std::vector<ImageRecord>& manifest,
                        const std::map<std::string, KeypointSet>& keypoints,
                        const PredictionTable* predictions) {
  // model -> (sample -> pred), used to require full model coverage per sample
  std::unordered_map<std::string, std::unordered_map<std::string, int>> by_model;
  std::set<std::string> predicted_samples;
  if (predictions) {
    for (const auto& p : predictions->rows) {
      by_model[p.model_id][p.sample_id] = p.gender_pred;
      predicted_samples.insert(p.sample_id);
    }
  }

  JoinResult result;
  if (predictions) result.model_ids = predictions->model_ids;

  std::vector<const ImageRecord*> sorted;
  sorted.reserve(manifest.size());
  for (const auto& rec : manifest) sorted.push_back(&rec);
  std::sort(sorted.begin(), sorted.end(),
            [](const ImageRecord* a, const ImageRecord* b) { return a->sample_id < b->sample_id; });

  std::set<std::string> joined_ids;
  for (const ImageRecord* rec : sorted) {
    auto kp = keypoints.find(rec->sample_id);
    if (kp == keypoints.end()) {
      ++result.drops.manifest;
      continue;
    }
    SampleRow row;
    row.record = *rec;
    row.keypoints = kp->second;
    if (predictions) {
      bool covered = true;
      row.preds.reserve(result.model_ids.size());
      for (const auto& model : result.model_ids) {
        auto it = by_model[model].find(rec->sample_id);
        if (it == by_model[model].end()) {
          covered = false;
          break;
        }
        row.preds.push_back(it->second);
      }
      if (!covered) {
        ++result.drops.manifest;
        continue;
      }
    }
    joined_ids.insert(rec->sample_id);
    result.rows.push_back(std::move(row));
  }

  for (const auto& [id, _] : keypoints) {
    if (!joined_ids.count(id)) ++result.drops.keypoints;
  }
  for (const auto& id : predicted_samples) {
    if (!joined_ids.count(id)) ++result.drops.predictions;
  }

  if (result.rows.empty()) {
    throw Error(ErrorKind::EmptyJoin, "no sample_id present in all sources");
  }
  return result;
}

}  // namespace biomaudit
