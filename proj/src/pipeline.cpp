#include "biomaudit/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "biomaudit/csv.hpp"
#include "biomaudit/errors.hpp"
#include "biomaudit/headroi.hpp"
#include "biomaudit/imageio.hpp"
#include "biomaudit/parallel.hpp"
#include "biomaudit/report.hpp"

namespace biomaudit {

const std::vector<std::string> kFeatureCsvHeader = {
    "sample_id", "dataset",   "split",      "gender_gt",  "resolution", "luminosity",
    "blurriness", "face_conf", "upper_conf", "lower_conf", "pose_ord",   "pose"};

namespace {

void ensure_out_dir(const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec || !std::filesystem::is_directory(out)) {
    throw Error(ErrorKind::WriteError, "cannot create output directory " + out.string());
  }
}

void require_file(const std::filesystem::path& path, const std::string& what) {
  if (path.empty()) {
    throw Error(ErrorKind::InvalidConfig, what + " path not set");
  }
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::MissingFile, what + ": " + path.string());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::WriteError, "cannot open " + path.string());
  }
  out << text;
  if (!out) {
    throw Error(ErrorKind::WriteError, "write failed for " + path.string());
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

nlohmann::json drops_json(const JoinDrops& drops) {
  return {{"manifest", drops.manifest},
          {"keypoints", drops.keypoints},
          {"predictions", drops.predictions}};
}

const char* direction_name(int direction) {
  if (direction > 0) return "positive";
  if (direction < 0) return "negative";
  return "neutral";
}

}  // namespace

void write_features_csv(const std::filesystem::path& path, const std::vector<FeatureRow>& rows) {
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    out.push_back({row.sample_id, row.dataset, to_string(row.split),
                   std::to_string(row.gender_gt), format_double(row.values[kFeatResolution]),
                   format_double(row.values[kFeatLuminosity]),
                   format_double(row.values[kFeatBlurriness]),
                   format_double(row.values[kFeatFaceConf]),
                   format_double(row.values[kFeatUpperConf]),
                   format_double(row.values[kFeatLowerConf]),
                   std::to_string(static_cast<int>(row.pose)), to_string(row.pose)});
  }
  write_csv(path, kFeatureCsvHeader, out);
}

std::vector<FeatureRow> read_features_csv(const std::filesystem::path& path) {
  CsvTable table = read_csv(path);
  if (table.header != kFeatureCsvHeader) {
    throw Error(ErrorKind::ParseError, path.string() + ": unexpected features header");
  }
  std::vector<FeatureRow> rows;
  rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& in = table.rows[r];
    FeatureRow row;
    row.sample_id = in[0];
    row.dataset = in[1];
    try {
      row.split = split_from_string(in[2]);
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, "row " + std::to_string(r + 1) + ": " + e.detail());
    }
    row.gender_gt = parse_binary(in[3], r + 1);
    for (std::size_t f = 0; f < 6; ++f) {
      row.values[f] = parse_double(in[4 + f], r + 1);
    }
    const int pose_ord = static_cast<int>(parse_double(in[10], r + 1));
    row.pose = pose_from_ordinal(pose_ord);
    row.values[kFeatPose] = static_cast<double>(pose_ord);
    if (in[11] != to_string(row.pose)) {
      throw Error(ErrorKind::ParseError,
                  "row " + std::to_string(r + 1) + ": pose_ord and pose disagree");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

LabeledFeatures join_features_predictions(const std::vector<FeatureRow>& features,
                                          const PredictionTable& predictions) {
  std::map<std::string, std::map<std::string, int>> by_model;
  std::set<std::string> predicted_samples;
  for (const auto& p : predictions.rows) {
    by_model[p.model_id][p.sample_id] = p.gender_pred;
    predicted_samples.insert(p.sample_id);
  }

  LabeledFeatures out;
  out.model_ids = predictions.model_ids;
  std::set<std::string> joined;
  for (const auto& row : features) {
    std::vector<int> preds;
    preds.reserve(out.model_ids.size());
    bool covered = !out.model_ids.empty();
    for (const auto& model : out.model_ids) {
      auto it = by_model[model].find(row.sample_id);
      if (it == by_model[model].end()) {
        covered = false;
        break;
      }
      preds.push_back(it->second);
    }
    if (!covered) {
      ++out.dropped_features;
      continue;
    }
    FeatureRow labeled = row;
    labeled.meta_label = meta_label(preds, row.gender_gt);
    joined.insert(row.sample_id);
    out.rows.push_back(std::move(labeled));
    out.preds.push_back(std::move(preds));
  }
  for (const auto& id : predicted_samples) {
    if (!joined.count(id)) ++out.dropped_predictions;
  }
  if (out.rows.empty()) {
    throw Error(ErrorKind::EmptyJoin, "no sample joins features and predictions");
  }
  return out;
}

Matrix feature_matrix(const std::vector<FeatureRow>& rows) {
  Matrix x = Matrix::create(rows.size(), kFeatureCount);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      x.at(r, f) = rows[r].values[f];
    }
  }
  return x;
}

int run_features(const RunConfig& config, std::ostream& log) {
  require_file(config.manifest, "manifest");
  require_file(config.keypoints, "keypoints");
  ensure_out_dir(config.out);

  const auto manifest = load_manifest(config.manifest);
  const auto keypoints = load_keypoints(config.keypoints);
  const JoinResult join = join_records(manifest, keypoints.by_sample);

  struct PerSample {
    std::optional<FeatureRow> row;
    std::string error;
    bool degenerate = false;
  };
  std::vector<PerSample> results(join.rows.size());
  parallel_for(join.rows.size(), [&](std::size_t i) {
    const SampleRow& sample = join.rows[i];
    try {
      const PixelBuffer img = decode_image(sample.record.path);
      const ImageFeatures imgf = compute_image_features(img, config.lum_weights, config.kernel);
      const SubjectFeatures subjf = compute_subject_features(sample.keypoints);
      results[i].row = build_feature_row(sample.record, imgf, subjf);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DegenerateGeometry) {
        results[i].degenerate = true;
      } else {
        results[i].error = e.what();
      }
    }
  });

  std::vector<FeatureRow> rows;
  nlohmann::json errors = nlohmann::json::array();
  std::size_t degenerate_skips = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].row) {
      rows.push_back(std::move(*results[i].row));
    } else if (results[i].degenerate) {
      ++degenerate_skips;
    } else {
      errors.push_back({{"sample_id", join.rows[i].record.sample_id},
                        {"error", results[i].error}});
    }
  }
  write_features_csv(config.out / "features.csv", rows);

  nlohmann::json meta;
  meta["command"] = "features";
  meta["rows"] = rows.size();
  meta["join_drops"] = drops_json(join.drops);
  meta["degenerate_pose_skips"] = degenerate_skips;
  meta["clamped_confidences"] = keypoints.clamped_confidences;
  meta["duplicate_keypoint_entries"] = keypoints.duplicate_entries;
  meta["errors"] = errors;
  meta["config"] = {
      {"kernel", config.kernel == LaplacianKernel::FourNeighbor ? "4n" : "8n"},
      {"lum_weights", {config.lum_weights.r, config.lum_weights.g, config.lum_weights.b}},
      {"laplacian", "valid-region convolution (no padding), population variance"}};
  write_json(config.out / "features_meta.json", meta);

  log << "features: " << rows.size() << " rows; dropped " << join.drops.manifest
      << " manifest / " << join.drops.keypoints << " keypoint samples; " << degenerate_skips
      << " degenerate-pose skips; " << errors.size() << " errors\n";
  if (keypoints.clamped_confidences > 0) {
    log << "warning: clamped " << keypoints.clamped_confidences
        << " keypoint confidences into [0,1]\n";
  }
  return errors.empty() ? 0 : 1;
}

int run_explain(const RunConfig& config, std::ostream& log) {
  const auto features_path = config.out / "features.csv";
  require_file(features_path, "features CSV");
  if (config.predictions.empty()) {
    throw Error(ErrorKind::InvalidConfig, "at least one --predictions file is required");
  }
  for (const auto& p : config.predictions) require_file(p, "predictions");
  ensure_out_dir(config.out);

  const auto features = read_features_csv(features_path);
  const auto predictions = load_predictions(config.predictions);
  const LabeledFeatures joined = join_features_predictions(features, predictions);

  const Matrix x = feature_matrix(joined.rows);
  std::vector<int> y(joined.rows.size());
  std::vector<std::string> ids(joined.rows.size());
  std::vector<std::string> datasets(joined.rows.size());
  for (std::size_t i = 0; i < joined.rows.size(); ++i) {
    y[i] = joined.rows[i].meta_label;
    ids[i] = joined.rows[i].sample_id;
    datasets[i] = joined.rows[i].dataset;
  }

  FitParams fit = config.fit;
  fit.seed = config.seed;
  const TreeEnsemble model = fit_surrogate(x, y, fit);
  const Matrix background = subsample_background(x, config.background_cap, config.seed);
  const ExplanationSet set =
      explain_rows(model, x, ids, background,
                   {kFeatureNames.begin(), kFeatureNames.end()});

  // shapley.jsonl: one explanation per line, sorted by sample_id
  std::vector<std::size_t> order(set.items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return set.items[a].sample_id < set.items[b].sample_id;
  });
  std::string jsonl;
  for (std::size_t i : order) {
    nlohmann::json line;
    line["sample_id"] = set.items[i].sample_id;
    line["base"] = set.items[i].base;
    nlohmann::json phi;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      phi[kFeatureNames[f]] = set.items[i].phi[f];
    }
    line["phi"] = phi;
    jsonl += line.dump() + "\n";
  }
  write_text(config.out / "shapley.jsonl", jsonl);

  const auto ranking = mean_abs_shap(set);
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& fi : ranking) {
      rows.push_back({fi.feature, format_double(fi.mean_abs_phi), direction_name(fi.direction)});
    }
    write_csv(config.out / "rankings.csv", {"feature", "mean_abs_phi", "direction"}, rows);
  }

  nlohmann::json interactions;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const std::string feature = kFeatureNames[f];
    std::optional<std::string> partner;
    if (!config.interaction.empty()) {
      feature_index(config.interaction);  // validates the name
      partner = config.interaction;
    }
    const auto points = dependence_data(set, feature, partner);
    const std::string partner_name = partner ? *partner : pick_interaction(set, feature);
    interactions[feature] = partner_name;
    std::vector<std::vector<std::string>> rows;
    rows.reserve(points.size());
    for (const auto& p : points) {
      rows.push_back({p.sample_id, format_double(p.value), format_double(p.phi),
                      format_double(p.interaction_value)});
    }
    write_csv(config.out / ("dependence_" + feature + ".csv"),
              {"sample_id", feature, "phi", partner_name}, rows);
  }

  const auto stats = dataset_stats(raw_feature_table(joined.rows), config.norm);
  const auto tiers = assign_tiers(stats);
  const auto per_tier = per_quality_shap(set, datasets, tiers);
  {
    std::vector<std::string> header = {"feature"};
    for (Tier t : per_tier.tiers) header.push_back(to_string(t));
    std::vector<std::vector<std::string>> rows;
    for (std::size_t f = 0; f < per_tier.feature_names.size(); ++f) {
      std::vector<std::string> row = {per_tier.feature_names[f]};
      for (std::size_t c = 0; c < per_tier.tiers.size(); ++c) {
        row.push_back(format_double(per_tier.mean_abs[f][c]));
      }
      rows.push_back(std::move(row));
    }
    write_csv(config.out / "per_tier_shap.csv", header, rows);
  }

  nlohmann::json meta;
  meta["command"] = "explain";
  meta["rows"] = joined.rows.size();
  meta["dropped_features"] = joined.dropped_features;
  meta["dropped_predictions"] = joined.dropped_predictions;
  meta["models"] = joined.model_ids;
  meta["training_loss"] = model.training_loss;
  meta["n_trees"] = model.trees.size();
  meta["background_rows"] = background.rows;
  meta["max_efficiency_gap"] = set.max_efficiency_gap;
  meta["interactions"] = interactions;
  meta["params"] = {{"depth", fit.max_depth},
                    {"trees", fit.n_trees},
                    {"shrinkage", fit.shrinkage},
                    {"seed", config.seed},
                    {"background_cap", config.background_cap}};
  write_json(config.out / "explain_meta.json", meta);

  log << "explain: " << joined.rows.size() << " samples, " << joined.model_ids.size()
      << " models, training loss " << format_double(model.training_loss) << "\n";
  log << "top features by mean |phi|:\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(3, ranking.size()); ++i) {
    log << "  " << (i + 1) << ". " << ranking[i].feature << " ("
        << format_double(ranking[i].mean_abs_phi) << ", "
        << direction_name(ranking[i].direction) << ")\n";
  }
  return 0;
}

int run_faces(const RunConfig& config, std::ostream& log) {
  const auto features_path = config.out / "features.csv";
  require_file(features_path, "features CSV");
  require_file(config.manifest, "manifest");
  require_file(config.keypoints, "keypoints");
  ensure_out_dir(config.out);

  const auto features = read_features_csv(features_path);
  const auto manifest = load_manifest(config.manifest);
  const auto keypoints = load_keypoints(config.keypoints);

  std::map<std::string, const ImageRecord*> records;
  for (const auto& rec : manifest) records[rec.sample_id] = &rec;

  std::vector<CropInput> inputs;
  std::vector<std::pair<std::string, std::string>> lookup_errors;
  for (const auto& row : features) {
    auto rec = records.find(row.sample_id);
    auto kp = keypoints.by_sample.find(row.sample_id);
    if (rec == records.end() || kp == keypoints.by_sample.end()) {
      lookup_errors.emplace_back(
          row.sample_id,
          std::string(to_string(ErrorKind::UnknownSample)) + ": not present in manifest/keypoints");
      continue;
    }
    inputs.push_back({row.sample_id, rec->second->path, row.gender_gt, kp->second, row.pose});
  }

  CropBatchResult result = crop_heads(std::move(inputs), config.out);
  result.errors.insert(result.errors.end(), lookup_errors.begin(), lookup_errors.end());
  std::sort(result.errors.begin(), result.errors.end());

  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& entry : result.manifest) {
      rows.push_back({entry.sample_id, entry.face_path, std::to_string(entry.gender_gt)});
    }
    write_csv(config.out / "face_manifest.csv", {"sample_id", "face_path", "gender_gt"}, rows);
  }
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [id, error] : result.errors) rows.push_back({id, error});
    write_csv(config.out / "faces_errors.csv", {"sample_id", "error"}, rows);
  }

  log << "faces: " << result.manifest.size() << " crops, " << result.skipped_nonfrontal
      << " non-frontal skips, " << result.errors.size() << " errors\n";
  if (result.manifest.empty()) {
    log << "warning: no frontal samples, face manifest is empty\n";
  }
  return result.errors.empty() ? 0 : 1;
}

int run_metrics(const RunConfig& config, std::ostream& log) {
  const auto features_path = config.out / "features.csv";
  require_file(features_path, "features CSV");
  if (config.predictions.empty()) {
    throw Error(ErrorKind::InvalidConfig, "at least one --predictions file is required");
  }
  for (const auto& p : config.predictions) require_file(p, "predictions");
  ensure_out_dir(config.out);

  const auto features = read_features_csv(features_path);
  const auto predictions = load_predictions(config.predictions);
  const LabeledFeatures joined = join_features_predictions(features, predictions);

  std::vector<int> gt(joined.rows.size());
  for (std::size_t i = 0; i < joined.rows.size(); ++i) gt[i] = joined.rows[i].gender_gt;

  std::vector<std::vector<std::string>> metric_rows;
  for (std::size_t m = 0; m < joined.model_ids.size(); ++m) {
    std::vector<int> preds(joined.rows.size());
    for (std::size_t i = 0; i < joined.rows.size(); ++i) preds[i] = joined.preds[i][m];
    const double ma = mean_accuracy(gender_confusion(preds, gt));
    metric_rows.push_back({"mA:" + joined.model_ids[m], format_double(ma)});
    log << "mA " << joined.model_ids[m] << " = " << format_double(ma) << "\n";
  }
  double meta_rate = 0.0;
  for (const auto& row : joined.rows) meta_rate += row.meta_label;
  meta_rate /= static_cast<double>(joined.rows.size());
  metric_rows.push_back({"meta_all_correct_rate", format_double(meta_rate)});
  metric_rows.push_back({"n_samples", std::to_string(joined.rows.size())});
  write_csv(config.out / "metrics.csv", {"metric", "value"}, metric_rows);

  int exit_code = 0;
  try {
    const ComparisonReport report = compare_correct_vs_all(joined.rows);
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : report.rows) {
      rows.push_back({row.feature, format_double(row.correct_mean),
                      row.pose_fraction ? "" : format_double(row.correct_std),
                      format_double(row.all_mean),
                      row.pose_fraction ? "" : format_double(row.all_std)});
    }
    write_csv(config.out / "compare.csv",
              {"feature", "correct_mean", "correct_std", "all_mean", "all_std"}, rows);
    log << "correct-vs-all: " << report.correct_count << "/" << report.total_count
        << " samples correct under all models\n";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptySelection) throw;
    log << "error: " << e.what() << " (compare.csv not written)\n";
    exit_code = 1;
  }

  std::vector<std::vector<std::string>> fi_rows;
  if (!config.fi_pairs.empty()) {
    require_file(config.fi_pairs, "FI pairs");
    CsvTable pairs = read_csv(config.fi_pairs);
    if (pairs.header != std::vector<std::string>{"label", "mA_face", "mA_body"}) {
      throw Error(ErrorKind::ParseError, config.fi_pairs.string() + ": unexpected header");
    }
    for (std::size_t r = 0; r < pairs.rows.size(); ++r) {
      const double ma_face = parse_double(pairs.rows[r][1], r + 1);
      const double ma_body = parse_double(pairs.rows[r][2], r + 1);
      const double fi = face_importance(ma_face, ma_body);
      fi_rows.push_back({pairs.rows[r][0], format_double(ma_face), format_double(ma_body),
                         format_double(fi)});
    }
  }
  if (!config.face_predictions.empty()) {
    require_file(config.face_predictions, "face predictions");
    const auto face_preds = load_predictions({config.face_predictions});
    std::map<std::string, int> gt_by_id;
    for (const auto& row : joined.rows) gt_by_id[row.sample_id] = row.gender_gt;
    std::map<std::string, double> body_ma;
    for (std::size_t m = 0; m < joined.model_ids.size(); ++m) {
      std::vector<int> preds(joined.rows.size());
      for (std::size_t i = 0; i < joined.rows.size(); ++i) preds[i] = joined.preds[i][m];
      body_ma[joined.model_ids[m]] = mean_accuracy(gender_confusion(preds, gt));
    }
    for (const auto& model : face_preds.model_ids) {
      if (!body_ma.count(model)) continue;  // face-only model, no body baseline
      std::vector<int> fp, fgt;
      for (const auto& p : face_preds.rows) {
        if (p.model_id != model) continue;
        auto it = gt_by_id.find(p.sample_id);
        if (it == gt_by_id.end()) continue;
        fp.push_back(p.gender_pred);
        fgt.push_back(it->second);
      }
      if (fp.empty()) continue;
      const double ma_face = mean_accuracy(gender_confusion(fp, fgt));
      const double fi = face_importance(ma_face, body_ma[model]);
      fi_rows.push_back({"model:" + model, format_double(ma_face),
                         format_double(body_ma[model]), format_double(fi)});
    }
  }
  if (!fi_rows.empty()) {
    write_csv(config.out / "fi.csv", {"label", "mA_face", "mA_body", "fi"}, fi_rows);
    log << "face importance rows: " << fi_rows.size() << "\n";
  }
  return exit_code;
}

int run_tier(const RunConfig& config, std::ostream& log) {
  const auto features_path = config.out / "features.csv";
  require_file(features_path, "features CSV");
  ensure_out_dir(config.out);

  const auto features = read_features_csv(features_path);
  const auto stats = dataset_stats(raw_feature_table(features), config.norm);
  const auto tiers = assign_tiers(stats);

  std::vector<std::vector<std::string>> rows;
  for (std::size_t d = 0; d < stats.datasets.size(); ++d) {
    rows.push_back({stats.datasets[d], format_double(stats.stats[d][0].mean),
                    format_double(stats.stats[d][0].stddev), format_double(stats.stats[d][1].mean),
                    format_double(stats.stats[d][1].stddev), format_double(stats.stats[d][2].mean),
                    format_double(stats.stats[d][2].stddev),
                    to_string(tiers.by_dataset.at(stats.datasets[d]))});
  }
  write_csv(config.out / "stats.csv",
            {"dataset", "resolution_mean", "resolution_std", "luminosity_mean", "luminosity_std",
             "blurriness_mean", "blurriness_std", "tier"},
            rows);

  for (const auto& row : rows) {
    log << "dataset " << row[0] << ": tier " << row[7] << "\n";
  }
  if (tiers.tie_break_used) {
    log << "note: " << tiers.tie_note << "\n";
  }
  return 0;
}

int run_report(const RunConfig& config, std::ostream& log) {
  ensure_out_dir(config.out);
  nlohmann::json report = assemble_report(config.out);
  write_json(config.out / "report.json", report);

  std::vector<FeatureImportance> ranking;
  for (const auto& row : report["rankings"]) {
    FeatureImportance fi;
    fi.feature = row.at("feature").get<std::string>();
    fi.mean_abs_phi = std::stod(row.at("mean_abs_phi").get<std::string>());
    const std::string dir = row.at("direction").get<std::string>();
    fi.direction = dir == "positive" ? 1 : (dir == "negative" ? -1 : 0);
    ranking.push_back(std::move(fi));
  }
  write_text(config.out / "mean_abs_shap.svg",
             render_bar_chart_svg(ranking, "Mean |phi| per feature"));

  log << "report: " << (config.out / "report.json").string() << " and mean_abs_shap.svg written\n";
  return 0;
}

}  // namespace biomaudit
