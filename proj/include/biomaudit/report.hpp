#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "biomaudit/explain.hpp"

namespace biomaudit {

/// Horizontal bar chart of mean |phi| per feature; bar color encodes the
/// correlation direction (blue positive, red negative, gray neutral).
/// Valid SVG even with zero bars.
std::string render_bar_chart_svg(const std::vector<FeatureImportance>& ranking,
                                 const std::string& title);

/// Bundles stats.csv, rankings.csv and metrics.csv (plus fi.csv and
/// compare.csv when present) from out_dir into one JSON document.
/// Throws MissingUpstream naming the first absent required file.
nlohmann::json assemble_report(const std::filesystem::path& out_dir);

}  // namespace biomaudit
