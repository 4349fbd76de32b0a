#include "biomaudit/report.hpp"

#include <algorithm>
#include <sstream>

#include "biomaudit/csv.hpp"
#include "biomaudit/errors.hpp"

namespace biomaudit {

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c; break;
    }
  }
  return out;
}

const char* bar_color(int direction) {
  if (direction > 0) return "#1f77b4";
  if (direction < 0) return "#d62728";
  return "#7f7f7f";
}

}  // namespace

std::string render_bar_chart_svg(const std::vector<FeatureImportance>& ranking,
                                 const std::string& title) {
  constexpr int kWidth = 640;
  constexpr int kBarHeight = 22;
  constexpr int kBarGap = 8;
  constexpr int kLabelWidth = 120;
  constexpr int kTopMargin = 40;
  constexpr int kRightMargin = 70;

  const int height = kTopMargin + static_cast<int>(ranking.size()) * (kBarHeight + kBarGap) + 10;
  double max_value = 0.0;
  for (const auto& fi : ranking) max_value = std::max(max_value, fi.mean_abs_phi);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << height << "\" viewBox=\"0 0 " << kWidth << " " << height << "\">\n";
  svg << "  <style>text{font-family:sans-serif;font-size:12px;}</style>\n";
  svg << "  <text x=\"8\" y=\"20\" font-size=\"14\">" << xml_escape(title) << "</text>\n";

  const int plot_width = kWidth - kLabelWidth - kRightMargin;
  int y = kTopMargin;
  for (const auto& fi : ranking) {
    const double frac = max_value > 0.0 ? fi.mean_abs_phi / max_value : 0.0;
    const int w = std::max(1, static_cast<int>(frac * plot_width));
    svg << "  <text x=\"" << (kLabelWidth - 6) << "\" y=\"" << (y + kBarHeight - 7)
        << "\" text-anchor=\"end\">" << xml_escape(fi.feature) << "</text>\n";
    svg << "  <rect x=\"" << kLabelWidth << "\" y=\"" << y << "\" width=\"" << w
        << "\" height=\"" << kBarHeight << "\" fill=\"" << bar_color(fi.direction) << "\"/>\n";
    svg << "  <text x=\"" << (kLabelWidth + w + 6) << "\" y=\"" << (y + kBarHeight - 7) << "\">"
        << format_double(fi.mean_abs_phi) << "</text>\n";
    y += kBarHeight + kBarGap;
  }
  svg << "</svg>\n";
  return svg.str();
}

namespace {

nlohmann::json csv_to_json(const CsvTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      obj[table.header[i]] = row[i];
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

CsvTable require_csv(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::MissingUpstream, path.filename().string() + " (run the producing command first)");
  }
  return read_csv(path);
}

}  // namespace

nlohmann::json assemble_report(const std::filesystem::path& out_dir) {
  nlohmann::json report;
  report["dataset_stats"] = csv_to_json(require_csv(out_dir / "stats.csv"));
  report["rankings"] = csv_to_json(require_csv(out_dir / "rankings.csv"));
  report["metrics"] = csv_to_json(require_csv(out_dir / "metrics.csv"));

  const auto fi_path = out_dir / "fi.csv";
  report["face_importance"] =
      std::filesystem::exists(fi_path) ? csv_to_json(read_csv(fi_path)) : nlohmann::json();
  const auto compare_path = out_dir / "compare.csv";
  report["correct_vs_all"] = std::filesystem::exists(compare_path)
                                 ? csv_to_json(read_csv(compare_path))
                                 : nlohmann::json();
  return report;
}

}  // namespace biomaudit
