#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shotlab/csv.hpp"
#include "shotlab/error.hpp"
#include "shotlab/evalreport.hpp"
#include "shotlab/models.hpp"
#include "shotlab/resample.hpp"

namespace shotlab::evalreport {

namespace {

std::size_t model_rank(const std::string& token) {
  const auto& all = models::all_families();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (models::token(all[i]) == token) return i;
  }
  return all.size();
}

std::size_t resampler_rank(const std::string& token) {
  const auto& all = resample::all_strategies();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (resample::to_string(all[i]) == token) return i;
  }
  return all.size();
}

std::string resampler_label(const std::string& token) {
  if (token == "smote") return "SMOTE";
  if (token == "adasyn") return "ADASYN";
  if (token == "tomek") return "TL";
  if (token == "enn") return "ENN";
  if (token == "smote-tomek") return "SMOTE-TL";
  if (token == "smote-enn") return "SMOTE-ENN";
  return token;
}

std::string model_label(const std::string& token) {
  try {
    return std::string(models::display_name(models::parse_family(token)));
  } catch (const ConfigError&) {
    return token;
  }
}

std::string f6(double v) { return csv::format_fixed(v, 6); }
std::string f3(double v) { return csv::format_fixed(v, 3); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace

MetricsRow make_row(std::string model, std::string resampler, const metrics::ConfusionCounts& c,
                    double inference_time_ms) {
  const auto s = metrics::from_confusion(c);
  return {std::move(model), std::move(resampler), s.accuracy, s.precision, s.recall, s.f1, inference_time_ms,
          s.zero_division};
}

double measure_inference_time_ms(const std::function<void()>& predict_all, int repeats) {
  if (repeats < 1) repeats = 1;
  predict_all();
  std::vector<double> ms;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    predict_all();
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  const std::size_t n = ms.size();
  return n % 2 ? ms[n / 2] : 0.5 * (ms[n / 2 - 1] + ms[n / 2]);
}

std::string row_label(const MetricsRow& row) {
  std::string label = model_label(row.model);
  if (row.resampler != "none") label += " + " + resampler_label(row.resampler);
  return label;
}

std::vector<MetricsRow> table_order(std::vector<MetricsRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
    const auto ka = std::pair(model_rank(a.model), resampler_rank(a.resampler));
    const auto kb = std::pair(model_rank(b.model), resampler_rank(b.resampler));
    return ka < kb;
  });
  return rows;
}

std::optional<double> relative_change_pct(double baseline, double value) {
  if (baseline == 0.0) return std::nullopt;
  return 100.0 * (value / baseline - 1.0);
}

Highlights highlight(std::span<const MetricsRow> rows) {
  Highlights h;
  h.f1_change.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].f1 > rows[h.best_overall].f1) h.best_overall = i;
    if (rows[i].resampler == "none" && (!h.best_baseline || rows[i].f1 > rows[*h.best_baseline].f1)) {
      h.best_baseline = i;
    }
    if (rows[i].resampler == "none") continue;
    for (const auto& base : rows) {
      if (base.model == rows[i].model && base.resampler == "none") {
        h.f1_change[i] = relative_change_pct(base.f1, rows[i].f1);
      }
    }
  }
  return h;
}

std::string results_csv(std::span<const MetricsRow> rows) {
  const auto h = highlight(rows);
  csv::Table t;
  t.header = {"model", "resampler", "accuracy", "precision", "recall", "f1", "f1_change_pct", "best_f1"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::string best;
    if (i == h.best_overall) best = "overall";
    if (h.best_baseline && i == *h.best_baseline) best = best.empty() ? "baseline" : best + "+baseline";
    t.rows.push_back({r.model, r.resampler, f6(r.accuracy), f6(r.precision), f6(r.recall), f6(r.f1),
                      h.f1_change[i] ? csv::format_fixed(*h.f1_change[i], 2) : "", best});
  }
  std::ostringstream out;
  csv::write(out, t);
  return out.str();
}

std::string results_markdown(std::span<const MetricsRow> rows) {
  const auto h = highlight(rows);
  std::ostringstream out;
  out << "# Classification results\n\n";
  out << "Positive class: KILL. Bold F1 marks the best row without resampling and the best row overall.\n\n";
  out << "| MODEL | ACC | PREC | REC | F1 | IT[ms] | F1 change |\n";
  out << "|---|---:|---:|---:|---:|---:|---:|\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool bold = i == h.best_overall || (h.best_baseline && i == *h.best_baseline);
    const std::string f1 = bold ? "**" + f3(r.f1) + "**" : f3(r.f1);
    std::string change = "";
    if (h.f1_change[i]) {
      change = (*h.f1_change[i] >= 0 ? "+" : "") + csv::format_fixed(*h.f1_change[i], 2) + "%";
    }
    out << "| " << row_label(r) << " | " << f3(r.accuracy) << " | " << f3(r.precision) << " | " << f3(r.recall)
        << " | " << f1 << " | " << csv::format_fixed(r.inference_time_ms, 1) << " | " << change << " |\n";
  }
  bool any_zero = false;
  for (const auto& r : rows) any_zero = any_zero || r.zero_division;
  if (any_zero) out << "\nSome rows had no positive predictions or no positive labels; those scores are reported as 0.\n";
  return out.str();
}

std::vector<std::filesystem::path> render_report(const std::filesystem::path& dir, std::vector<MetricsRow> rows) {
  if (rows.empty()) throw DataError("report needs at least one metrics row");
  std::filesystem::create_directories(dir);
  rows = table_order(std::move(rows));
  const auto csv_path = dir / "results.csv";
  const auto md_path = dir / "results.md";
  const auto timing_path = dir / "timings.csv";
  write_text(csv_path, results_csv(rows));
  write_text(md_path, results_markdown(rows));
  csv::Table t;
  t.header = {"model", "resampler", "inference_time_ms"};
  for (const auto& r : rows) t.rows.push_back({r.model, r.resampler, csv::format_fixed(r.inference_time_ms, 3)});
  csv::write(timing_path, t);
  return {csv_path, md_path, timing_path};
}

std::vector<MetricsRow> parse_results_csv(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  std::vector<MetricsRow> rows;
  const auto im = t.column("model"), ir = t.column("resampler"), ia = t.column("accuracy"),
             ip = t.column("precision"), irc = t.column("recall"), i1 = t.column("f1");
  for (const auto& row : t.rows) {
    MetricsRow r;
    r.model = row[im];
    r.resampler = row[ir];
    r.accuracy = csv::parse_double(row[ia]);
    r.precision = csv::parse_double(row[ip]);
    r.recall = csv::parse_double(row[irc]);
    r.f1 = csv::parse_double(row[i1]);
    rows.push_back(r);
  }
  return rows;
}

std::string diverging_color(double value) {
  // Blue (-1) through near-white (0) to red (+1).
  struct Rgb {
    double r, g, b;
  };
  constexpr Rgb kNeg{59, 76, 192};
  constexpr Rgb kMid{247, 247, 247};
  constexpr Rgb kPos{180, 4, 38};
  const double v = std::clamp(std::isfinite(value) ? value : 0.0, -1.0, 1.0);
  const Rgb& end = v < 0 ? kNeg : kPos;
  const double t = std::abs(v);
  auto mix = [&](double a, double b) { return static_cast<int>(std::lround(a + (b - a) * t)); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(kMid.r, end.r), mix(kMid.g, end.g), mix(kMid.b, end.b));
  return buf;
}

std::string correlation_svg(const Matrix& r, std::span<const std::string> names) {
  if (r.rows() != r.cols()) throw DataError("heatmap needs a square matrix");
  if (names.size() != r.rows()) throw DataError("heatmap label count does not match the matrix");
  const std::size_t n = r.rows();
  constexpr int kCell = 48;
  constexpr int kLeft = 150;
  constexpr int kTop = 150;
  const int grid = static_cast<int>(n) * kCell;
  const int width = kLeft + grid + 90;
  const int height = kTop + grid + 20;
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n";
  s << "<title>Pearson correlation matrix</title>\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const int y = kTop + static_cast<int>(i) * kCell;
    s << "<text class=\"row-label\" x=\"" << kLeft - 6 << "\" y=\"" << y + kCell / 2 + 4
      << "\" font-size=\"11\" text-anchor=\"end\">" << names[i] << "</text>\n";
    const int x = kLeft + static_cast<int>(i) * kCell + kCell / 2;
    s << "<text class=\"col-label\" x=\"" << x << "\" y=\"" << kTop - 6 << "\" font-size=\"11\" transform=\"rotate(-60 "
      << x << ' ' << kTop - 6 << ")\">" << names[i] << "</text>\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = r(i, j);
      const int x = kLeft + static_cast<int>(j) * kCell;
      const int y = kTop + static_cast<int>(i) * kCell;
      s << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\"" << kCell
        << "\" fill=\"" << diverging_color(v) << "\" stroke=\"#ffffff\"/>\n";
      s << "<text class=\"cell-value\" x=\"" << x + kCell / 2 << "\" y=\"" << y + kCell / 2 + 4
        << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"" << (std::abs(v) > 0.6 ? "#ffffff" : "#000000")
        << "\">" << csv::format_fixed(v, 2) << "</text>\n";
    }
  }
  // Color bar.
  const int bx = kLeft + grid + 20;
  constexpr int kSteps = 20;
  const double step_h = static_cast<double>(grid) / kSteps;
  for (int k = 0; k < kSteps; ++k) {
    const double v = 1.0 - 2.0 * (k + 0.5) / kSteps;
    s << "<rect class=\"scale\" x=\"" << bx << "\" y=\"" << csv::format_fixed(kTop + k * step_h, 1)
      << "\" width=\"16\" height=\"" << csv::format_fixed(step_h + 0.5, 1) << "\" fill=\"" << diverging_color(v)
      << "\"/>\n";
  }
  s << "<text class=\"scale-label\" x=\"" << bx + 22 << "\" y=\"" << kTop + 10 << "\" font-size=\"11\">1</text>\n";
  s << "<text class=\"scale-label\" x=\"" << bx + 22 << "\" y=\"" << kTop + grid / 2 + 4
    << "\" font-size=\"11\">0</text>\n";
  s << "<text class=\"scale-label\" x=\"" << bx + 22 << "\" y=\"" << kTop + grid << "\" font-size=\"11\">-1</text>\n";
  s << "</svg>\n";
  return s.str();
}

void write_correlation_svg(const std::filesystem::path& path, const Matrix& r, std::span<const std::string> names) {
  write_text(path, correlation_svg(r, names));
}

}  // namespace shotlab::evalreport
