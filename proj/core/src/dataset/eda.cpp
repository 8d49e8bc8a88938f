#include <fstream>

#include "shotlab/csv.hpp"
#include "shotlab/dataset.hpp"
#include "shotlab/error.hpp"

namespace shotlab::dataset {
namespace {

std::string fmt(double v) { return csv::format_fixed(v, 6); }

std::string md(double v, int decimals) { return csv::format_fixed(v, decimals); }

}  // namespace

std::vector<std::filesystem::path> write_eda(const std::filesystem::path& out_dir, const Dataset& ds) {
  if (ds.size() == 0) throw SizeError("exploratory analysis needs a non-empty dataset");
  std::filesystem::create_directories(out_dir);
  const auto names = column_names();
  const auto features = feature_names();
  const LabeledMatrix lm = ds.labeled();
  const auto stats = describe(lm.X, features);
  const auto corr = pearson_matrix(ds.with_label());
  const auto balance = class_balance(lm.y);

  csv::Table st;
  st.header = {"feature", "mean", "std", "min", "q25", "median", "q75", "max"};
  for (const auto& s : stats) {
    st.rows.push_back({s.name, fmt(s.mean), fmt(s.std), fmt(s.min), fmt(s.q25), fmt(s.median), fmt(s.q75),
                       fmt(s.max)});
  }
  const auto stats_path = out_dir / "eda_stats.csv";
  csv::write(stats_path, st);

  csv::Table ct;
  ct.header.push_back("variable");
  ct.header.insert(ct.header.end(), names.begin(), names.end());
  for (std::size_t a = 0; a < names.size(); ++a) {
    std::vector<std::string> row{names[a]};
    for (std::size_t b = 0; b < names.size(); ++b) row.push_back(fmt(corr.r(a, b)));
    ct.rows.push_back(std::move(row));
  }
  const auto corr_path = out_dir / "correlation.csv";
  csv::write(corr_path, ct);

  const auto report_path = out_dir / "eda_report.md";
  std::ofstream md_out(report_path, std::ios::binary);
  if (!md_out) throw Error("cannot write " + report_path.string());
  md_out << "# Exploratory data analysis\n\n";
  md_out << "Rows: " << ds.size() << "\n\n";
  md_out << "## Class balance\n\n";
  md_out << "| class | count |\n|---|---:|\n";
  md_out << "| KILL | " << balance.positives << " |\n";
  md_out << "| NO KILL | " << balance.negatives << " |\n\n";
  md_out << "Minority fraction: " << md(balance.minority_fraction, 4) << "\n\n";
  md_out << "## Descriptive statistics\n\n";
  md_out << "| Variable | Mean | Std | Min | 25% | Median | 75% | Max |\n";
  md_out << "|---|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& s : stats) {
    md_out << "| " << s.name << " | " << md(s.mean, 1) << " | " << md(s.std, 1) << " | " << md(s.min, 1) << " | "
           << md(s.q25, 1) << " | " << md(s.median, 1) << " | " << md(s.q75, 1) << " | " << md(s.max, 1)
           << " |\n";
  }
  if (lm.X.rows() >= 50) {
    md_out << "\n## Mutual information with kill\n\n";
    md_out << "| Rank | Variable | MI [nats] |\n|---:|---|---:|\n";
    const auto mi = mutual_info_rank(lm.X, lm.y, features);
    for (std::size_t i = 0; i < mi.size(); ++i) {
      md_out << "| " << i + 1 << " | " << mi[i].name << " | " << md(mi[i].nats, 4) << " |\n";
    }
  }
  md_out << "\n## Correlation with kill\n\n";
  md_out << "| Variable | Pearson r |\n|---|---:|\n";
  for (std::size_t a = 0; a < kFeatureCount; ++a) {
    md_out << "| " << names[a] << " | " << md(corr.r(a, kFeatureCount), 3) << " |\n";
  }
  if (!corr.constant_columns.empty()) {
    md_out << "\nConstant columns (correlations reported as 0):";
    for (auto c : corr.constant_columns) md_out << ' ' << names[c];
    md_out << '\n';
  }
  if (!md_out) throw Error("failed writing " + report_path.string());
  return {report_path, stats_path, corr_path};
}

}  // namespace shotlab::dataset
