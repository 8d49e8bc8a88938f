#include <fstream>
#include <sstream>

#include "shotlab/csv.hpp"
#include "shotlab/error.hpp"
#include "shotlab/harness.hpp"

namespace shotlab::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> list_items(std::string_view value) {
  std::vector<std::string> out;
  for (const auto& item : csv::split(value, ',')) {
    const auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::size_t positive_count(std::string_view key, std::string_view value) {
  long long v = 0;
  try {
    v = csv::parse_int(value);
  } catch (const Error&) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(value) + "'");
  }
  if (v < 1) throw ConfigError(std::string(key) + " must be at least 1");
  return static_cast<std::size_t>(v);
}

template <typename T, typename Parse>
std::string join(const std::vector<T>& items, Parse to_text) {
  std::string out;
  for (const auto& i : items) {
    if (!out.empty()) out += ",";
    out += to_text(i);
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::desk() { return {}; }

ExperimentConfig ExperimentConfig::paper() {
  ExperimentConfig c;
  c.n_cases = 240;
  c.seeds_per_case = 30;
  c.resamplers = {resample::Strategy::None, resample::Strategy::Smote, resample::Strategy::Adasyn,
                  resample::Strategy::SmoteTomek, resample::Strategy::SmoteEnn};
  c.grid_mode = models::GridMode::Full;
  return c;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source_name) {
  ExperimentConfig cfg = ExperimentConfig::desk();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto where = source_name + ":" + std::to_string(line_no) + ": ";
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    try {
      if (key == "preset") {
        if (value == "desk") {
          cfg = ExperimentConfig::desk();
        } else if (value == "paper") {
          cfg = ExperimentConfig::paper();
        } else {
          throw ConfigError("unknown preset '" + value + "' (expected desk|paper)");
        }
      } else if (key == "n_cases") {
        cfg.n_cases = positive_count(key, value);
      } else if (key == "seeds_per_case") {
        cfg.seeds_per_case = positive_count(key, value);
      } else if (key == "master_seed") {
        cfg.master_seed = csv::parse_uint64(value);
      } else if (key == "resamplers") {
        cfg.resamplers.clear();
        for (const auto& t : list_items(value)) cfg.resamplers.push_back(resample::parse_strategy(t));
      } else if (key == "families") {
        cfg.families.clear();
        for (const auto& t : list_items(value)) cfg.families.push_back(models::parse_family(t));
      } else if (key == "grid_mode") {
        cfg.grid_mode = models::parse_grid_mode(value);
      } else if (key == "artifact_dir") {
        if (value.empty()) throw ConfigError("artifact_dir must not be empty");
        cfg.artifact_dir = value;
      } else if (key == "jobs") {
        cfg.jobs = positive_count(key, value);
      } else if (key == "test_fraction") {
        cfg.test_fraction = csv::parse_double(value);
      } else if (key == "cv_folds") {
        cfg.cv_folds = positive_count(key, value);
      } else if (key == "timing_repeats") {
        cfg.timing_repeats = static_cast<int>(positive_count(key, value));
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const Error& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

std::string format_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "n_cases = " << cfg.n_cases << "\n"
      << "seeds_per_case = " << cfg.seeds_per_case << "\n"
      << "master_seed = " << cfg.master_seed << "\n"
      << "resamplers = " << join(cfg.resamplers, [](auto s) { return std::string(resample::to_string(s)); }) << "\n"
      << "families = " << join(cfg.families, [](auto f) { return std::string(models::token(f)); }) << "\n"
      << "grid_mode = " << models::to_string(cfg.grid_mode) << "\n"
      << "artifact_dir = " << cfg.artifact_dir.string() << "\n"
      << "jobs = " << cfg.jobs << "\n"
      << "test_fraction = " << csv::format_exact(cfg.test_fraction) << "\n"
      << "cv_folds = " << cfg.cv_folds << "\n"
      << "timing_repeats = " << cfg.timing_repeats << "\n";
  return out.str();
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n_cases < 1) throw ConfigError("n_cases must be at least 1");
  if (cfg.seeds_per_case < 1) throw ConfigError("seeds_per_case must be at least 1");
  if (cfg.resamplers.empty()) throw ConfigError("resamplers must list at least one strategy");
  if (cfg.families.empty()) throw ConfigError("families must list at least one model family");
  for (std::size_t i = 0; i < cfg.resamplers.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cfg.resamplers[i] == cfg.resamplers[j]) throw ConfigError("resamplers lists a strategy twice");
    }
  }
  for (std::size_t i = 0; i < cfg.families.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cfg.families[i] == cfg.families[j]) throw ConfigError("families lists a model family twice");
    }
  }
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) throw ConfigError("test_fraction must be in (0, 1)");
  if (cfg.cv_folds < 2) throw ConfigError("cv_folds must be at least 2");
  if (cfg.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (cfg.timing_repeats < 1) throw ConfigError("timing_repeats must be at least 1");
  if (cfg.artifact_dir.empty()) throw ConfigError("artifact_dir must not be empty");
}

}  // namespace shotlab::harness
