#ifndef ARCHTEST_STUDY_HPP
#define ARCHTEST_STUDY_HPP

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "archtest/archtest.hpp"

namespace archtest {

struct Scenario {
  std::string model;  // model spec string
  int n = 0;          // 0 means the study default
};

// Monte Carlo study configuration. Parsed from a flat key=value file:
//
//   seed = 42
//   runs = 200
//   B = 200
//   n = 200
//   grid_m = 20
//   alpha = 0.1, 0.05
//   stat = l2, ks
//   hypothesis = arch, assoc
//   jobs = auto
//   scenario = clayton(tau=1/3)
//   scenario = t(tau=1/3,df=1) n=500
//
// '#' starts a comment; scenario lines may override n after the spec.
struct StudyConfig {
  std::vector<Scenario> scenarios;
  int runs = 200;
  int B = 200;
  int default_n = 200;
  int grid_m = 20;
  double bandwidth = 0.0;
  std::vector<double> alphas{0.1, 0.05};
  std::vector<Statistic> statistics{Statistic::kL2, Statistic::kKS};
  std::vector<Hypothesis> hypotheses{Hypothesis::kArchimedeanity,
                                     Hypothesis::kAssociativity};
  std::uint64_t seed = 0;
  int jobs = 0;  // 0 = auto
};

StudyConfig parse_study_config(std::istream& in);
StudyConfig parse_study_config_file(const std::string& path);

// One (hypothesis, statistic, alpha) cell of the result table.
struct StudyCell {
  Hypothesis hypothesis;
  Statistic statistic;
  double alpha;
  int rejections = 0;
  int runs_ok = 0;
  double rate() const { return runs_ok ? double(rejections) / runs_ok : 0.0; }
  double standard_error() const {
    if (!runs_ok) return 0.0;
    double p = rate();
    return std::sqrt(p * (1.0 - p) / runs_ok);
  }
};

struct ScenarioResult {
  std::string model;
  int n = 0;
  std::vector<StudyCell> cells;
  // Per-run decision log, cells-major: decisions[c][r] for cell c, run r.
  std::vector<std::vector<std::uint8_t>> decisions;
  std::vector<std::string> errors;  // "run 17: <message>"
};

struct StudyResult {
  StudyConfig config;
  std::vector<ScenarioResult> scenarios;
  double wall_seconds = 0.0;

  // include_timing=false yields the canonical payload whose bytes are
  // independent of load and worker count.
  nlohmann::json to_json(bool include_timing = true) const;
  // Rate-table CSV: one row per scenario, one rate column per
  // (statistic, alpha, hypothesis) combination.
  void write_csv(std::ostream& out) const;
};

StudyResult run_study(const StudyConfig& config);

}  // namespace archtest

#endif  // ARCHTEST_STUDY_HPP
