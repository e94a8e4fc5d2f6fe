#include "archtest/archtest.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace archtest {

std::string to_string(Hypothesis h) {
  return h == Hypothesis::kAssociativity ? "assoc" : "arch";
}

std::string to_string(Statistic s) {
  return s == Statistic::kL2 ? "l2" : "ks";
}

double an_statistic(const EmpiricalCopula& ec) {
  int n = ec.n();
  double best = 0.0;
  for (int i = 1; i < n; ++i) {
    if (ec.count(i, i) == i) {
      double frac = i / double(n);
      best = std::max(best, frac * (1.0 - frac));
    }
  }
  return best;
}

double penalty_term(double a_n, double q05, int n) {
  if (!(a_n >= 0.0 && a_n <= 0.25)) {
    throw std::invalid_argument("a_n must lie in [0, 1/4]");
  }
  if (q05 < 0.0) {
    throw std::invalid_argument("q05 must be >= 0");
  }
  double phi = (4.0 * a_n) * (4.0 * a_n);
  return q05 * std::pow(static_cast<double>(n), 0.25) * phi;
}

double Battery::tested_statistic(Hypothesis h, Statistic s) const {
  double t = t_value(s);
  if (h == Hypothesis::kAssociativity) return t;
  double q05 = quantile(stats(s), 0.05);
  return t + penalty_term(a_n, q05, n);
}

bool Battery::rejects(Hypothesis h, Statistic s, double alpha) const {
  return tested_statistic(h, s) > quantile(stats(s), 1.0 - alpha);
}

Battery run_battery(const Sample& sample, const TestConfig& config) {
  if (config.B < 1) throw std::invalid_argument("config error: B must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::invalid_argument("config error: alpha must lie in (0,1)");
  }
  int n = sample.n();
  if (n < 20) {
    throw std::invalid_argument("config error: need at least n = 20 rows");
  }

  Battery battery;
  battery.n = n;
  if (n < 50) {
    battery.warnings.push_back("n < 50: asymptotic approximation is rough");
  }
  if (config.B < 50) {
    battery.warnings.push_back("B < 50: bootstrap quantiles are coarse");
  }

  Rng tie_rng = make_rng(config.seed, {stream::kTies});
  EmpiricalCopula ec(ranks(sample, config.ties, tie_rng));

  Grid3 grid(config.grid_m);
  double h = config.bandwidth > 0.0
                 ? config.bandwidth
                 : std::pow(static_cast<double>(n), -0.25);

  ProcessField field = hn_field(ec, grid);
  battery.t_l2 = statistic_l2(field);
  battery.t_ks = statistic_ks(field);
  battery.a_n = an_statistic(ec);
  for (int i = 0; i <= n; ++i) {
    if (ec.count(i, i) == i) battery.fixed_points.push_back(i / double(n));
  }
  battery.boot =
      bootstrap_pair(ec, grid, h, config.B, config.seed, config.jobs);
  return battery;
}

TestReport run_test(const Sample& sample, const TestConfig& config) {
  Battery battery = run_battery(sample, config);

  TestReport report;
  report.n = battery.n;
  report.hypothesis = config.hypothesis;
  report.statistic = config.statistic;
  report.alpha = config.alpha;
  report.config = config;
  report.t_value = battery.t_value(config.statistic);
  report.a_n = battery.a_n;
  report.fixed_points = battery.fixed_points;
  report.bootstrap_redraws = battery.boot.redraws;
  report.warnings = battery.warnings;

  const auto& stats = battery.stats(config.statistic);
  report.q05 = quantile(stats, 0.05);
  report.q_alpha = quantile(stats, 1.0 - config.alpha);
  report.k_n = report.q05 * std::pow(static_cast<double>(report.n), 0.25);
  report.penalty = config.hypothesis == Hypothesis::kArchimedeanity
                       ? penalty_term(battery.a_n, report.q05, report.n)
                       : 0.0;
  report.s_value = report.t_value + penalty_term(battery.a_n, report.q05,
                                                 report.n);

  double tested = config.hypothesis == Hypothesis::kArchimedeanity
                      ? report.s_value
                      : report.t_value;
  report.reject = tested > report.q_alpha;
  int count = 0;
  for (double s : stats) {
    if (s >= tested) ++count;
  }
  report.p_value = (1.0 + count) / (config.B + 1.0);
  return report;
}

nlohmann::json TestReport::to_json() const {
  nlohmann::json j;
  j["schema"] = "archtest-report/1";
  j["n"] = n;
  j["hypothesis"] = to_string(hypothesis);
  j["statistic"] = to_string(statistic);
  j["alpha"] = alpha;
  j["T"] = t_value;
  j["A_n"] = a_n;
  j["k_n"] = k_n;
  j["penalty"] = penalty;
  j["S"] = s_value;
  j["q_alpha"] = q_alpha;
  j["q05"] = q05;
  j["p_value"] = p_value;
  j["reject"] = reject;
  j["diagnostics"] = {{"fixed_points", fixed_points},
                      {"bootstrap_redraws", bootstrap_redraws},
                      {"warnings", warnings}};
  j["provenance"] = {{"seed", config.seed},
                     {"B", config.B},
                     {"grid_m", config.grid_m},
                     {"bandwidth", config.bandwidth},
                     {"ties", config.ties == TiePolicy::kError ? "error"
                                                               : "random"},
                     {"jobs", config.jobs}};
  return j;
}

}  // namespace archtest
