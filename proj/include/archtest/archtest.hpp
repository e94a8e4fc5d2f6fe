#ifndef ARCHTEST_ARCHTEST_HPP
#define ARCHTEST_ARCHTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "archtest/empirical_copula.hpp"
#include "archtest/multiplier.hpp"
#include "archtest/process.hpp"

namespace archtest {

enum class Hypothesis { kAssociativity, kArchimedeanity };

std::string to_string(Hypothesis h);
std::string to_string(Statistic s);

struct TestConfig {
  Hypothesis hypothesis = Hypothesis::kArchimedeanity;
  Statistic statistic = Statistic::kL2;
  double alpha = 0.05;
  int B = 200;
  int grid_m = 20;
  double bandwidth = 0.0;  // <= 0 means the default h = n^(-1/4)
  std::uint64_t seed = 0;
  TiePolicy ties = TiePolicy::kRandomBreak;
  int jobs = 1;
};

struct TestReport {
  int n = 0;
  Hypothesis hypothesis;
  Statistic statistic;
  double alpha = 0.0;
  double t_value = 0.0;
  double a_n = 0.0;
  double k_n = 0.0;
  double penalty = 0.0;
  double s_value = 0.0;
  double q_alpha = 0.0;
  double q05 = 0.0;
  double p_value = 0.0;
  bool reject = false;
  std::vector<double> fixed_points;  // {i/n : C_n(i/n,i/n) = i/n}
  int bootstrap_redraws = 0;
  std::vector<std::string> warnings;
  TestConfig config;  // provenance

  nlohmann::json to_json() const;
};

// Diagonal statistic A_n = max{(i/n)(1-i/n) : C_n(i/n,i/n) = i/n}, detected
// by the exact integer test cum[i][i] == i. The endpoints always hit and
// contribute 0, so the empty interior gives 0.
double an_statistic(const EmpiricalCopula& ec);

// Penalty term k_n * phi(A_n) with phi(x) = (4x)^2 and k_n = q05 * n^(1/4).
double penalty_term(double a_n, double q05, int n);

// One bootstrap pass supporting both hypotheses, both statistics, and any
// number of test levels; run_test is a thin view into this.
struct Battery {
  int n = 0;
  double t_l2 = 0.0, t_ks = 0.0;
  double a_n = 0.0;
  BootstrapPair boot;
  std::vector<double> fixed_points;
  std::vector<std::string> warnings;

  const std::vector<double>& stats(Statistic s) const {
    return s == Statistic::kL2 ? boot.l2 : boot.ks;
  }
  double t_value(Statistic s) const {
    return s == Statistic::kL2 ? t_l2 : t_ks;
  }
  // The statistic actually thresholded: T for associativity, S = T + penalty
  // for Archimedeanity.
  double tested_statistic(Hypothesis h, Statistic s) const;
  bool rejects(Hypothesis h, Statistic s, double alpha) const;
};

Battery run_battery(const Sample& sample, const TestConfig& config);

TestReport run_test(const Sample& sample, const TestConfig& config);

}  // namespace archtest

#endif  // ARCHTEST_ARCHTEST_HPP
