#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "archtest/archtest.hpp"
#include "archtest/csv.hpp"
#include "archtest/model_spec.hpp"
#include "archtest/study.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitReject = 3;

struct CommonDataFlags {
  std::string input;
  bool has_header = false;
  std::string delimiter = ",";
  int col1 = 1;  // 1-based on the command line
  int col2 = 2;

  void attach(CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("-i,--input", input, "input CSV file");
    if (required) opt->required();
    cmd->add_flag("--has-header", has_header, "skip the first CSV line");
    cmd->add_option("--delimiter", delimiter, "CSV delimiter (default ,)");
    cmd->add_option("--col1", col1, "1-based index of the first data column");
    cmd->add_option("--col2", col2, "1-based index of the second data column");
  }

  archtest::Sample read() const {
    archtest::CsvOptions options;
    options.has_header = has_header;
    options.delimiter = delimiter.empty() ? ',' : delimiter[0];
    options.col1 = col1 - 1;
    options.col2 = col2 - 1;
    return archtest::read_csv_file(input, options);
  }
};

struct TestFlags {
  std::string hypothesis = "arch";
  std::string stat = "l2";
  double alpha = 0.05;
  int B = 200;
  int grid_m = 20;
  double bandwidth = 0.0;
  std::uint64_t seed = 0;
  std::string ties = "random";
  int jobs = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--hypothesis", hypothesis, "arch | assoc")
        ->check(CLI::IsMember({"arch", "assoc"}));
    cmd->add_option("--stat", stat, "l2 | ks")
        ->check(CLI::IsMember({"l2", "ks"}));
    cmd->add_option("--alpha", alpha, "test level in (0,1)");
    cmd->add_option("-B,--bootstrap", B, "bootstrap replications");
    cmd->add_option("--grid-m", grid_m, "grid points per axis");
    cmd->add_option("--bandwidth", bandwidth,
                    "derivative bandwidth (0 = n^(-1/4))");
    cmd->add_option("--seed", seed, "master RNG seed");
    cmd->add_option("--ties", ties, "error | random")
        ->check(CLI::IsMember({"error", "random"}));
    cmd->add_option("--jobs", jobs, "worker threads (0 = auto)");
  }

  archtest::TestConfig to_config() const {
    archtest::TestConfig config;
    config.hypothesis = hypothesis == "arch"
                            ? archtest::Hypothesis::kArchimedeanity
                            : archtest::Hypothesis::kAssociativity;
    config.statistic =
        stat == "l2" ? archtest::Statistic::kL2 : archtest::Statistic::kKS;
    config.alpha = alpha;
    config.B = B;
    config.grid_m = grid_m;
    config.bandwidth = bandwidth;
    config.seed = seed;
    config.ties = ties == "error" ? archtest::TiePolicy::kError
                                  : archtest::TiePolicy::kRandomBreak;
    config.jobs = jobs;
    return config;
  }
};

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  return file;
}

int cmd_test(const CommonDataFlags& data, const TestFlags& flags,
             const std::string& out_path) {
  archtest::Sample sample = data.read();
  archtest::TestReport report =
      archtest::run_test(sample, flags.to_config());
  for (const auto& warning : report.warnings) {
    std::cerr << "warning: " << warning << '\n';
  }
  std::ofstream file;
  open_out(out_path, file) << report.to_json().dump(2) << '\n';
  return report.reject ? kExitReject : kExitOk;
}

int cmd_sample(const std::string& model_spec, int n, std::uint64_t seed,
               const std::string& out_path) {
  auto model = archtest::parse_model_spec(model_spec);
  archtest::Rng rng =
      archtest::make_rng(seed, {archtest::stream::kData});
  archtest::Sample sample;
  sample.rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto [u1, u2] = model->sample(rng);
    sample.rows.push_back({u1, u2});
  }
  std::ofstream file;
  archtest::write_csv(sample, open_out(out_path, file));
  return kExitOk;
}

int cmd_study(const std::string& config_path, const std::string& out_path,
              const std::string& csv_path, std::optional<int> jobs_override,
              bool omit_timing) {
  archtest::StudyConfig config =
      archtest::parse_study_config_file(config_path);
  if (jobs_override) config.jobs = *jobs_override;
  archtest::StudyResult result = archtest::run_study(config);
  std::ofstream file;
  open_out(out_path, file) << result.to_json(!omit_timing).dump(2) << '\n';
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) {
      throw std::runtime_error("cannot open '" + csv_path + "' for writing");
    }
    result.write_csv(csv);
  }
  return kExitOk;
}

int cmd_diag(const CommonDataFlags& data, const std::string& model_spec,
             int n, std::uint64_t seed, const std::string& ties,
             const std::string& out_path) {
  archtest::CopulaPtr model;
  if (!model_spec.empty()) model = archtest::parse_model_spec(model_spec);

  archtest::Sample sample;
  if (!data.input.empty()) {
    sample = data.read();
  } else if (model) {
    archtest::Rng rng = archtest::make_rng(seed, {archtest::stream::kData});
    sample.rows.reserve(n);
    for (int i = 0; i < n; ++i) {
      auto [u1, u2] = model->sample(rng);
      sample.rows.push_back({u1, u2});
    }
  } else {
    throw std::runtime_error("diag needs --input and/or --model");
  }

  archtest::Rng tie_rng =
      archtest::make_rng(seed, {archtest::stream::kTies});
  archtest::EmpiricalCopula ec(archtest::ranks(
      sample,
      ties == "error" ? archtest::TiePolicy::kError
                      : archtest::TiePolicy::kRandomBreak,
      tie_rng));

  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  out << "u,empirical_diag" << (model ? ",model_diag" : "")
      << ",fixed_point\n";
  out.precision(12);
  int nn = ec.n();
  for (int i = 0; i <= nn; ++i) {
    double u = i / double(nn);
    out << u << ',' << ec.count(i, i) / double(nn);
    if (model) out << ',' << model->diagonal(u);
    out << ',' << (ec.count(i, i) == i ? 1 : 0) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Nonparametric tests for associativity and Archimedeanity of a "
      "bivariate copula (empirical-copula process + multiplier bootstrap)"};
  app.require_subcommand(1);

  // test
  auto* test = app.add_subcommand(
      "test", "run one hypothesis test on CSV data (exit 3 = rejected)");
  CommonDataFlags test_data;
  TestFlags test_flags;
  std::string test_out;
  test_data.attach(test, /*required=*/true);
  test_flags.attach(test);
  test->add_option("--out", test_out, "write the JSON report here");

  // sample
  auto* sample = app.add_subcommand("sample", "draw from a copula model");
  std::string sample_model;
  int sample_n = 200;
  std::uint64_t sample_seed = 0;
  std::string sample_out;
  sample->add_option("--model", sample_model, "model spec, e.g. clayton(theta=1)")
      ->required();
  sample->add_option("-n,--rows", sample_n, "number of rows");
  sample->add_option("--seed", sample_seed, "RNG seed");
  sample->add_option("--out", sample_out, "output CSV path");

  // study
  auto* study = app.add_subcommand(
      "study", "run a Monte Carlo rejection-rate study from a config file");
  std::string study_config, study_out, study_csv;
  std::optional<int> study_jobs;
  bool study_omit_timing = false;
  study->add_option("--config", study_config, "study config file")->required();
  study->add_option("--out", study_out, "JSON result path");
  study->add_option("--csv", study_csv, "rate-table CSV path");
  study->add_option("--jobs", study_jobs, "override worker count (0 = auto)");
  study->add_flag("--omit-timing", study_omit_timing,
                  "omit wall-clock timing from the JSON payload");

  // diag
  auto* diag = app.add_subcommand(
      "diag", "emit diagonal-section diagnostics (empirical and/or model)");
  CommonDataFlags diag_data;
  std::string diag_model, diag_ties = "random", diag_out;
  int diag_n = 200;
  std::uint64_t diag_seed = 0;
  diag_data.attach(diag, /*required=*/false);
  diag->add_option("--model", diag_model, "model spec for the reference curve");
  diag->add_option("-n,--rows", diag_n, "rows to generate when no CSV given");
  diag->add_option("--seed", diag_seed, "RNG seed");
  diag->add_option("--ties", diag_ties, "error | random")
      ->check(CLI::IsMember({"error", "random"}));
  diag->add_option("--out", diag_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (test->parsed()) return cmd_test(test_data, test_flags, test_out);
    if (sample->parsed()) {
      return cmd_sample(sample_model, sample_n, sample_seed, sample_out);
    }
    if (study->parsed()) {
      return cmd_study(study_config, study_out, study_csv, study_jobs,
                       study_omit_timing);
    }
    if (diag->parsed()) {
      return cmd_diag(diag_data, diag_model, diag_n, diag_seed, diag_ties,
                      diag_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
