#include "archtest/study.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "archtest/model_spec.hpp"
#include "archtest/parallel.hpp"

namespace archtest {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::istringstream is(value);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

Statistic parse_statistic(const std::string& s, int line) {
  if (s == "l2") return Statistic::kL2;
  if (s == "ks") return Statistic::kKS;
  throw std::runtime_error("line " + std::to_string(line) +
                           ": unknown statistic '" + s + "' (use l2 or ks)");
}

Hypothesis parse_hypothesis(const std::string& s, int line) {
  if (s == "arch") return Hypothesis::kArchimedeanity;
  if (s == "assoc") return Hypothesis::kAssociativity;
  throw std::runtime_error("line " + std::to_string(line) +
                           ": unknown hypothesis '" + s +
                           "' (use arch or assoc)");
}

Scenario parse_scenario_line(const std::string& value, int line) {
  Scenario scenario;
  std::size_t pos = 0;
  try {
    parse_model_spec_prefix(value, &pos);  // validate early
  } catch (const SpecError& e) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + e.what());
  }
  // keep the literal spec text so provenance matches the config file
  scenario.model = trim(value.substr(0, pos));
  std::string rest = trim(value.substr(pos));
  if (!rest.empty()) {
    std::istringstream is(rest);
    std::string token;
    while (is >> token) {
      if (token.rfind("n=", 0) == 0) {
        scenario.n = std::stoi(token.substr(2));
      } else {
        throw std::runtime_error("line " + std::to_string(line) +
                                 ": unknown scenario option '" + token + "'");
      }
    }
  }
  return scenario;
}

std::string cell_key(const StudyCell& cell) {
  std::ostringstream os;
  os << to_string(cell.hypothesis) << ':' << to_string(cell.statistic) << ':'
     << cell.alpha;
  return os.str();
}

}  // namespace

StudyConfig parse_study_config(std::istream& in) {
  StudyConfig config;
  bool saw_alpha = false, saw_stat = false, saw_hyp = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "seed") {
        config.seed = std::stoull(value);
      } else if (key == "runs") {
        config.runs = std::stoi(value);
      } else if (key == "B" || key == "b") {
        config.B = std::stoi(value);
      } else if (key == "n") {
        config.default_n = std::stoi(value);
      } else if (key == "grid_m") {
        config.grid_m = std::stoi(value);
      } else if (key == "bandwidth") {
        config.bandwidth = value == "auto" ? 0.0 : std::stod(value);
      } else if (key == "jobs") {
        config.jobs = value == "auto" ? 0 : std::stoi(value);
      } else if (key == "alpha") {
        if (!saw_alpha) config.alphas.clear();
        saw_alpha = true;
        for (const auto& item : split_list(value)) {
          config.alphas.push_back(std::stod(item));
        }
      } else if (key == "stat") {
        if (!saw_stat) config.statistics.clear();
        saw_stat = true;
        for (const auto& item : split_list(value)) {
          config.statistics.push_back(parse_statistic(item, line_no));
        }
      } else if (key == "hypothesis") {
        if (!saw_hyp) config.hypotheses.clear();
        saw_hyp = true;
        for (const auto& item : split_list(value)) {
          config.hypotheses.push_back(parse_hypothesis(item, line_no));
        }
      } else if (key == "scenario") {
        config.scenarios.push_back(parse_scenario_line(value, line_no));
      } else {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": bad value '" + value + "' for key '" + key +
                               "'");
    }
  }
  if (config.scenarios.empty()) {
    throw std::runtime_error("study config declares no scenarios");
  }
  if (config.runs < 1) {
    throw std::runtime_error("study config: runs must be >= 1");
  }
  return config;
}

StudyConfig parse_study_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_study_config(in);
}

StudyResult run_study(const StudyConfig& config) {
  auto start = std::chrono::steady_clock::now();

  StudyResult result;
  result.config = config;

  std::size_t cells_per_scenario = config.hypotheses.size() *
                                   config.statistics.size() *
                                   config.alphas.size();
  for (std::size_t s = 0; s < config.scenarios.size(); ++s) {
    ScenarioResult sr;
    sr.model = config.scenarios[s].model;
    sr.n = config.scenarios[s].n > 0 ? config.scenarios[s].n
                                     : config.default_n;
    for (Hypothesis h : config.hypotheses) {
      for (Statistic st : config.statistics) {
        for (double a : config.alphas) {
          sr.cells.push_back({h, st, a});
        }
      }
    }
    sr.decisions.assign(cells_per_scenario,
                        std::vector<std::uint8_t>(config.runs, 0));
    result.scenarios.push_back(std::move(sr));
  }

  // Models parse once up front; a bad spec fails the whole study early.
  std::vector<CopulaPtr> models;
  for (const auto& scenario : config.scenarios) {
    models.push_back(parse_model_spec(scenario.model));
  }

  std::vector<std::vector<std::uint8_t>> run_ok(
      config.scenarios.size(),
      std::vector<std::uint8_t>(config.runs, 0));
  std::vector<std::vector<std::string>> run_errors(
      config.scenarios.size(), std::vector<std::string>(config.runs));

  std::size_t total = config.scenarios.size() * config.runs;
  parallel_for(config.jobs, total, [&](std::size_t task) {
    std::size_t s = task / config.runs;
    std::size_t r = task % config.runs;
    ScenarioResult& sr = result.scenarios[s];
    try {
      Rng data_rng =
          make_rng(config.seed, {stream::kScenario, s, r, stream::kData});
      Sample sample;
      sample.rows.reserve(sr.n);
      for (int i = 0; i < sr.n; ++i) {
        auto [u1, u2] = models[s]->sample(data_rng);
        sample.rows.push_back({u1, u2});
      }
      TestConfig tc;
      tc.B = config.B;
      tc.grid_m = config.grid_m;
      tc.bandwidth = config.bandwidth;
      tc.seed = derive_seed(config.seed,
                            {stream::kScenario, s, r, stream::kBootstrap});
      tc.jobs = 1;  // parallelism lives at the repetition level
      Battery battery = run_battery(sample, tc);
      std::size_t c = 0;
      for (Hypothesis h : config.hypotheses) {
        for (Statistic st : config.statistics) {
          for (double a : config.alphas) {
            sr.decisions[c][r] = battery.rejects(h, st, a) ? 1 : 0;
            ++c;
          }
        }
      }
      run_ok[s][r] = 1;
    } catch (const std::exception& e) {
      run_errors[s][r] = e.what();
    }
  });

  for (std::size_t s = 0; s < result.scenarios.size(); ++s) {
    ScenarioResult& sr = result.scenarios[s];
    for (int r = 0; r < config.runs; ++r) {
      if (run_ok[s][r]) {
        for (std::size_t c = 0; c < sr.cells.size(); ++c) {
          sr.cells[c].runs_ok += 1;
          sr.cells[c].rejections += sr.decisions[c][r];
        }
      } else {
        sr.errors.push_back("run " + std::to_string(r) + ": " +
                            run_errors[s][r]);
      }
    }
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

nlohmann::json StudyResult::to_json(bool include_timing) const {
  nlohmann::json j;
  j["schema"] = "archtest-study/1";
  nlohmann::json prov;
  prov["seed"] = config.seed;
  prov["runs"] = config.runs;
  prov["B"] = config.B;
  prov["n"] = config.default_n;
  prov["grid_m"] = config.grid_m;
  prov["bandwidth"] = config.bandwidth;
  std::vector<std::string> stats, hyps;
  for (Statistic s : config.statistics) stats.push_back(to_string(s));
  for (Hypothesis h : config.hypotheses) hyps.push_back(to_string(h));
  prov["statistics"] = stats;
  prov["hypotheses"] = hyps;
  prov["alphas"] = config.alphas;
  j["provenance"] = prov;

  nlohmann::json scen = nlohmann::json::array();
  for (const auto& sr : scenarios) {
    nlohmann::json js;
    js["model"] = sr.model;
    js["n"] = sr.n;
    nlohmann::json rates, se;
    for (const auto& cell : sr.cells) {
      rates[cell_key(cell)] = cell.rate();
      se[cell_key(cell)] = cell.standard_error();
    }
    js["rejection_rates"] = rates;
    js["standard_errors"] = se;
    js["errors"] = sr.errors;
    scen.push_back(js);
  }
  j["scenarios"] = scen;
  if (include_timing) j["timing"] = {{"wall_seconds", wall_seconds}};
  return j;
}

void StudyResult::write_csv(std::ostream& out) const {
  out << "model,n";
  for (Statistic s : config.statistics) {
    for (double a : config.alphas) {
      for (Hypothesis h : config.hypotheses) {
        out << ',' << to_string(s) << "_a" << a << '_' << to_string(h);
      }
    }
  }
  out << '\n';
  for (const auto& sr : scenarios) {
    out << '"' << sr.model << "\"," << sr.n;
    for (Statistic s : config.statistics) {
      for (double a : config.alphas) {
        for (Hypothesis h : config.hypotheses) {
          auto it = std::find_if(sr.cells.begin(), sr.cells.end(),
                                 [&](const StudyCell& c) {
                                   return c.hypothesis == h &&
                                          c.statistic == s && c.alpha == a;
                                 });
          out << ',' << std::fixed << std::setprecision(3) << it->rate();
        }
      }
    }
    out << '\n';
  }
}

}  // namespace archtest
