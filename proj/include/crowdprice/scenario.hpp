#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "crowdprice/bonus.hpp"
#include "crowdprice/common.hpp"
#include "crowdprice/cp_solver.hpp"
#include "crowdprice/io.hpp"
#include "crowdprice/pp_solver.hpp"
#include "crowdprice/utility.hpp"
#include "crowdprice/worker.hpp"

namespace crowdprice {

inline constexpr std::string_view kLibraryVersion = "1.0.0";

/// A population (file or generator), a utility, a sweep of bonus policies and
/// one budget. A typo utility takes M and m from each sweep point's policy.
struct ScenarioConfig {
  std::optional<std::string> population_file;  // id,ability,cost
  std::size_t n = 15;
  std::uint64_t seed = 1;
  PopulationParams population;
  UtilityConfig utility{UtilityConfig::Kind::Typo, 25, 1};
  std::vector<BonusPolicy> sweep;
  double budget = 4.0;
  bool oracle = true;
  std::optional<PpMode> pp_mode;  // default: exact when enumeration applies
  std::size_t threads = 0;        // 0: hardware concurrency
};

/// m = 15..25 thresholds plus the linear policy, M = 25, n = 15, B = 4.
inline ScenarioConfig default_scenario() {
  ScenarioConfig cfg;
  for (int m = 15; m <= 25; ++m) cfg.sweep.push_back(BonusPolicy::threshold(m, 25));
  cfg.sweep.push_back(BonusPolicy::linear(25));
  return cfg;
}

inline void validate(const ScenarioConfig& cfg) {
  if (cfg.sweep.empty()) throw ConfigError("scenario: bonus-policy sweep is empty");
  if (!(cfg.budget >= 0.0) || !std::isfinite(cfg.budget)) throw ConfigError("scenario: budget must be finite and >= 0");
  if (cfg.population_file) {
    if (!std::filesystem::exists(*cfg.population_file)) {
      throw ConfigError("scenario: population file '" + *cfg.population_file + "' does not exist");
    }
  } else if (cfg.n == 0) {
    throw ConfigError("scenario: n must be positive");
  }
}

/// Keys: population {file | n, seed, alpha, beta, slope}, utility, sweep
/// (array of bonus policies, or {"m_from", "m_to", "M", "linear"}), budget,
/// oracle, pp_mode ("exact" | "greedy"), threads. Relative file paths resolve
/// against `base_dir`. Missing keys keep the defaults of default_scenario().
inline ScenarioConfig scenario_from_json(const io::json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
  ScenarioConfig cfg = default_scenario();
  try {
    if (j.contains("population")) {
      const auto& p = j["population"];
      if (p.contains("file")) {
        std::filesystem::path f = p["file"].get<std::string>();
        if (f.is_relative() && !base_dir.empty()) f = base_dir / f;
        cfg.population_file = f.string();
      }
      cfg.n = p.value("n", cfg.n);
      cfg.seed = p.value("seed", cfg.seed);
      cfg.population.alpha = p.value("alpha", cfg.population.alpha);
      cfg.population.beta = p.value("beta", cfg.population.beta);
      cfg.population.slope = p.value("slope", cfg.population.slope);
    }
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("utility")) cfg.utility = io::utility_config_from_json(j["utility"]);
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      cfg.sweep.clear();
      if (s.is_array()) {
        for (const auto& e : s) cfg.sweep.push_back(io::bonus_policy_from_json(e));
      } else {
        const int M = s.value("M", 25);
        if (s.contains("m_from")) {
          const int lo = s["m_from"].get<int>(), hi = s.value("m_to", lo);
          for (int m = lo; m <= hi; ++m) cfg.sweep.push_back(BonusPolicy::threshold(m, M));
        }
        if (s.value("linear", false)) cfg.sweep.push_back(BonusPolicy::linear(M));
      }
    }
    if (j.contains("bonus_policy")) cfg.sweep = {io::bonus_policy_from_json(j["bonus_policy"])};
    cfg.budget = j.value("budget", cfg.budget);
    cfg.oracle = j.value("oracle", cfg.oracle);
    if (j.contains("pp_mode")) {
      const auto mode = j["pp_mode"].get<std::string>();
      if (mode == "exact") {
        cfg.pp_mode = PpMode::Exact;
      } else if (mode == "greedy") {
        cfg.pp_mode = PpMode::Greedy;
      } else {
        throw ConfigError("scenario: pp_mode must be 'exact' or 'greedy'");
      }
    }
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const io::json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

struct SweepPoint {
  BonusPolicy policy;
  std::vector<WorkerProfile> workers;
  Regime regime = Regime::Unclassified;
  PpSolution pp;           // bonus-only personalized offers
  PpSolution pp_no_bonus;  // base-only personalized offers
  std::string pp_algorithm;
  CpSolveReport cp;  // oracle when enabled, else the regime algorithm
  std::optional<CpSolveReport> cp_regime;
  CpSolveReport cp_no_bonus;
  std::vector<std::string> diagnostics;
};

struct RunResult {
  ScenarioConfig config;
  AbilityProfile abilities;
  std::vector<SweepPoint> points;
  double wall_seconds = 0.0;
};

namespace detail {

inline constexpr double kCrossCheckTolerance = 1e-9;

inline UtilityFunction point_utility(const ScenarioConfig& cfg, const BonusPolicy& policy,
                                     const AbilityProfile& abilities) {
  if (cfg.utility.kind != UtilityConfig::Kind::Typo) return make_utility(cfg.utility);
  std::vector<double> s;
  for (const auto& a : abilities) s.push_back(a.ability);
  return make_typo_utility(policy, s);
}

inline std::optional<CpSolveReport> regime_solver(Regime regime, const std::vector<WorkerProfile>& ws, double budget,
                                                  const UtilityFunction& U) {
  switch (regime) {
    case Regime::EffortUnresponsive: return cp_unres(ws, budget, U);
    case Regime::EffortSubresponsive: return cp_subres(ws, budget, U);
    case Regime::EffortResponsive: return cp_res(ws, budget, U);
    case Regime::Unclassified: return std::nullopt;
  }
  return std::nullopt;
}

inline void check_report(const CpSolveReport& r, const std::vector<WorkerProfile>& ws, double budget,
                         const std::string& what) {
  const auto again = accepted_set(ws, r.policy);
  if (again.indices != r.accepted || again.spent != r.spent) {
    throw InvariantError(what + ": accepted set does not reproduce");
  }
  if (r.spent > budget) throw InvariantError(what + ": spends over budget");
}

inline SweepPoint run_point(const ScenarioConfig& cfg, const AbilityProfile& abilities, const BonusPolicy& policy) {
  SweepPoint pt;
  pt.policy = policy;
  pt.workers = translate(abilities, policy);
  pt.regime = classify_profile(pt.workers);
  const auto U = point_utility(cfg, policy, abilities);
  const auto& ws = pt.workers;
  const double B = cfg.budget;

  const GkpInstance inst{ws, B, U};
  const PpMode mode = cfg.pp_mode.value_or(ws.size() <= kEnumerationMaxWorkers ? PpMode::Exact : PpMode::Greedy);
  pt.pp_no_bonus = solve_opp_no_bonus(inst, mode);
  pt.pp_algorithm = mode == PpMode::Exact ? "exact" : "modified-greedy";
  pt.pp.selection = pt.pp_no_bonus.selection;
  pt.pp.diagnostics = pt.pp_no_bonus.diagnostics;
  std::vector<double> zero_base(ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i) zero_base[i] = ws[i].quality > 0.0 ? 0.0 : ws[i].cost;
  pt.pp.policy = policy_from_selection(ws, pt.pp.selection.x, zero_base);

  pt.cp_regime = regime_solver(pt.regime, ws, B, U);
  if (cfg.oracle || !pt.cp_regime) {
    pt.cp = cp_exact_oracle(ws, B, U);
    if (pt.cp_regime) {
      const double gap = pt.cp.utility_value - pt.cp_regime->utility_value;
      const double scale = std::fmax(1.0, std::fabs(pt.cp.utility_value));
      if (gap < -kCrossCheckTolerance * scale) {
        throw InvariantError(policy.label() + ": regime algorithm beats the exact oracle");
      }
      if (gap > kCrossCheckTolerance * scale) {
        pt.diagnostics.push_back(pt.cp_regime->algorithm + " is " + io::format_double(gap) +
                                 " below the exact optimum");
      }
    }
  } else {
    pt.cp = *pt.cp_regime;
  }
  pt.cp_no_bonus = cp_no_bonus(ws, B, U);

  check_report(pt.cp, ws, B, policy.label() + " cp");
  check_report(pt.cp_no_bonus, ws, B, policy.label() + " cp-no-bonus");
  if (pt.cp_regime) check_report(*pt.cp_regime, ws, B, policy.label() + " " + pt.cp_regime->algorithm);
  const double tol = kCrossCheckTolerance * std::fmax(1.0, pt.pp.selection.utility_value);
  if (pt.cp.utility_value < pt.cp_no_bonus.utility_value - tol) {
    throw InvariantError(policy.label() + ": common pricing loses to its no-bonus restriction");
  }
  if (mode == PpMode::Exact && pt.pp.selection.utility_value < pt.cp.utility_value - tol) {
    throw InvariantError(policy.label() + ": personalized optimum below common pricing");
  }
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (pt.pp.selection.x[i] && !decide(ws[i], pt.pp.policy[i])) {
      throw InvariantError(policy.label() + ": personalized offer declined by a selected worker");
    }
  }
  return pt;
}

}  // namespace detail

/// Solves every sweep point. Points run on a small thread pool; results are
/// stored by sweep index, so the output does not depend on scheduling.
inline RunResult run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  RunResult out;
  out.config = cfg;
  out.abilities = cfg.population_file ? io::read_abilities(*cfg.population_file)
                                      : generate_population(cfg.n, cfg.seed, cfg.population);
  if (cfg.oracle && out.abilities.size() > kOracleMaxWorkers) {
    throw SizeLimitError("scenario: population exceeds the exact oracle limit of 64 workers");
  }
  out.points.resize(cfg.sweep.size());
  std::vector<std::exception_ptr> errors(cfg.sweep.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < cfg.sweep.size(); k = next++) {
      try {
        out.points[k] = detail::run_point(cfg, out.abilities, cfg.sweep[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::size_t threads = cfg.threads != 0 ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, cfg.sweep.size());
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Deterministic serialization: no timings, no paths beyond the config.
inline io::json result_to_json(const RunResult& r) {
  using io::json;
  json sweep = json::array();
  for (const auto& pt : r.points) {
    json j;
    j["policy"] = io::to_json(pt.policy);
    j["label"] = pt.policy.label();
    j["regime"] = std::string(to_string(pt.regime));
    j["pp"] = io::to_json(pt.pp, pt.workers, pt.pp_algorithm);
    j["pp_no_bonus"] = io::to_json(pt.pp_no_bonus, pt.workers, pt.pp_algorithm);
    j["cp"] = io::to_json(pt.cp, pt.workers);
    j["cp_regime"] = pt.cp_regime ? io::to_json(*pt.cp_regime, pt.workers) : json(nullptr);
    j["cp_no_bonus"] = io::to_json(pt.cp_no_bonus, pt.workers);
    j["structure"] = io::to_json(pt.cp.structure);
    j["diagnostics"] = pt.diagnostics;
    sweep.push_back(std::move(j));
  }
  json population = json::array();
  for (const auto& a : r.abilities) population.push_back({{"id", a.id}, {"ability", a.ability}, {"cost", a.cost}});
  json cfg = {{"budget", r.config.budget},
              {"oracle", r.config.oracle},
              {"seed", r.config.seed},
              {"n", r.abilities.size()}};
  cfg["population_file"] = r.config.population_file ? json(*r.config.population_file) : json(nullptr);
  return {{"config", cfg}, {"population", population}, {"sweep", sweep}};
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + p.string() + "'");
  return f;
}

}  // namespace detail

/// Writes result.json, four CSV views and manifest.json into `dir`:
/// curves.csv (cost, ability, quality per policy), acceptance.csv (accepted
/// flags by cost rank per policy), pricing.csv (common (p, q) per policy) and
/// utility.csv (the four optima per policy). Only the manifest carries timing.
inline std::vector<std::filesystem::path> emit_plot_data(const RunResult& r, const std::filesystem::path& dir) {
  using io::format_double;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> files;

  {
    auto f = detail::open_output(dir / "result.json");
    f << result_to_json(r).dump(2) << '\n';
    files.push_back(dir / "result.json");
  }
  std::vector<std::size_t> by_cost(r.abilities.size());
  for (std::size_t i = 0; i < by_cost.size(); ++i) by_cost[i] = i;
  std::stable_sort(by_cost.begin(), by_cost.end(),
                   [&](std::size_t a, std::size_t b) { return r.abilities[a].cost < r.abilities[b].cost; });
  {
    auto f = detail::open_output(dir / "curves.csv");
    f << "policy,rank,id,cost,ability,quality\n";
    for (const auto& pt : r.points) {
      for (std::size_t k = 0; k < by_cost.size(); ++k) {
        const std::size_t i = by_cost[k];
        f << pt.policy.label() << ',' << k + 1 << ',' << r.abilities[i].id << ',' << format_double(r.abilities[i].cost)
          << ',' << format_double(r.abilities[i].ability) << ',' << format_double(pt.workers[i].quality) << '\n';
      }
    }
    files.push_back(dir / "curves.csv");
  }
  {
    auto f = detail::open_output(dir / "acceptance.csv");
    f << "policy,rank,id,pp,cp,cp_no_bonus\n";
    for (const auto& pt : r.points) {
      std::vector<int> cp(by_cost.size(), 0), nb(by_cost.size(), 0);
      for (std::size_t i : pt.cp.accepted) cp[i] = 1;
      for (std::size_t i : pt.cp_no_bonus.accepted) nb[i] = 1;
      for (std::size_t k = 0; k < by_cost.size(); ++k) {
        const std::size_t i = by_cost[k];
        f << pt.policy.label() << ',' << k + 1 << ',' << r.abilities[i].id << ','
          << (pt.pp.selection.x[i] ? 1 : 0) << ',' << cp[i] << ',' << nb[i] << '\n';
      }
    }
    files.push_back(dir / "acceptance.csv");
  }
  {
    auto f = detail::open_output(dir / "pricing.csv");
    f << "policy,regime,base,bonus,spent,no_bonus_base,no_bonus_spent\n";
    for (const auto& pt : r.points) {
      f << pt.policy.label() << ',' << to_string(pt.regime) << ',' << format_double(pt.cp.policy.base) << ','
        << format_double(pt.cp.policy.bonus) << ',' << format_double(pt.cp.spent) << ','
        << format_double(pt.cp_no_bonus.policy.base) << ',' << format_double(pt.cp_no_bonus.spent) << '\n';
    }
    files.push_back(dir / "pricing.csv");
  }
  {
    auto f = detail::open_output(dir / "utility.csv");
    f << "policy,pp,pp_no_bonus,cp,cp_no_bonus\n";
    for (const auto& pt : r.points) {
      f << pt.policy.label() << ',' << format_double(pt.pp.selection.utility_value) << ','
        << format_double(pt.pp_no_bonus.selection.utility_value) << ',' << format_double(pt.cp.utility_value) << ','
        << format_double(pt.cp_no_bonus.utility_value) << '\n';
    }
    files.push_back(dir / "utility.csv");
  }
  {
    io::json m = {{"library_version", kLibraryVersion},
                  {"generator_version", kGeneratorVersion},
                  {"seed", r.config.seed},
                  {"n", r.abilities.size()},
                  {"wall_seconds", r.wall_seconds}};
    io::json names = io::json::array();
    for (const auto& p : files) names.push_back(p.filename().string());
    m["files"] = names;
    auto f = detail::open_output(dir / "manifest.json");
    f << m.dump(2) << '\n';
    files.push_back(dir / "manifest.json");
  }
  return files;
}

}  // namespace crowdprice
