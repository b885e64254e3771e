// Command-line front end: every verb prints JSON on stdout.
// Exit codes: 0 ok, 2 configuration or domain error, 3 size limit, 4 invariant breach.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "crowdprice/crowdprice.hpp"

namespace cp = crowdprice;
using cp::io::json;

namespace {

struct UtilityOptions {
  std::string kind = "additive";
  int M = 25;
  int m = 1;

  void attach(CLI::App* app) {
    app->add_option("--utility", kind, "additive | typo | binary_labeling")
        ->check(CLI::IsMember({"additive", "typo", "binary_labeling"}));
    app->add_option("--M", M, "typo utility: number of subtasks");
    app->add_option("--m", m, "typo utility: bonus threshold");
  }

  [[nodiscard]] cp::UtilityFunction make() const {
    return cp::make_utility(cp::io::utility_config_from_json(json{{"kind", kind}, {"M", M}, {"m", m}}));
  }
};

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string default_out_dir() {
  if (const char* env = std::getenv("CROWDPRICE_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "crowdprice-out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted posted pricing with base and bonus payments"};
  app.require_subcommand(1);

  // pp
  std::string workers_path;
  double budget = 0.0;
  UtilityOptions utility;
  std::string pp_mode = "exact";
  auto* pp = app.add_subcommand("pp", "personalized pricing: exact, modified greedy, or fractional relaxation");
  pp->add_option("--workers", workers_path, "CSV (id,quality,cost) or JSON array")->required()->check(CLI::ExistingFile);
  pp->add_option("--budget", budget, "total budget B")->required();
  utility.attach(pp);
  pp->add_option("--mode", pp_mode, "exact | greedy | relaxed")->check(CLI::IsMember({"exact", "greedy", "relaxed"}));

  // cp
  std::string regime = "auto";
  bool oracle = false, no_bonus = false, linear_search = false;
  auto* cpc = app.add_subcommand("cp", "common pricing (p, q) for all workers");
  cpc->add_option("--workers", workers_path, "CSV (id,quality,cost) or JSON array")->required()->check(CLI::ExistingFile);
  cpc->add_option("--budget", budget, "total budget B")->required();
  utility.attach(cpc);
  cpc->add_option("--regime", regime, "unres | subres | res | auto (auto classifies the profile)")
      ->check(CLI::IsMember({"unres", "subres", "res", "auto"}));
  cpc->add_flag("--oracle", oracle, "report the exact optimum; the regime algorithm becomes a cross-check");
  cpc->add_flag("--no-bonus", no_bonus, "restrict to q = 0");
  cpc->add_flag("--linear-search", linear_search, "scan interval endpoints instead of bisecting");

  // pob
  std::size_t pob_n = 16;
  double pob_c = 1.0, pob_eps = 0.1;
  bool pob_relaxed = false;
  auto* pob = app.add_subcommand("pob", "base-only versus bonus common pricing on the cherry-picker instance");
  pob->add_option("--n", pob_n, "worker count (multiple of 4 unless --relaxed)");
  pob->add_option("--c", pob_c, "cost unit c");
  pob->add_option("--eps", pob_eps, "cherry-picker quality in [0,1)");
  pob->add_flag("--relaxed", pob_relaxed, "allow any n >= 2 with floor group boundaries");

  // poa
  auto* poa = app.add_subcommand("poa", "common versus personalized pricing certificate");
  poa->add_option("--workers", workers_path, "CSV (id,quality,cost) or JSON array")->required()->check(CLI::ExistingFile);
  poa->add_option("--budget", budget, "total budget B")->required();
  utility.attach(poa);

  // simulate
  std::string config_path, out_dir;
  auto* sim = app.add_subcommand("simulate", "run a bonus-policy sweep and write result, CSV views and manifest");
  sim->add_option("--config", config_path, "scenario JSON; defaults apply when omitted")->check(CLI::ExistingFile);
  sim->add_option("--out", out_dir, "output directory (default: $CROWDPRICE_OUT_DIR or ./crowdprice-out)");

  // audit
  std::size_t trials = 1000, dimension = 6;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  auto* audit = app.add_subcommand("audit", "randomized checks of a utility's declared properties");
  utility.attach(audit);
  audit->add_option("--trials", trials, "probes per property");
  audit->add_option("--dimension", dimension, "probe vector length")->check(CLI::Range(std::size_t{2}, std::size_t{20}));
  audit->add_option("--seed", seed, "probe seed");
  audit->add_option("--tolerance", tolerance, "relative tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*pp) {
      const auto ws = cp::io::read_workers(workers_path);
      const cp::GkpInstance inst{ws, budget, utility.make()};
      if (pp_mode == "relaxed") {
        print(cp::io::to_json(cp::solve_gkp_relaxed(inst), ws));
      } else if (pp_mode == "greedy") {
        print(cp::io::to_json(cp::modified_greedy(inst), ws, "modified-greedy"));
      } else {
        print(cp::io::to_json(cp::solve_opp_no_bonus(inst, cp::PpMode::Exact), ws, "exact"));
      }
    } else if (*cpc) {
      const auto ws = cp::io::read_workers(workers_path);
      const auto U = utility.make();
      if (no_bonus) {
        print(cp::io::to_json(cp::cp_no_bonus(ws, budget, U), ws));
        return 0;
      }
      const auto mode = linear_search ? cp::SearchMode::Linear : cp::SearchMode::Binary;
      cp::Regime r = cp::Regime::Unclassified;
      if (regime == "unres") r = cp::Regime::EffortUnresponsive;
      if (regime == "subres") r = cp::Regime::EffortSubresponsive;
      if (regime == "res") r = cp::Regime::EffortResponsive;
      if (regime == "auto") r = cp::classify_profile(ws);
      std::optional<cp::CpSolveReport> by_regime;
      if (r == cp::Regime::EffortUnresponsive) by_regime = cp::cp_unres(ws, budget, U);
      if (r == cp::Regime::EffortSubresponsive) by_regime = cp::cp_subres(ws, budget, U, mode);
      if (r == cp::Regime::EffortResponsive) by_regime = cp::cp_res(ws, budget, U, mode);
      json out;
      if (oracle || !by_regime) {
        const auto exact = cp::cp_exact_oracle(ws, budget, U);
        out = cp::io::to_json(exact, ws);
        if (by_regime) out["cross_check"] = cp::io::to_json(*by_regime, ws);
      } else {
        out = cp::io::to_json(*by_regime, ws);
      }
      out["regime"] = std::string(cp::to_string(r));
      print(out);
    } else if (*pob) {
      const auto inst = cp::build_pob_instance(pob_n, pob_c, pob_eps, pob_relaxed);
      const auto res = cp::pob_ratio(inst);
      print({{"n", inst.n},
             {"c", inst.c},
             {"epsilon", inst.epsilon},
             {"budget", inst.budget},
             {"ratio", res.ratio},
             {"without_bonus", cp::io::to_json(res.without_bonus, inst.workers)},
             {"with_bonus", cp::io::to_json(res.with_bonus, inst.workers)}});
    } else if (*poa) {
      const auto ws = cp::io::read_workers(workers_path);
      print(cp::io::to_json(cp::poa_audit(ws, budget, utility.make())));
    } else if (*sim) {
      cp::ScenarioConfig cfg = cp::default_scenario();
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        json j;
        try {
          in >> j;
        } catch (const json::exception& e) {
          throw cp::ConfigError("'" + config_path + "': " + e.what());
        }
        cfg = cp::scenario_from_json(j, std::filesystem::path(config_path).parent_path());
      }
      const auto result = cp::run_scenario(cfg);
      const auto dir = out_dir.empty() ? default_out_dir() : out_dir;
      const auto files = cp::emit_plot_data(result, dir);
      json names = json::array();
      for (const auto& f : files) names.push_back(f.string());
      print({{"out_dir", dir}, {"files", names}, {"points", result.points.size()}});
    } else if (*audit) {
      const auto U = utility.make();
      const cp::ProbeConfig probe{dimension, 0.0, 1.0, seed, tolerance};
      const auto& f = U.flags();
      json reports = json::array();
      bool ok = true;
      auto run = [&](bool declared, const cp::AuditReport& rep) {
        json j = cp::io::to_json(rep);
        j["declared"] = declared;
        ok = ok && (!declared || rep.passed());
        reports.push_back(std::move(j));
      };
      run(f.symmetric, cp::check_symmetric(U, trials, probe));
      run(f.nondecreasing, cp::check_monotone(U, trials, probe));
      run(f.subadditive, cp::check_subadditive(U, trials, probe));
      run(f.schur_convex, cp::check_schur_convex(U, trials, probe));
      print({{"utility", U.name()}, {"audits", reports}, {"declared_properties_hold", ok}});
      return ok ? 0 : 4;
    }
  } catch (const cp::SizeLimitError& e) {
    std::cerr << "size limit: " << e.what() << '\n';
    return 3;
  } catch (const cp::InvariantError& e) {
    std::cerr << "invariant breach: " << e.what() << '\n';
    return 4;
  } catch (const cp::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const cp::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
