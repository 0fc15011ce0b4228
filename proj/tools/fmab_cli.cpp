// fmab: flickering-availability bandit simulator and diagnostics.
//
// Subcommands: simulate | sweep-nav | regret-suite | diag-kernel | diag-tv |
// bounds | disaster. Every invocation writes into one output directory with a
// manifest recording the resolved configuration and content hashes.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmab/agent.hpp"
#include "fmab/bounds.hpp"
#include "fmab/errors.hpp"
#include "fmab/export.hpp"
#include "fmab/harness.hpp"
#include "fmab/kernel.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int default_jobs() {
  if (const char* env = std::getenv("FMAB_DEFAULT_JOBS")) {
    const int jobs = std::atoi(env);
    if (jobs >= 1) return jobs;
  }
  return 1;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Collects written files and finalizes the per-invocation manifest.
class OutputDir {
 public:
  OutputDir(std::string dir, std::string command) : dir_(std::move(dir)), command_(std::move(command)) {
    if (dir_.empty()) return;
    fs::create_directories(dir_);
  }

  bool enabled() const { return !dir_.empty(); }

  void write(const std::string& name, const std::string& content) {
    if (!enabled()) return;
    const std::string path = (fs::path(dir_) / name).string();
    fmab::write_text_file(path, content);
    hashes_[name] = hex64(fmab::fnv1a_hash(content));
  }

  void write_table(const std::string& stem, const fmab::Table& table, const std::string& format) {
    if (format == "json") {
      write(stem + ".json", table.to_json());
    } else {
      write(stem + ".csv", table.to_csv());
    }
  }

  void finalize(const json& resolved_config) {
    if (!enabled()) return;
    json manifest;
    manifest["command"] = command_;
    manifest["config"] = resolved_config;
    manifest["outputs"] = hashes_;
    const std::string text = manifest.dump(2);
    fmab::write_text_file((fs::path(dir_) / "manifest.json").string(), text);
  }

 private:
  std::string dir_;
  std::string command_;
  json hashes_ = json::object();
};

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

json nav_stats_json(const fmab::MonteCarloResult& mc) {
  std::vector<long long> nav = mc.nav_times;
  std::sort(nav.begin(), nav.end());
  auto quant = [&](double q) -> long long {
    if (nav.empty()) return 0;
    const std::size_t idx = static_cast<std::size_t>(q * (nav.size() - 1) + 0.5);
    return nav[std::min(idx, nav.size() - 1)];
  };
  double mean = 0.0;
  for (long long v : nav) mean += static_cast<double>(v);
  if (!nav.empty()) mean /= static_cast<double>(nav.size());
  return json{{"min", nav.empty() ? 0 : nav.front()}, {"q25", quant(0.25)},   {"median", quant(0.5)},
              {"q75", quant(0.75)},                   {"max", nav.empty() ? 0 : nav.back()},
              {"mean", mean},                         {"censored", mc.censored_count}};
}

struct CommonFlags {
  std::string out;
  std::string format = "csv";
  int jobs = default_jobs();
  void attach(CLI::App* cmd, bool with_jobs = true) {
    cmd->add_option("--out", out, "Output directory (created if missing)");
    cmd->add_option("--format", format, "Table format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    if (with_jobs) {
      cmd->add_option("--jobs", jobs, "Worker threads (FMAB_DEFAULT_JOBS env overrides the default)")
          ->capture_default_str();
    }
  }
};

int run_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 std::optional<long long> horizon, std::optional<long long> t0, int runs,
                 const CommonFlags& common) {
  fmab::RunConfig config = fmab::run_config_from_json(fmab::read_text_file(config_path));
  if (seed) config.seed = *seed;
  if (horizon) config.horizon = *horizon;
  if (t0) config.policy.t0 = *t0;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw fmab::ConfigError(e.what());
  }

  OutputDir out(common.out, "simulate");
  fmab::MonteCarloResult mc = fmab::run_monte_carlo(config, runs, common.jobs);
  out.write_table("aggregate", mc.aggregate_table("simulate"), common.format);

  if (config.record_trace) {
    fmab::RunResult traced = fmab::run_episode(config, 0);
    out.write_table("trace", fmab::trace_table(traced, 0), common.format);
  }

  json summary;
  summary["runs"] = runs;
  summary["misidentification_rate"] = mc.misidentification_rate;
  summary["nav_time"] = nav_stats_json(mc);
  summary["endpoint_mean_regret_rate"] = mc.mean_rate.back();
  out.write("summary.json", summary.dump(2));

  std::cout << "runs=" << runs << " misidentification_rate=" << mc.misidentification_rate
            << " endpoint_mean_regret_rate=" << mc.mean_rate.back() << '\n';
  out.finalize(json::parse(fmab::run_config_to_json(config)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flickering-availability bandit simulator"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run Monte Carlo episodes from a JSON config");
  std::string config_path;
  simulate->add_option("--config", config_path, "RunConfig JSON document")->required();
  std::optional<std::uint64_t> sim_seed;
  std::optional<long long> sim_horizon, sim_t0;
  int sim_runs = 1;
  simulate->add_option("--seed", sim_seed, "Override the config seed");
  simulate->add_option("--horizon", sim_horizon, "Override the horizon T");
  simulate->add_option("--t0", sim_t0, "Override the exploration length");
  simulate->add_option("--runs", sim_runs, "Number of Monte Carlo runs")->capture_default_str();
  CommonFlags sim_common;
  sim_common.attach(simulate);

  // sweep-nav
  auto* sweep = app.add_subcommand("sweep-nav", "Navigation-time distribution vs graph sparsity");
  fmab::NavSweepOptions sweep_options;
  std::string sweep_mode = "lazy_walk";
  sweep->add_option("--p-list", sweep_options.p_list, "Edge probabilities to sweep")->capture_default_str();
  sweep->add_option("--n", sweep_options.n, "Number of arms")->capture_default_str();
  sweep->add_option("--runs", sweep_options.runs, "Episodes per p")->capture_default_str();
  sweep->add_option("--t0", sweep_options.t0, "Fixed exploration prefix")->capture_default_str();
  sweep->add_option("--nav-window", sweep_options.nav_window, "Rounds allowed before censoring")
      ->capture_default_str();
  sweep->add_option("--seed", sweep_options.seed, "Master seed")->capture_default_str();
  sweep->add_option("--mode", sweep_mode, "lazy_walk | greedy_frozen | wait_at_current")
      ->check(CLI::IsMember({"lazy_walk", "greedy_frozen", "wait_at_current"}))
      ->capture_default_str();
  CommonFlags sweep_common;
  sweep_common.attach(sweep);

  // regret-suite
  auto* suite = app.add_subcommand("regret-suite", "Average regret curves for both graph models");
  fmab::RegretSuiteOptions suite_options;
  suite->add_option("--n-list", suite_options.n_list, "Graph sizes")->capture_default_str();
  suite->add_option("--p", suite_options.density, "Stationary edge density")->capture_default_str();
  suite->add_option("--horizon", suite_options.horizon, "Horizon T")->capture_default_str();
  suite->add_option("--runs", suite_options.runs, "Runs per series")->capture_default_str();
  suite->add_option("--delta", suite_options.delta, "Sizing confidence")->capture_default_str();
  suite->add_option("--c0", suite_options.constants.c0, "Burn-in sizing constant")->capture_default_str();
  suite->add_option("--c1", suite_options.constants.c1, "Mixing sizing constant")->capture_default_str();
  suite->add_option("--c2", suite_options.constants.c2, "Identification sizing constant")
      ->capture_default_str();
  suite->add_option("--c3", suite_options.constants.c3, "Navigation sizing constant")->capture_default_str();
  suite->add_option("--kappa", suite_options.kappa, "Stickiness constant (beta <= kappa/n)")
      ->capture_default_str();
  suite->add_option("--mu-star", suite_options.mu_star, "Optimal arm mean")->capture_default_str();
  suite->add_option("--mu-other", suite_options.mu_other, "Suboptimal arm mean")->capture_default_str();
  suite->add_option("--seed", suite_options.seed, "Master seed")->capture_default_str();
  CommonFlags suite_common;
  suite_common.attach(suite);

  // diag-kernel
  auto* diag_kernel = app.add_subcommand("diag-kernel", "Closed-form homogeneous kernel diagnostics");
  int dk_n = 5;
  double dk_p = 0.3;
  diag_kernel->add_option("--n", dk_n, "Number of arms")->capture_default_str();
  diag_kernel->add_option("--p", dk_p, "Edge probability")->capture_default_str();
  CommonFlags dk_common;
  dk_common.attach(diag_kernel, /*with_jobs=*/false);

  // diag-tv
  auto* diag_tv = app.add_subcommand("diag-tv", "TV tracking diagnostics on one edge-Markov sequence");
  int tv_n = 30;
  double tv_alpha = 0.5, tv_beta = 0.5, tv_initial_density = -1.0;
  long long tv_rounds = 200;
  std::uint64_t tv_seed = 1;
  std::string tv_start = "stationary";
  diag_tv->add_option("--n", tv_n, "Number of nodes")->capture_default_str();
  diag_tv->add_option("--alpha", tv_alpha, "Edge appearance rate")->capture_default_str();
  diag_tv->add_option("--beta", tv_beta, "Edge disappearance rate")->capture_default_str();
  diag_tv->add_option("--rounds", tv_rounds, "Sequence length")->capture_default_str();
  diag_tv->add_option("--seed", tv_seed, "Sequence seed")->capture_default_str();
  diag_tv->add_option("--initial-density", tv_initial_density, "G0 density (<0: stationary)")
      ->capture_default_str();
  diag_tv->add_option("--start", tv_start, "Start law: stationary | uniform | point:<i>")
      ->capture_default_str();
  CommonFlags tv_common;
  tv_common.attach(diag_tv, /*with_jobs=*/false);

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "Identification and visitation bound calculators");
  int b_n = 10;
  double b_gap = 0.2, b_delta = 0.1;
  double b_eta = 0.25, b_phi_star = -1.0, b_sigma_min = -1.0;
  double b_zeta = -1.0, b_log_term = 1.0, b_flip_c = 1.0, b_flip_cprime = 1.0;
  bounds_cmd->add_option("--n", b_n, "Number of arms")->capture_default_str();
  bounds_cmd->add_option("--gap", b_gap, "Equal suboptimality gap")->capture_default_str();
  bounds_cmd->add_option("--delta", b_delta, "Confidence parameter")->capture_default_str();
  bounds_cmd->add_option("--eta", b_eta, "Typicality tolerance for the gamma_het row")
      ->capture_default_str();
  bounds_cmd->add_option("--phi-star", b_phi_star, "Population conductance (enables gamma_het row)")
      ->capture_default_str();
  bounds_cmd->add_option("--sigma-min", b_sigma_min, "Minimum expected degree (enables gamma_het row)")
      ->capture_default_str();
  bounds_cmd->add_option("--zeta", b_zeta, "Normalized flip rate (enables flip envelope row)")
      ->capture_default_str();
  bounds_cmd->add_option("--log-term", b_log_term, "log(nT/delta) for the flip envelope row")
      ->capture_default_str();
  bounds_cmd->add_option("--flip-c", b_flip_c, "Flip envelope constant C")->capture_default_str();
  bounds_cmd->add_option("--flip-cprime", b_flip_cprime, "Flip envelope constant C'")
      ->capture_default_str();
  CommonFlags bounds_common;
  bounds_common.attach(bounds_cmd, /*with_jobs=*/false);

  // disaster
  auto* disaster = app.add_subcommand("disaster", "Relay-scouting scenario preset, end to end");
  fmab::DisasterOptions disaster_options;
  int disaster_runs = 20;
  disaster->add_option("--runs", disaster_runs, "Seeded runs")->capture_default_str();
  disaster->add_option("--density", disaster_options.stationary_density, "Stationary edge density")
      ->capture_default_str();
  disaster->add_option("--kappa", disaster_options.kappa, "Stickiness constant")->capture_default_str();
  disaster->add_option("--delta", disaster_options.delta, "Sizing confidence")->capture_default_str();
  disaster->add_option("--c0", disaster_options.constants.c0, "Burn-in sizing constant")
      ->capture_default_str();
  disaster->add_option("--c1", disaster_options.constants.c1, "Mixing sizing constant")
      ->capture_default_str();
  disaster->add_option("--c2", disaster_options.constants.c2, "Identification sizing constant")
      ->capture_default_str();
  disaster->add_option("--c3", disaster_options.constants.c3, "Navigation sizing constant")
      ->capture_default_str();
  disaster->add_option("--seed", disaster_options.scenario_seed, "Scenario seed")->capture_default_str();
  CommonFlags disaster_common;
  disaster_common.attach(disaster);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) {
      return run_simulate(config_path, sim_seed, sim_horizon, sim_t0, sim_runs, sim_common);
    }

    if (sweep->parsed()) {
      sweep_options.jobs = sweep_common.jobs;
      sweep_options.mode = sweep_mode == "lazy_walk"       ? fmab::NavigationMode::LazyWalk
                           : sweep_mode == "greedy_frozen" ? fmab::NavigationMode::GreedyFrozen
                                                           : fmab::NavigationMode::WaitAtCurrent;
      fmab::NavSweepResult result = fmab::navigation_sweep(sweep_options);
      std::cout << result.table().to_csv();
      OutputDir out(sweep_common.out, "sweep-nav");
      out.write_table("nav_sweep", result.table(), sweep_common.format);
      out.finalize(json{{"p_list", sweep_options.p_list},
                        {"n", sweep_options.n},
                        {"runs", sweep_options.runs},
                        {"t0", sweep_options.t0},
                        {"nav_window", sweep_options.nav_window},
                        {"mode", sweep_mode},
                        {"seed", sweep_options.seed}});
      return 0;
    }

    if (suite->parsed()) {
      suite_options.jobs = suite_common.jobs;
      fmab::RegretSuiteResult result = fmab::regret_curve_suite(suite_options);
      OutputDir out(suite_common.out, "regret-suite");
      out.write_table("regret_curves", result.table(), suite_common.format);
      json summary = json::array();
      for (const fmab::RegretSeries& s : result.series) {
        summary.push_back({{"series_id", s.id},
                           {"n", s.n},
                           {"model", s.model},
                           {"t0", s.t0},
                           {"endpoint_mean_regret_rate", s.endpoint_mean_rate},
                           {"misidentification_rate", s.misidentification_rate}});
        std::cout << s.id << " t0=" << s.t0 << " endpoint_mean_regret_rate=" << s.endpoint_mean_rate
                  << " misidentification_rate=" << s.misidentification_rate << '\n';
      }
      out.write("summary.json", summary.dump(2));
      out.finalize(json{{"n_list", suite_options.n_list},
                        {"p", suite_options.density},
                        {"horizon", suite_options.horizon},
                        {"runs", suite_options.runs},
                        {"delta", suite_options.delta},
                        {"c0", suite_options.constants.c0},
                        {"c1", suite_options.constants.c1},
                        {"c2", suite_options.constants.c2},
                        {"c3", suite_options.constants.c3},
                        {"kappa", suite_options.kappa},
                        {"seed", suite_options.seed}});
      return 0;
    }

    if (diag_kernel->parsed()) {
      const fmab::Kernel kernel = fmab::hom_expected_kernel(dk_n, dk_p);
      const double lambda2 = fmab::hom_lambda2(dk_n, dk_p);
      const double alpha = fmab::minorization_constant(dk_n, dk_p);
      const fmab::SpectrumReport spectrum =
          fmab::spectrum_report(kernel, fmab::Distribution::uniform(dk_n));
      std::cout << "diagonal " << format6(kernel.rows(0, 0)) << '\n'
                << "off_diagonal " << format6(dk_n >= 2 ? kernel.rows(0, 1) : 0.0) << '\n'
                << "lambda2 " << format6(lambda2) << '\n'
                << "gamma " << format6(1.0 - lambda2) << '\n'
                << "lambda_min " << format6(spectrum.lambda_min) << '\n'
                << "minorization " << format6(alpha) << '\n';
      fmab::Table table({"quantity", "value"});
      table.add_row({std::string("diagonal"), kernel.rows(0, 0)});
      table.add_row({std::string("off_diagonal"), dk_n >= 2 ? kernel.rows(0, 1) : 0.0});
      table.add_row({std::string("lambda2"), lambda2});
      table.add_row({std::string("gamma"), 1.0 - lambda2});
      table.add_row({std::string("lambda_min"), spectrum.lambda_min});
      table.add_row({std::string("minorization"), alpha});
      OutputDir out(dk_common.out, "diag-kernel");
      out.write_table("diag_kernel", table, dk_common.format);
      out.finalize(json{{"n", dk_n}, {"p", dk_p}});
      return 0;
    }

    if (diag_tv->parsed()) {
      double p0 = tv_initial_density;
      if (p0 < 0.0) p0 = fmab::stationary_density(tv_alpha, tv_beta);
      fmab::Rng g0_rng(tv_seed ^ 0x5eedULL);
      fmab::Graph g0 = fmab::sample_er_hom(fmab::ErHomParams(tv_n, p0), g0_rng);
      fmab::EdgeMarkovParams params(tv_n, tv_alpha, tv_beta, std::move(g0));

      fmab::Distribution start = fmab::Distribution::uniform(tv_n);
      if (tv_start == "stationary") {
        start = fmab::stationary_law(params.initial_graph);
      } else if (tv_start.rfind("point:", 0) == 0) {
        start = fmab::Distribution::point_mass(tv_n, std::stoi(tv_start.substr(6)));
      } else if (tv_start != "uniform") {
        throw fmab::ConfigError("diag-tv: unknown --start '" + tv_start + "'");
      }

      fmab::TvDiagResult result = fmab::tv_diag_run(params, tv_rounds, start, tv_seed);
      std::cout << "gamma0 " << format6(result.gamma0) << '\n'
                << "eps_max " << format6(result.eps_max) << '\n'
                << "min_recursion_slack " << result.min_slack << '\n';
      OutputDir out(tv_common.out, "diag-tv");
      out.write_table("tv_diag", result.table(), tv_common.format);
      out.finalize(json{{"n", tv_n},
                        {"alpha", tv_alpha},
                        {"beta", tv_beta},
                        {"rounds", tv_rounds},
                        {"seed", tv_seed},
                        {"start", tv_start},
                        {"initial_density", tv_initial_density}});
      return 0;
    }

    if (bounds_cmd->parsed()) {
      fmab::Table table({"quantity", "value"});
      const double confidence = fmab::bern_kl(1.0 - b_delta, b_delta);
      table.add_row({std::string("kl_confidence"), confidence});
      table.add_row({std::string("per_arm_exact"), fmab::per_arm_lower_bound(b_gap, b_delta, true)});
      if (b_gap <= 0.25)
        table.add_row({std::string("per_arm_clean"), fmab::per_arm_lower_bound(b_gap, b_delta, false)});
      const fmab::GapProfile profile(std::vector<double>(b_n - 1, b_gap), b_delta);
      table.add_row(
          {std::string("identification_time_lower_bound"), fmab::identification_time_lower_bound(profile)});
      table.add_row({std::string("traversal_floor"),
                     static_cast<double>(fmab::traversal_lower_bound(b_n))});
      if (b_phi_star >= 0.0 && b_sigma_min > 0.0) {
        table.add_row({std::string("gamma_het_lower_bound"),
                       fmab::gamma_het_lower_bound(b_eta, b_phi_star, b_sigma_min)});
      }
      if (b_zeta >= 0.0) {
        table.add_row({std::string("flip_envelope"),
                       fmab::flip_envelope(b_zeta, b_n, b_log_term, b_flip_c, b_flip_cprime)});
      }
      std::cout << table.to_csv();
      OutputDir out(bounds_common.out, "bounds");
      out.write_table("bounds", table, bounds_common.format);
      out.finalize(json{{"n", b_n}, {"gap", b_gap}, {"delta", b_delta}});
      return 0;
    }

    if (disaster->parsed()) {
      fmab::ScenarioPreset preset = fmab::disaster_preset(disaster_options);
      const auto& markov = std::get<fmab::EdgeMarkovProcessSpec>(preset.config.graph_process);
      std::cout << preset.name << " n=" << fmab::process_node_count(preset.config.graph_process)
                << " horizon=" << preset.config.horizon << " t0=" << preset.config.policy.t0
                << " alpha=" << markov.alpha << " beta=" << markov.beta
                << " content_hash=" << hex64(preset.content_hash) << '\n';

      fmab::MonteCarloResult mc = fmab::run_monte_carlo(preset.config, disaster_runs, disaster_common.jobs);
      int committed_correctly = 0;
      double support_min = 1e18;
      for (const fmab::RunResult& r : mc.runs) {
        if (!r.nav_censored && r.identified_correctly) ++committed_correctly;
        support_min = std::min(support_min, static_cast<double>(r.exploration_support));
      }
      const double commit_rate = static_cast<double>(committed_correctly) / disaster_runs;
      std::cout << "hotspot_commit_rate=" << commit_rate
                << " misidentification_rate=" << mc.misidentification_rate
                << " min_exploration_support=" << support_min << '\n';

      OutputDir out(disaster_common.out, "disaster");
      out.write_table("disaster_aggregate", mc.aggregate_table(preset.name), disaster_common.format);
      json summary;
      summary["preset"] = preset.name;
      summary["description"] = preset.description;
      summary["content_hash"] = hex64(preset.content_hash);
      summary["t0"] = preset.config.policy.t0;
      summary["runs"] = disaster_runs;
      summary["hotspot_commit_rate"] = commit_rate;
      summary["misidentification_rate"] = mc.misidentification_rate;
      summary["nav_time"] = nav_stats_json(mc);
      out.write("summary.json", summary.dump(2));

      // Phase-signature histograms for the first run.
      const long long t0 = preset.config.policy.t0;
      const long long horizon = preset.config.horizon;
      std::vector<fmab::WindowRange> windows{{1, 500}, {501, t0}, {t0 + 1, horizon}};
      out.write_table("disaster_histograms", fmab::visitation_histogram_suite(preset.config, windows),
                      disaster_common.format);
      out.finalize(json::parse(fmab::run_config_to_json(preset.config)));
      return 0;
    }
  } catch (const fmab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const fmab::CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
