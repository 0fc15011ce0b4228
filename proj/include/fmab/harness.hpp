#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fmab/agent.hpp"
#include "fmab/bandit.hpp"
#include "fmab/export.hpp"
#include "fmab/graphs.hpp"
#include "fmab/kernel.hpp"

namespace fmab {

struct ErHomProcessSpec {
  int n = 2;
  double p = 0.5;
};

struct ErHetProcessSpec {
  std::shared_ptr<const ErHetParams> params;
};

struct EdgeMarkovProcessSpec {
  int n = 2;
  double alpha = 0.1;
  double beta = 0.1;
  // G0: explicit graph, or a per-episode ER draw at initial_density
  // (negative means the stationary density alpha/(alpha+beta)).
  std::shared_ptr<const Graph> initial_graph;
  double initial_density = -1.0;
};

using GraphProcessSpec = std::variant<ErHomProcessSpec, ErHetProcessSpec, EdgeMarkovProcessSpec>;

int process_node_count(const GraphProcessSpec& spec);

enum class BurnInBehavior { Include, Skip };

struct RunConfig {
  GraphProcessSpec graph_process;
  RewardModel rewards;
  long long horizon = 1;
  PolicyConfig policy;
  std::uint64_t seed = 0;
  bool record_trace = false;
  // Edge-Markov only. Include: the burn-in rounds are ordinary exploration
  // rounds counted in the horizon (policy.t0 covers burn-in + exploration).
  // Skip: the graph advances pre_burn_in times before round 1, off the clock.
  BurnInBehavior burn_in_behavior = BurnInBehavior::Include;
  long long pre_burn_in = 0;
  int start_position = 0;
  // Regret checkpoints; empty selects a log-spaced grid of ~100 rounds plus T.
  std::vector<long long> checkpoints;

  RunConfig(GraphProcessSpec process, RewardModel rewards_, long long horizon_, PolicyConfig policy_,
            std::uint64_t seed_);
  void validate() const;
};

struct TraceRow {
  long long t = 0;
  int position = 0;  // a_{t-1}
  int action = 0;    // a_t
  double reward = 0.0;
  double pseudo_regret = 0.0;
  double cum_pseudo_regret = 0.0;
  double realized_regret = 0.0;
  Phase phase = Phase::Explore;
};

struct RunResult {
  std::vector<TraceRow> trace;  // populated only when record_trace
  int identified_arm = -1;
  bool identified_correctly = false;
  long long nav_time = 0;  // rounds from t0 to first commit; T - t0 if censored
  bool nav_censored = true;
  long long commit_round = -1;  // first round the target was played in phase II
  double cum_pseudo_regret = 0.0;
  double cum_realized_regret = 0.0;
  std::vector<long long> checkpoints;
  std::vector<double> checkpoint_cum_pseudo;
  std::vector<double> checkpoint_cum_realized;
  std::vector<long long> visit_histogram;
  long long exploration_support = 0;          // distinct arms visited during Explore
  double commit_window_target_fraction = 0.0;  // share of rounds after commit_round at the target
};

RunResult run_episode(const RunConfig& config);
// Same episode with the run-index-derived stream (Monte Carlo member i).
RunResult run_episode(const RunConfig& config, std::uint64_t run_index);

struct MonteCarloResult {
  int n_runs = 0;
  std::vector<long long> checkpoints;
  std::vector<double> mean_rate, median_rate, q25_rate, q75_rate;  // R(t)/t across runs
  double misidentification_rate = 0.0;
  std::vector<long long> nav_times;  // per run, censored values included
  long long censored_count = 0;
  std::vector<RunResult> runs;  // traces stripped

  Table aggregate_table(const std::string& series_id) const;
};

MonteCarloResult run_monte_carlo(const RunConfig& config, int n_runs, int jobs);

struct SizingConstants {
  double c0 = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  // Values from the documented calibration run (identification rate <= delta
  // with margin at the reference instances while keeping exploration short).
  static SizingConstants calibrated() { return {0.5, 0.25, 0.7, 1.0}; }
};

struct RegretSuiteOptions {
  std::vector<int> n_list{10, 50, 100};
  double density = 0.5;
  long long horizon = 10000;
  int runs = 50;
  double delta = 0.1;
  SizingConstants constants = SizingConstants::calibrated();
  double kappa = 1.0;  // stickiness constant for the edge-Markov rates
  double mu_star = 0.9;
  double mu_other = 0.3;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct RegretSeries {
  std::string id;
  std::string model;  // "er_hom" | "edge_markov"
  int n = 0;
  int runs = 0;
  long long t0 = 0;
  std::vector<long long> checkpoints;
  std::vector<double> mean_rate, median_rate, q25_rate, q75_rate;
  double endpoint_mean_rate = 0.0;
  double misidentification_rate = 0.0;
};

struct RegretSuiteResult {
  std::vector<RegretSeries> series;
  Table table() const;  // series_id,t,mean,median,q25,q75,n_runs
};

RegretSuiteResult regret_curve_suite(const RegretSuiteOptions& options);

struct NavSweepOptions {
  std::vector<double> p_list{0.01, 0.1, 0.4, 0.8};
  int n = 30;
  int runs = 1000;
  NavigationMode mode = NavigationMode::LazyWalk;
  long long t0 = 5000;      // fixed large exploration prefix
  long long nav_window = 3000;  // rounds allowed for navigation before censoring
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct NavSweepRow {
  double p = 0.0;
  int n = 0;
  int runs = 0;
  long long min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
  long long censored_count = 0;
};

struct NavSweepResult {
  std::vector<NavSweepRow> rows;
  Table table() const;  // p,n,runs,min,q25,median,q75,max,censored_count
};

NavSweepResult navigation_sweep(const NavSweepOptions& options);

struct ScenarioPreset {
  std::string name;
  std::string description;
  RunConfig config;
  std::uint64_t content_hash = 0;  // over the frozen scenario content
};

struct DisasterOptions {
  double stationary_density = 0.1;  // the brief gives ranges, not this value
  double kappa = 1.0;
  double delta = 0.1;
  SizingConstants constants = SizingConstants::calibrated();
  std::uint64_t scenario_seed = 2024;
};

// Relay-scouting scenario: n=500 sites, one hotspot at 0.95, ten moderate
// sites in [0.45,0.65], 489 weak sites in [0.1,0.4], two-week horizon
// T=80640, edge-Markov connectivity with a stickiness-checked beta.
ScenarioPreset disaster_preset(const DisasterOptions& options = {});

struct TvDiagStep {
  long long t = 0;
  double gamma = 0.0;
  double epsilon = 0.0;  // tv(pi_{t+1}, pi_t)
  double kappa = 0.0;    // Frobenius drift of consecutive kernels
  double deviation = 0.0;  // tv(nu_t, pi_t)
  double recursion_slack = 0.0;  // (1-gamma_t) d_t + eps_t - d_{t+1}
};

struct TvDiagResult {
  std::vector<TvDiagStep> steps;
  double gamma0 = 0.0;   // min_t gamma_t
  double eps_max = 0.0;  // max_t eps_t
  double min_slack = 0.0;
  Table table() const;
};

// Realizes one edge-Markov graph sequence and propagates the start law
// exactly through the realized kernels. Dense kernels; n <= 500.
TvDiagResult tv_diag_run(const EdgeMarkovParams& params, long long rounds, const Distribution& start,
                         std::uint64_t seed);

struct WindowRange {
  long long start = 1;  // inclusive
  long long end = 1;    // inclusive
};

// Per-window per-arm visit counts for one episode of config.
Table visitation_histogram_suite(const RunConfig& config, const std::vector<WindowRange>& windows);

enum class LinePolicy { AlwaysAdvance, UniformChoice };

// Cover time of the adversarial line availability process L_t(i) = {i, i+1}
// (top node maps only to itself), starting from node 0.
long long line_cover_time(int n, LinePolicy policy, Rng& rng);

Table trace_table(const RunResult& result, long long run_id);

// JSON config document <-> RunConfig (see README for the schema).
RunConfig run_config_from_json(const std::string& json_text);
std::string run_config_to_json(const RunConfig& config);

}  // namespace fmab
