#include "fmab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fmab/errors.hpp"
#include "json.hpp"

namespace fmab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// One-round environment view of a graph process. ER processes are i.i.d., so
// drawing only the anchor's incident edges realizes the same availability law
// as drawing the whole graph; the edge-Markov process carries real state.
class ProcessState {
 public:
  virtual ~ProcessState() = default;
  virtual void advance(Rng& rng) = 0;
  virtual AvailabilitySet available_from(int anchor, Rng& rng) = 0;
};

class ErHomProcess final : public ProcessState {
 public:
  ErHomProcess(int n, double p) : n_(n), p_(p) {}
  void advance(Rng&) override {}
  AvailabilitySet available_from(int anchor, Rng& rng) override {
    AvailabilitySet avail;
    avail.anchor = anchor;
    for (int j = 0; j < n_; ++j) {
      if (j == anchor || rng.bernoulli(p_)) avail.members.push_back(j);
    }
    return avail;
  }

 private:
  int n_;
  double p_;
};

class ErHetProcess final : public ProcessState {
 public:
  explicit ErHetProcess(std::shared_ptr<const ErHetParams> params) : params_(std::move(params)) {}
  void advance(Rng&) override {}
  AvailabilitySet available_from(int anchor, Rng& rng) override {
    AvailabilitySet avail;
    avail.anchor = anchor;
    for (int j = 0; j < params_->n; ++j) {
      if (j == anchor || rng.bernoulli(params_->prob(anchor, j))) avail.members.push_back(j);
    }
    return avail;
  }

 private:
  std::shared_ptr<const ErHetParams> params_;
};

class EdgeMarkovProcess final : public ProcessState {
 public:
  EdgeMarkovProcess(const EdgeMarkovProcessSpec& spec, Rng& rng)
      : params_(spec.n, spec.alpha, spec.beta, initial(spec, rng)), graph_(params_.initial_graph) {}

  void advance(Rng& rng) override { graph_ = step_edge_markov(graph_, params_, rng); }

  AvailabilitySet available_from(int anchor, Rng&) override { return available_set(graph_, anchor); }

 private:
  static Graph initial(const EdgeMarkovProcessSpec& spec, Rng& rng) {
    if (spec.initial_graph) return *spec.initial_graph;
    double p0 = spec.initial_density;
    if (p0 < 0.0) p0 = stationary_density(spec.alpha, spec.beta);
    return sample_er_hom(ErHomParams(spec.n, p0), rng);
  }

  EdgeMarkovParams params_;
  Graph graph_;
};

std::unique_ptr<ProcessState> make_process(const GraphProcessSpec& spec, Rng& rng) {
  if (const auto* hom = std::get_if<ErHomProcessSpec>(&spec)) {
    ErHomParams check(hom->n, hom->p);  // validates
    return std::make_unique<ErHomProcess>(check.n, check.p);
  }
  if (const auto* het = std::get_if<ErHetProcessSpec>(&spec)) {
    require(het->params != nullptr, "RunConfig: missing heterogeneous parameters");
    return std::make_unique<ErHetProcess>(het->params);
  }
  const auto& markov = std::get<EdgeMarkovProcessSpec>(spec);
  return std::make_unique<EdgeMarkovProcess>(markov, rng);
}

std::vector<long long> default_checkpoints(long long horizon) {
  std::set<long long> points;
  points.insert(1);
  points.insert(horizon);
  const int target_count = 100;
  const double ratio = std::pow(static_cast<double>(horizon), 1.0 / target_count);
  double x = 1.0;
  for (int k = 0; k < target_count; ++k) {
    x *= ratio;
    const long long t = std::llround(x);
    if (t >= 1 && t <= horizon) points.insert(t);
  }
  return {points.begin(), points.end()};
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * (sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - lo;
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

long long quantile_sorted_ll(const std::vector<long long>& sorted, double q) {
  if (sorted.empty()) return 0;
  const double pos = q * (sorted.size() - 1);
  const std::size_t idx = static_cast<std::size_t>(std::llround(pos));
  return sorted[std::min(idx, sorted.size() - 1)];
}

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::Explore:
      return "explore";
    case Phase::Navigate:
      return "navigate";
    case Phase::Commit:
      return "commit";
  }
  return "?";
}

}  // namespace

int process_node_count(const GraphProcessSpec& spec) {
  if (const auto* hom = std::get_if<ErHomProcessSpec>(&spec)) return hom->n;
  if (const auto* het = std::get_if<ErHetProcessSpec>(&spec)) return het->params ? het->params->n : 0;
  return std::get<EdgeMarkovProcessSpec>(spec).n;
}

RunConfig::RunConfig(GraphProcessSpec process, RewardModel rewards_, long long horizon_,
                     PolicyConfig policy_, std::uint64_t seed_)
    : graph_process(std::move(process)),
      rewards(std::move(rewards_)),
      horizon(horizon_),
      policy(policy_),
      seed(seed_) {
  validate();
}

void RunConfig::validate() const {
  const int n = process_node_count(graph_process);
  require(n >= 2, "RunConfig: process must have n >= 2");
  require(rewards.arm_count() == n, "RunConfig: reward means must match the node count");
  require(horizon >= policy.t0, "RunConfig: horizon must be >= t0");
  require(policy.t0 >= 1, "RunConfig: t0 must be >= 1");
  require(start_position >= 0 && start_position < n, "RunConfig: start position out of range");
  require(pre_burn_in >= 0, "RunConfig: pre_burn_in must be >= 0");
  if (pre_burn_in > 0) {
    require(burn_in_behavior == BurnInBehavior::Skip, "RunConfig: pre_burn_in requires skip behavior");
    require(std::holds_alternative<EdgeMarkovProcessSpec>(graph_process),
            "RunConfig: burn-in skipping applies to the edge-Markov process only");
  }
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    require(checkpoints[i] >= 1 && checkpoints[i] <= horizon, "RunConfig: checkpoint out of range");
    require(i == 0 || checkpoints[i] > checkpoints[i - 1], "RunConfig: checkpoints must be increasing");
  }
}

RunResult run_episode(const RunConfig& config) { return run_episode(config, 0); }

RunResult run_episode(const RunConfig& config, std::uint64_t run_index) {
  config.validate();
  Rng rng = Rng::for_stream(config.seed, run_index);
  auto process = make_process(config.graph_process, rng);
  const int n = process_node_count(config.graph_process);

  if (config.burn_in_behavior == BurnInBehavior::Skip) {
    for (long long s = 0; s < config.pre_burn_in; ++s) process->advance(rng);
  }

  AgentState agent(n, config.start_position);
  const RewardModel& rewards = config.rewards;
  std::vector<double> frozen_means;

  RunResult result;
  result.checkpoints = config.checkpoints.empty() ? default_checkpoints(config.horizon) : config.checkpoints;
  result.checkpoint_cum_pseudo.resize(result.checkpoints.size(), 0.0);
  result.checkpoint_cum_realized.resize(result.checkpoints.size(), 0.0);
  if (config.record_trace) result.trace.reserve(static_cast<std::size_t>(config.horizon));

  std::vector<bool> explored(n, false);
  long long rounds_after_commit = 0;
  long long rounds_after_commit_on_target = 0;
  std::size_t next_checkpoint = 0;

  for (long long t = 1; t <= config.horizon; ++t) {
    process->advance(rng);
    const int position = agent.position;
    const AvailabilitySet avail = process->available_from(position, rng);

    int action = position;
    const Phase phase_at_selection = agent.phase;
    switch (agent.phase) {
      case Phase::Explore:
        action = explore_step(agent, avail, rng);
        break;
      case Phase::Navigate:
        action = navigate_step(agent, avail, config.policy.navigation_mode,
                               frozen_means.empty() ? nullptr : &frozen_means, rng);
        break;
      case Phase::Commit:
        action = commit_step(agent);
        break;
    }

    const double reward = sample_reward(rewards, action, rng);
    update_trackers(agent, action, reward);

    const double pseudo = regret_increment(rewards, action);
    const double realized = rewards.optimal_mean() - reward;
    result.cum_pseudo_regret += pseudo;
    result.cum_realized_regret += realized;

    if (phase_at_selection == Phase::Explore) explored[action] = true;
    if (phase_at_selection == Phase::Navigate && agent.phase == Phase::Commit) {
      result.commit_round = t;
      result.nav_time = t - config.policy.t0;
      result.nav_censored = false;
    }
    if (result.commit_round >= 0 && t > result.commit_round) {
      ++rounds_after_commit;
      if (action == *agent.target) ++rounds_after_commit_on_target;
    }

    if (config.record_trace) {
      result.trace.push_back({t, position, action, reward, pseudo, result.cum_pseudo_regret, realized,
                              phase_at_selection});
    }
    while (next_checkpoint < result.checkpoints.size() && result.checkpoints[next_checkpoint] == t) {
      result.checkpoint_cum_pseudo[next_checkpoint] = result.cum_pseudo_regret;
      result.checkpoint_cum_realized[next_checkpoint] = result.cum_realized_regret;
      ++next_checkpoint;
    }

    if (t == config.policy.t0) {
      result.identified_arm = identify(agent);
      result.identified_correctly = result.identified_arm == rewards.optimal_arm();
      frozen_means.resize(n);
      for (int a = 0; a < n; ++a) frozen_means[a] = agent.empirical_mean(a);
    }
  }

  if (result.nav_censored) result.nav_time = config.horizon - config.policy.t0;
  result.visit_histogram = agent.visits;
  result.exploration_support = std::count(explored.begin(), explored.end(), true);
  result.commit_window_target_fraction =
      rounds_after_commit > 0
          ? static_cast<double>(rounds_after_commit_on_target) / static_cast<double>(rounds_after_commit)
          : 0.0;
  return result;
}

MonteCarloResult run_monte_carlo(const RunConfig& config, int n_runs, int jobs) {
  require(n_runs >= 1, "run_monte_carlo: n_runs must be >= 1");
  require(jobs >= 1, "run_monte_carlo: jobs must be >= 1");
  config.validate();

  MonteCarloResult mc;
  mc.n_runs = n_runs;
  mc.runs.resize(n_runs);

  std::atomic<int> next_run{0};
  auto worker = [&]() {
    for (;;) {
      const int run = next_run.fetch_add(1);
      if (run >= n_runs) return;
      RunResult r = run_episode(config, static_cast<std::uint64_t>(run));
      r.trace.clear();
      mc.runs[run] = std::move(r);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    const int active = std::min(jobs, n_runs);
    threads.reserve(active);
    for (int w = 0; w < active; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  mc.checkpoints = mc.runs.front().checkpoints;
  const std::size_t k = mc.checkpoints.size();
  mc.mean_rate.resize(k);
  mc.median_rate.resize(k);
  mc.q25_rate.resize(k);
  mc.q75_rate.resize(k);
  std::vector<double> column(n_runs);
  for (std::size_t c = 0; c < k; ++c) {
    const double t = static_cast<double>(mc.checkpoints[c]);
    for (int run = 0; run < n_runs; ++run) column[run] = mc.runs[run].checkpoint_cum_pseudo[c] / t;
    double sum = 0.0;
    for (double v : column) sum += v;
    mc.mean_rate[c] = sum / n_runs;
    std::sort(column.begin(), column.end());
    mc.median_rate[c] = quantile_sorted(column, 0.5);
    mc.q25_rate[c] = quantile_sorted(column, 0.25);
    mc.q75_rate[c] = quantile_sorted(column, 0.75);
  }

  int misidentified = 0;
  for (const RunResult& r : mc.runs) {
    if (!r.identified_correctly) ++misidentified;
    mc.nav_times.push_back(r.nav_time);
    if (r.nav_censored) ++mc.censored_count;
  }
  mc.misidentification_rate = static_cast<double>(misidentified) / static_cast<double>(n_runs);
  return mc;
}

Table MonteCarloResult::aggregate_table(const std::string& series_id) const {
  Table table({"series_id", "t", "mean", "median", "q25", "q75", "n_runs"});
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    table.add_row({series_id, checkpoints[c], mean_rate[c], median_rate[c], q25_rate[c], q75_rate[c],
                   static_cast<long long>(n_runs)});
  }
  return table;
}

RegretSuiteResult regret_curve_suite(const RegretSuiteOptions& options) {
  require(!options.n_list.empty(), "regret_curve_suite: empty n list");
  require(options.density > 0.0 && options.density < 1.0, "regret_curve_suite: density must be in (0,1)");
  RegretSuiteResult result;
  std::uint64_t seed = options.seed;
  for (int n : options.n_list) {
    std::vector<double> means(n, options.mu_other);
    means[0] = options.mu_star;
    RewardModel rewards(means, RewardKind::Bernoulli);

    SizingInputs sizing;
    sizing.n = n;
    sizing.horizon = options.horizon;
    sizing.delta = options.delta;
    sizing.delta_min = rewards.delta_min();
    sizing.c0 = options.constants.c0;
    sizing.c1 = options.constants.c1;
    sizing.c2 = options.constants.c2;
    sizing.c3 = options.constants.c3;

    for (const std::string& model : {std::string("er_hom"), std::string("edge_markov")}) {
      GraphProcessSpec process;
      long long t0 = 0;
      if (model == "er_hom") {
        process = ErHomProcessSpec{n, options.density};
        t0 = exploration_length_er(sizing);
      } else {
        // Stickiness-guided rates at the requested stationary density.
        const double beta = options.kappa / n;
        const double alpha = beta * options.density / (1.0 - options.density);
        sizing.alpha = alpha;
        sizing.beta = beta;
        const MarkovSizing markov = exploration_length_markov(sizing);
        t0 = markov.burn_in + markov.t_exp;
        process = EdgeMarkovProcessSpec{n, alpha, beta, nullptr, -1.0};
      }
      t0 = std::min<long long>(t0, options.horizon);

      RunConfig config(process, rewards, options.horizon, PolicyConfig(t0, NavigationMode::LazyWalk),
                       seed++);
      MonteCarloResult mc = run_monte_carlo(config, options.runs, options.jobs);

      RegretSeries series;
      series.model = model;
      series.n = n;
      series.runs = options.runs;
      series.id = model + "_n" + std::to_string(n);
      series.t0 = t0;
      series.checkpoints = mc.checkpoints;
      series.mean_rate = mc.mean_rate;
      series.median_rate = mc.median_rate;
      series.q25_rate = mc.q25_rate;
      series.q75_rate = mc.q75_rate;
      series.endpoint_mean_rate = mc.mean_rate.back();
      series.misidentification_rate = mc.misidentification_rate;
      result.series.push_back(std::move(series));
    }
  }
  return result;
}

Table RegretSuiteResult::table() const {
  Table table({"series_id", "t", "mean", "median", "q25", "q75", "n_runs"});
  for (const RegretSeries& s : series) {
    for (std::size_t c = 0; c < s.checkpoints.size(); ++c) {
      table.add_row({s.id, s.checkpoints[c], s.mean_rate[c], s.median_rate[c], s.q25_rate[c],
                     s.q75_rate[c], static_cast<long long>(s.runs)});
    }
  }
  return table;
}

NavSweepResult navigation_sweep(const NavSweepOptions& options) {
  require(!options.p_list.empty(), "navigation_sweep: empty p list");
  NavSweepResult result;
  std::uint64_t seed = options.seed;
  for (double p : options.p_list) {
    std::vector<double> means(options.n, 0.3);
    means[0] = 0.9;
    RewardModel rewards(means, RewardKind::Bernoulli);
    RunConfig config(ErHomProcessSpec{options.n, p}, rewards, options.t0 + options.nav_window,
                     PolicyConfig(options.t0, options.mode), seed++);
    MonteCarloResult mc = run_monte_carlo(config, options.runs, options.jobs);

    std::vector<long long> nav = mc.nav_times;
    std::sort(nav.begin(), nav.end());
    NavSweepRow row;
    row.p = p;
    row.n = options.n;
    row.runs = options.runs;
    row.min = nav.front();
    row.q25 = quantile_sorted_ll(nav, 0.25);
    row.median = quantile_sorted_ll(nav, 0.5);
    row.q75 = quantile_sorted_ll(nav, 0.75);
    row.max = nav.back();
    row.censored_count = mc.censored_count;
    result.rows.push_back(row);
  }
  return result;
}

Table NavSweepResult::table() const {
  Table table({"p", "n", "runs", "min", "q25", "median", "q75", "max", "censored_count"});
  for (const NavSweepRow& r : rows) {
    table.add_row({r.p, static_cast<long long>(r.n), static_cast<long long>(r.runs), r.min, r.q25, r.median,
                   r.q75, r.max, r.censored_count});
  }
  return table;
}

ScenarioPreset disaster_preset(const DisasterOptions& options) {
  require(options.stationary_density > 0.0 && options.stationary_density < 1.0,
          "disaster_preset: density must be in (0,1)");
  const int n = 500;
  const long long horizon = 80640;
  const double delta = options.delta;

  // Frozen scenario content: hotspot location and site qualities all derive
  // from the scenario seed.
  Rng scenario_rng(options.scenario_seed);
  std::vector<double> means(n);
  for (int a = 0; a < n; ++a) means[a] = scenario_rng.uniform_range(0.1, 0.4);
  std::vector<int> special;
  while (special.size() < 11) {
    const int a = scenario_rng.uniform_int(n);
    if (std::find(special.begin(), special.end(), a) == special.end()) special.push_back(a);
  }
  means[special[0]] = 0.95;  // the hotspot
  for (int k = 1; k <= 10; ++k) means[special[k]] = scenario_rng.uniform_range(0.45, 0.65);
  RewardModel rewards(means, RewardKind::Bernoulli);

  const double beta = options.kappa / n;
  const double alpha = beta * options.stationary_density / (1.0 - options.stationary_density);
  if (!stickiness_check(n, alpha, beta, options.kappa)) {
    throw std::invalid_argument("disaster_preset: beta violates the stickiness condition");
  }

  SizingInputs sizing;
  sizing.n = n;
  sizing.horizon = horizon;
  sizing.delta = delta;
  sizing.delta_min = rewards.delta_min();
  sizing.alpha = alpha;
  sizing.beta = beta;
  sizing.c0 = options.constants.c0;
  sizing.c1 = options.constants.c1;
  sizing.c2 = options.constants.c2;
  sizing.c3 = options.constants.c3;
  const MarkovSizing markov = exploration_length_markov(sizing);
  const long long t0 = std::min<long long>(markov.burn_in + markov.t_exp, horizon);

  RunConfig config(EdgeMarkovProcessSpec{n, alpha, beta, nullptr, -1.0}, rewards, horizon,
                   PolicyConfig(t0, NavigationMode::LazyWalk), options.scenario_seed);

  const std::string name = "disaster_relay_scouting";
  std::ostringstream frozen;
  frozen << name << '|' << n << '|' << horizon << '|' << t0 << '|' << alpha << '|' << beta;
  for (double m : means) frozen << '|' << format_double(m);

  return ScenarioPreset{
      name,
      "500 candidate relay sites, one 0.95 hotspot, ten moderate sites in [0.45,0.65], "
      "489 weak sites in [0.1,0.4]; edge-Markov street availability at stationary density " +
          format_double(options.stationary_density) + "; two-week horizon of 80640 rounds.",
      std::move(config), fnv1a_hash(frozen.str())};
}

TvDiagResult tv_diag_run(const EdgeMarkovParams& params, long long rounds, const Distribution& start,
                         std::uint64_t seed) {
  if (params.n > 500) throw CapabilityError("tv_diag_run: dense kernels capped at n=500");
  require(start.size() == params.n, "tv_diag_run: start distribution size mismatch");
  require(rounds >= 2, "tv_diag_run: need at least two rounds");

  Rng rng(seed);
  TvDiagResult result;
  result.gamma0 = 1.0;
  result.eps_max = 0.0;
  result.min_slack = std::numeric_limits<double>::infinity();

  Graph g = params.initial_graph;
  Kernel kernel = lazy_kernel(g);
  Distribution pi = stationary_law(g);
  Distribution nu = start;

  for (long long t = 1; t < rounds; ++t) {
    const double gamma = spectral_gap(kernel, pi);
    const double d_t = tv_distance(nu, pi);

    Graph g_next = step_edge_markov(g, params, rng);
    Kernel kernel_next = lazy_kernel(g_next);
    Distribution pi_next = stationary_law(g_next);

    const double eps = tv_distance(pi_next, pi);
    const double kappa = kernel_drift(kernel, kernel_next);

    Distribution nu_next = propagate_law(nu, kernel);
    const double d_next = tv_distance(nu_next, pi_next);
    const double slack = (1.0 - gamma) * d_t + eps - d_next;

    result.steps.push_back({t, gamma, eps, kappa, d_t, slack});
    result.gamma0 = std::min(result.gamma0, gamma);
    result.eps_max = std::max(result.eps_max, eps);
    result.min_slack = std::min(result.min_slack, slack);

    g = std::move(g_next);
    kernel = std::move(kernel_next);
    pi = std::move(pi_next);
    nu = std::move(nu_next);
  }
  return result;
}

Table TvDiagResult::table() const {
  Table table({"t", "gamma", "epsilon", "kappa", "tv_deviation", "recursion_slack"});
  for (const TvDiagStep& s : steps) {
    table.add_row({s.t, s.gamma, s.epsilon, s.kappa, s.deviation, s.recursion_slack});
  }
  return table;
}

Table visitation_histogram_suite(const RunConfig& config, const std::vector<WindowRange>& windows) {
  require(!windows.empty(), "visitation_histogram_suite: no windows");
  for (const WindowRange& w : windows) {
    require(w.start >= 1 && w.end >= w.start && w.end <= config.horizon,
            "visitation_histogram_suite: invalid window");
  }
  RunConfig traced = config;
  traced.record_trace = true;
  const RunResult result = run_episode(traced);

  const int n = process_node_count(config.graph_process);
  Table table({"window_start", "window_end", "arm", "visits"});
  for (const WindowRange& w : windows) {
    std::vector<long long> counts(n, 0);
    for (const TraceRow& row : result.trace) {
      if (row.t >= w.start && row.t <= w.end) ++counts[row.action];
    }
    for (int a = 0; a < n; ++a) {
      table.add_row({w.start, w.end, static_cast<long long>(a), counts[a]});
    }
  }
  return table;
}

long long line_cover_time(int n, LinePolicy policy, Rng& rng) {
  require(n >= 2, "line_cover_time: n must be >= 2");
  int position = 0;
  int visited = 1;
  std::vector<bool> seen(n, false);
  seen[0] = true;
  long long t = 0;
  while (visited < n) {
    ++t;
    int action = position;
    if (position < n - 1) {
      // L_t(i) = {i, i+1}
      if (policy == LinePolicy::AlwaysAdvance || rng.bernoulli(0.5)) action = position + 1;
    }
    position = action;
    if (!seen[position]) {
      seen[position] = true;
      ++visited;
    }
  }
  return t;
}

Table trace_table(const RunResult& result, long long run_id) {
  Table table({"run_id", "t", "position", "action", "reward", "pseudo_regret", "cum_pseudo_regret",
               "realized_regret", "phase"});
  for (const TraceRow& row : result.trace) {
    table.add_row({run_id, row.t, static_cast<long long>(row.position), static_cast<long long>(row.action),
                   row.reward, row.pseudo_regret, row.cum_pseudo_regret, row.realized_regret,
                   std::string(phase_name(row.phase))});
  }
  return table;
}

namespace {

using nlohmann::json;

const json& field(const json& doc, const char* key, const char* context) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError(std::string(context) + ": missing field '" + key + "'");
  return *it;
}

double number_field(const json& doc, const char* key, const char* context) {
  const json& v = field(doc, key, context);
  if (!v.is_number()) throw ConfigError(std::string(context) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

long long integer_field(const json& doc, const char* key, const char* context) {
  const json& v = field(doc, key, context);
  if (!v.is_number_integer())
    throw ConfigError(std::string(context) + ": field '" + key + "' must be an integer");
  return v.get<long long>();
}

std::string string_field(const json& doc, const char* key, const char* context) {
  const json& v = field(doc, key, context);
  if (!v.is_string()) throw ConfigError(std::string(context) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

GraphProcessSpec process_from_json(const json& doc) {
  const std::string kind = string_field(doc, "kind", "graph_process");
  if (kind == "er_hom") {
    return ErHomProcessSpec{static_cast<int>(integer_field(doc, "n", "graph_process")),
                            number_field(doc, "p", "graph_process")};
  }
  if (kind == "er_het") {
    const int n = static_cast<int>(integer_field(doc, "n", "graph_process"));
    const json& rows = field(doc, "p_matrix", "graph_process");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n))
      throw ConfigError("graph_process: 'p_matrix' must be an n x n array");
    std::vector<double> p(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
      const json& row = rows[i];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
        throw ConfigError("graph_process: 'p_matrix' must be an n x n array");
      for (int j = 0; j < n; ++j) p[static_cast<std::size_t>(i) * n + j] = row[j].get<double>();
    }
    try {
      return ErHetProcessSpec{std::make_shared<ErHetParams>(n, std::move(p))};
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("graph_process: ") + e.what());
    }
  }
  if (kind == "edge_markov") {
    EdgeMarkovProcessSpec spec;
    spec.n = static_cast<int>(integer_field(doc, "n", "graph_process"));
    spec.alpha = number_field(doc, "alpha", "graph_process");
    spec.beta = number_field(doc, "beta", "graph_process");
    if (doc.contains("initial_density")) spec.initial_density = doc["initial_density"].get<double>();
    if (doc.contains("initial_edges")) {
      const json& edges = doc["initial_edges"];
      if (!edges.is_array()) throw ConfigError("graph_process: 'initial_edges' must be an array of pairs");
      std::vector<std::pair<int, int>> list;
      for (const json& e : edges) {
        if (!e.is_array() || e.size() != 2)
          throw ConfigError("graph_process: 'initial_edges' must be an array of pairs");
        list.emplace_back(e[0].get<int>(), e[1].get<int>());
      }
      try {
        spec.initial_graph = std::make_shared<Graph>(Graph::from_edges(spec.n, list));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("graph_process: ") + e.what());
      }
    }
    return spec;
  }
  throw ConfigError("graph_process: unknown kind '" + kind + "' (er_hom | er_het | edge_markov)");
}

}  // namespace

RunConfig run_config_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");

  GraphProcessSpec process = process_from_json(field(doc, "graph_process", "config"));

  const json& rewards_doc = field(doc, "rewards", "config");
  const std::string reward_kind = string_field(rewards_doc, "kind", "rewards");
  RewardKind kind;
  double halfwidth = 0.0;
  if (reward_kind == "bernoulli") {
    kind = RewardKind::Bernoulli;
  } else if (reward_kind == "bounded_uniform") {
    kind = RewardKind::BoundedUniform;
    halfwidth = number_field(rewards_doc, "halfwidth", "rewards");
  } else {
    throw ConfigError("rewards: unknown kind '" + reward_kind + "' (bernoulli | bounded_uniform)");
  }
  const json& means_doc = field(rewards_doc, "means", "rewards");
  if (!means_doc.is_array()) throw ConfigError("rewards: 'means' must be an array");
  std::vector<double> means;
  for (const json& m : means_doc) means.push_back(m.get<double>());

  const json& policy_doc = field(doc, "policy", "config");
  const long long t0 = integer_field(policy_doc, "t0", "policy");
  NavigationMode mode = NavigationMode::LazyWalk;
  if (policy_doc.contains("navigation_mode")) {
    const std::string m = policy_doc["navigation_mode"].get<std::string>();
    if (m == "lazy_walk") {
      mode = NavigationMode::LazyWalk;
    } else if (m == "greedy_frozen") {
      mode = NavigationMode::GreedyFrozen;
    } else if (m == "wait_at_current") {
      mode = NavigationMode::WaitAtCurrent;
    } else {
      throw ConfigError("policy: unknown navigation_mode '" + m +
                        "' (lazy_walk | greedy_frozen | wait_at_current)");
    }
  }

  try {
    RunConfig config(std::move(process), RewardModel(std::move(means), kind, halfwidth),
                     integer_field(doc, "horizon", "config"), PolicyConfig(t0, mode),
                     static_cast<std::uint64_t>(integer_field(doc, "seed", "config")));
    if (doc.contains("record_trace")) config.record_trace = doc["record_trace"].get<bool>();
    if (doc.contains("start_position")) config.start_position = doc["start_position"].get<int>();
    if (doc.contains("burn_in_behavior")) {
      const std::string b = doc["burn_in_behavior"].get<std::string>();
      if (b == "include") {
        config.burn_in_behavior = BurnInBehavior::Include;
      } else if (b == "skip") {
        config.burn_in_behavior = BurnInBehavior::Skip;
      } else {
        throw ConfigError("config: unknown burn_in_behavior '" + b + "' (include | skip)");
      }
    }
    if (doc.contains("pre_burn_in")) config.pre_burn_in = doc["pre_burn_in"].get<long long>();
    if (doc.contains("checkpoints")) {
      for (const json& c : doc["checkpoints"]) config.checkpoints.push_back(c.get<long long>());
    }
    config.validate();
    return config;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::string run_config_to_json(const RunConfig& config) {
  json doc;
  if (const auto* hom = std::get_if<ErHomProcessSpec>(&config.graph_process)) {
    doc["graph_process"] = {{"kind", "er_hom"}, {"n", hom->n}, {"p", hom->p}};
  } else if (const auto* het = std::get_if<ErHetProcessSpec>(&config.graph_process)) {
    json rows = json::array();
    for (int i = 0; i < het->params->n; ++i) {
      json row = json::array();
      for (int j = 0; j < het->params->n; ++j) row.push_back(het->params->prob(i, j));
      rows.push_back(std::move(row));
    }
    doc["graph_process"] = {{"kind", "er_het"}, {"n", het->params->n}, {"p_matrix", std::move(rows)}};
  } else {
    const auto& markov = std::get<EdgeMarkovProcessSpec>(config.graph_process);
    doc["graph_process"] = {{"kind", "edge_markov"},
                            {"n", markov.n},
                            {"alpha", markov.alpha},
                            {"beta", markov.beta},
                            {"initial_density", markov.initial_density}};
    if (markov.initial_graph) {
      json edges = json::array();
      for (auto [i, j] : markov.initial_graph->edges()) edges.push_back(json::array({i, j}));
      doc["graph_process"]["initial_edges"] = std::move(edges);
    }
  }
  doc["rewards"] = {{"kind", config.rewards.kind() == RewardKind::Bernoulli ? "bernoulli" : "bounded_uniform"},
                    {"means", config.rewards.means()}};
  if (config.rewards.kind() == RewardKind::BoundedUniform)
    doc["rewards"]["halfwidth"] = config.rewards.halfwidth();
  doc["horizon"] = config.horizon;
  doc["policy"] = {
      {"t0", config.policy.t0},
      {"navigation_mode", config.policy.navigation_mode == NavigationMode::LazyWalk      ? "lazy_walk"
                          : config.policy.navigation_mode == NavigationMode::GreedyFrozen ? "greedy_frozen"
                                                                                          : "wait_at_current"}};
  doc["seed"] = config.seed;
  doc["record_trace"] = config.record_trace;
  doc["start_position"] = config.start_position;
  doc["burn_in_behavior"] = config.burn_in_behavior == BurnInBehavior::Include ? "include" : "skip";
  doc["pre_burn_in"] = config.pre_burn_in;
  if (!config.checkpoints.empty()) doc["checkpoints"] = config.checkpoints;
  return doc.dump(2);
}

}  // namespace fmab
