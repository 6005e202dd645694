#include "rmc/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rmc/bounds.hpp"
#include "rmc/certify.hpp"
#include "rmc/io.hpp"
#include "rmc/rank.hpp"
#include "rmc/report.hpp"
#include "rmc/robust.hpp"
#include "rmc/sim.hpp"

namespace rmc::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultSeed = 20170601ULL;

struct Common {
  int threads = 0;
  std::string format;
  std::uint64_t seed = kDefaultSeed;
  std::int64_t node_budget = 1'000'000;
  std::int64_t cap = 10'000'000;
  std::int64_t probes = 0;
  std::string strategy = "intersection";
  std::string output;
};

NoiseBudget parse_noise(const std::string& text) {
  try {
    return NoiseBudget::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NoInput("cannot open " + path);
  return in;
}

RobustOptions robust_options(const Common& c) {
  RobustOptions o;
  o.search.node_budget = c.node_budget;
  if (c.strategy == "intersection") {
    o.search.strategy = SearchStrategy::MatroidIntersection;
  } else if (c.strategy == "backtrack") {
    o.search.strategy = SearchStrategy::Backtracking;
  } else {
    throw UsageError("--strategy must be intersection or backtrack");
  }
  o.enumeration_cap = c.cap;
  o.refutation_probes = c.probes;
  o.seed = c.seed;
  o.threads = c.threads;
  return o;
}

void emit(const Json& j, const std::string& format, std::ostream& out) {
  if (format == "text") {
    out << render_text(j);
  } else {
    out << j.dump(2) << '\n';
  }
}

// Writes to --output when given, else to out.
template <typename Fn>
void with_output(const Common& c, std::ostream& out, Fn&& fn) {
  if (c.output.empty()) {
    fn(out);
    return;
  }
  std::ofstream file(c.output);
  if (!file) throw NoInput("cannot write " + c.output);
  fn(file);
}

int robust_exit(RobustOutcome v) {
  switch (v) {
    case RobustOutcome::FinitelyCompletable:
    case RobustOutcome::UniquelyCompletable: return kSuccess;
    case RobustOutcome::Refuted: return kRefuted;
    case RobustOutcome::Indeterminate: return kIndeterminate;
  }
  return kInternal;
}

void add_common(CLI::App* cmd, Common& c, bool search, std::initializer_list<const char*> formats) {
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all available)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember(std::vector<std::string>(formats.begin(), formats.end())));
  cmd->add_option("--seed", c.seed, "Random seed");
  if (search) {
    cmd->add_option("--search-budget", c.node_budget, "Min-cut evaluations per certificate search")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--cap", c.cap, "Largest number of removal patterns enumerated exactly")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--probes", c.probes, "Random removal patterns tried before enumeration")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--strategy", c.strategy, "Certificate search: intersection or backtrack");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sampling-pattern certificates for robust low-rank matrix completion", "rmc"};
  app.require_subcommand(1);

  Common common;
  int exit_code = kSuccess;

  // verify
  auto* verify = app.add_subcommand("verify", "Check finite or unique completability of a pattern under noise");
  std::string pattern_path;
  int rank = 1;
  std::string noise = "global:0";
  bool unique = false;
  verify->add_option("--pattern", pattern_path, "Pattern file")->required();
  verify->add_option("--rank", rank, "Rank r")->required()->check(CLI::PositiveNumber);
  verify->add_option("--noise", noise, "global:s or percolumn:g");
  verify->add_flag("--unique", unique, "Check unique rather than finite completability");
  add_common(verify, common, true, {"json", "text"});

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Minimal per-column sample count from the sampling guarantees");
  BoundQuery bq;
  std::int64_t bound_n = 0;
  std::string bound_noise;
  bounds->add_option("--d", bq.d, "Rows")->required()->check(CLI::PositiveNumber);
  bounds->add_option("--r", bq.r, "Rank")->required()->check(CLI::PositiveNumber);
  bounds->add_option("--eps", bq.epsilon, "Failure probability in (0, 1)")->required();
  bounds->add_option("--N", bound_n, "Columns (enables the N requirement checks)")->check(CLI::PositiveNumber);
  bounds->add_option("--noise", bound_noise, "global:s or percolumn:g (omit for noiseless)");
  bounds->add_option("--log-base", bq.log_base, "Logarithm base (default e)");
  add_common(bounds, common, false, {"json", "text"});

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Bound curves over a rank range as CSV");
  int sweep_d = 0, r_min = 1, r_max = 0;
  std::int64_t sweep_n = 0;
  double sweep_eps = 0.01;
  std::vector<int> g_list{-1, 1, 2};
  sweep_cmd->add_option("--d", sweep_d, "Rows")->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--N", sweep_n, "Columns")->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--eps", sweep_eps, "Failure probability")->required();
  sweep_cmd->add_option("--rmin", r_min, "First rank")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--rmax", r_max, "Last rank")->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--g-list", g_list, "Per-column noise levels, -1 for noiseless")->delimiter(',');
  sweep_cmd->add_option("-o,--output", common.output, "Write to file instead of stdout");
  add_common(sweep_cmd, common, false, {"csv", "json"});

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "Estimate the rank ceiling r* and optionally state the dichotomy");
  std::string rank_pattern, rank_noise = "global:0", rank_data;
  int r_prime = 0;
  int completion_rank = 0;
  rank_cmd->add_option("--pattern", rank_pattern, "Pattern file (or use --data)");
  rank_cmd->add_option("--noise", rank_noise, "global:s or percolumn:g");
  rank_cmd->add_option("--r-prime", r_prime, "Candidate rank r' in {1..r*}")->check(CLI::PositiveNumber);
  auto* completion_opt =
      rank_cmd->add_option("--completion-rank", completion_rank, "Lowest rank of a known valid completion")
          ->check(CLI::PositiveNumber);
  rank_cmd->add_option("--data", rank_data, "Observation file; searched for valid completions of rank <= r'")
      ->excludes(completion_opt);
  add_common(rank_cmd, common, true, {"json", "text"});

  // identify
  auto* identify = app.add_subcommand("identify", "Recover the support of sparse noise from observations");
  std::string data_path;
  int id_rank = 1, id_s = 0;
  SupportSearchOptions sso;
  identify->add_option("--data", data_path, "Observation file")->required();
  identify->add_option("--rank", id_rank, "Rank r")->required()->check(CLI::PositiveNumber);
  identify->add_option("--s", id_s, "Noise budget s")->required()->check(CLI::NonNegativeNumber);
  identify->add_option("--tol", sso.fit.tolerance, "Relative residual tolerance")->check(CLI::PositiveNumber);
  identify->add_option("--restarts", sso.fit.restarts, "ALS restarts")->check(CLI::PositiveNumber);
  identify->add_option("--max-iter", sso.fit.max_iterations, "ALS iterations per restart")->check(CLI::PositiveNumber);
  add_common(identify, common, false, {"json", "text"});

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo pass rates on uniformly sampled patterns");
  int sim_d = 0, sim_n = 0, sim_r = 1, sim_l = -1, trials = 100;
  double sim_eps = 0.01;
  std::string sim_noise = "global:0";
  bool sim_unique = false;
  simulate->add_option("--d", sim_d, "Rows")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--N", sim_n, "Columns")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--r", sim_r, "Rank")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--l", sim_l, "Observed rows per column (omit to scan every l)")->check(CLI::NonNegativeNumber);
  simulate->add_option("--trials", trials, "Trials per l")->check(CLI::PositiveNumber);
  simulate->add_option("--eps", sim_eps, "Target failure probability");
  simulate->add_option("--noise", sim_noise, "global:s or percolumn:g");
  simulate->add_flag("--unique", sim_unique, "Count unique rather than finite completability");
  simulate->add_option("-o,--output", common.output, "Write to file instead of stdout");
  add_common(simulate, common, true, {"csv", "json"});

  // generate
  auto* generate = app.add_subcommand("generate", "Write a synthetic noisy instance as an observation file");
  int gen_d = 0, gen_n = 0, gen_r = 1, gen_l = -1;
  std::string gen_noise = "global:0", gen_meta;
  bool gen_planted = false;
  generate->add_option("--d", gen_d, "Rows")->required()->check(CLI::PositiveNumber);
  generate->add_option("--N", gen_n, "Columns")->required()->check(CLI::PositiveNumber);
  generate->add_option("--r", gen_r, "Rank")->required()->check(CLI::PositiveNumber);
  generate->add_option("--l", gen_l, "Observed rows per column (default d)")->check(CLI::NonNegativeNumber);
  generate->add_option("--noise", gen_noise, "global:s or percolumn:g");
  generate->add_flag("--planted", gen_planted, "Use exactly the budgeted number of noisy cells");
  generate->add_option("--meta", gen_meta, "Write sidecar metadata JSON here");
  generate->add_option("-o,--output", common.output, "Write to file instead of stdout");
  add_common(generate, common, false, {"text"});

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (verify->parsed()) {
      auto in = open_input(pattern_path);
      SamplingPattern pattern;
      try {
        pattern = read_pattern(in);
      } catch (const ParseError& e) {
        err << "malformed pattern file: " << e.what() << '\n';
        return kUsage;
      }
      const NoiseBudget budget = parse_noise(noise);
      const auto opts = robust_options(common);
      const auto v = unique ? verify_unique(pattern, rank, budget, opts) : verify_finite(pattern, rank, budget, opts);
      emit(robust_json(v, pattern, rank, budget), common.format, out);
      if (v.premise_violated) err << v.reason << '\n';
      exit_code = robust_exit(v.verdict);
    } else if (bounds->parsed()) {
      if (bounds->count("--N") > 0) bq.N = bound_n;
      if (!bound_noise.empty()) bq.budget = parse_noise(bound_noise);
      try {
        validate(bq);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto b = compute_bound(bq);
      emit(bound_json(bq, b), common.format, out);
      if (!b.premise_ok) err << "warning: r > d/6, the sampling guarantee's premise does not hold\n";
    } else if (sweep_cmd->parsed()) {
      if (r_min > r_max) throw UsageError("--rmin exceeds --rmax");
      if (!(sweep_eps > 0.0 && sweep_eps < 1.0)) throw UsageError("--eps must lie in (0, 1)");
      for (int g : g_list) {
        if (g < -1) throw UsageError("--g-list entries must be -1 or non-negative");
      }
      const auto rows = sweep(sweep_d, sweep_n, sweep_eps, r_min, r_max, g_list);
      with_output(common, out, [&](std::ostream& o) {
        if (common.format == "json") {
          Json j = Json::array();
          for (const auto& row : rows) {
            BoundQuery q;
            q.d = sweep_d;
            q.N = sweep_n;
            q.r = row.r;
            q.epsilon = sweep_eps;
            if (row.g >= 0) q.budget = NoiseBudget::per_column(row.g);
            j.push_back(bound_json(q, row.bound));
          }
          o << j.dump(2) << '\n';
        } else {
          write_sweep_csv(o, rows);
        }
      });
    } else if (rank_cmd->parsed()) {
      const NoiseBudget budget = parse_noise(rank_noise);
      std::optional<Observations> data;
      SamplingPattern pattern;
      if (!rank_data.empty()) {
        auto in = open_input(rank_data);
        data = read_observations(in);
        pattern = data->pattern();
      } else if (!rank_pattern.empty()) {
        auto in = open_input(rank_pattern);
        try {
          pattern = read_pattern(in);
        } catch (const ParseError& e) {
          err << "malformed pattern file: " << e.what() << '\n';
          return kUsage;
        }
      } else {
        throw UsageError("rank needs --pattern or --data");
      }
      const auto ceiling = estimate_rank_ceiling(pattern, budget, robust_options(common));
      Json j = rank_ceiling_json(ceiling);
      exit_code = ceiling.exact ? kSuccess : kIndeterminate;
      if (ceiling.r_star == 0) exit_code = ceiling.exact ? kRefuted : kIndeterminate;
      if (r_prime > 0) {
        std::optional<int> found;
        if (*completion_opt) {
          found = completion_rank;
        } else if (data) {
          if (!budget.is_global()) throw UsageError("--data completion search needs a global noise budget");
          SupportSearchOptions s;
          s.fit.seed = common.seed;
          s.fit.threads = common.threads;
          found = lowest_valid_completion(*data, r_prime, budget.amount, s);
        } else {
          throw UsageError("--r-prime needs --completion-rank or --data");
        }
        try {
          j["dichotomy"] = dichotomy_json(rank_dichotomy(ceiling, r_prime, found));
        } catch (const PreconditionError& e) {
          throw UsageError(e.what());
        }
      }
      emit(j, common.format, out);
    } else if (identify->parsed()) {
      auto in = open_input(data_path);
      const auto obs = read_observations(in);
      sso.fit.seed = common.seed;
      sso.fit.threads = common.threads;
      Json j;
      j["rank"] = id_rank;
      j["s"] = id_s;
      j["tolerance"] = sso.fit.tolerance;
      try {
        const auto support = identify_noise_support(obs, id_rank, id_s, sso);
        Json cells = Json::array();
        for (const Cell& c : support) cells.push_back({c.row, c.col});
        j["found"] = true;
        j["support"] = std::move(cells);
        j["fit"] = fit_json(rank_r_fit(obs.without(support), id_rank, sso.fit));
      } catch (const NoSupportFound& e) {
        j["found"] = false;
        j["reason"] = e.what();
        exit_code = kRefuted;
      }
      emit(j, common.format, out);
    } else if (simulate->parsed()) {
      const NoiseBudget budget = parse_noise(sim_noise);
      if (sim_l > sim_d) throw UsageError("--l exceeds --d");
      if (!(sim_eps > 0.0 && sim_eps < 1.0)) throw UsageError("--eps must lie in (0, 1)");
      const auto opts = robust_options(common);
      const Target target = sim_unique ? Target::Unique : Target::Finite;
      BoundQuery q;
      q.d = sim_d;
      q.N = sim_n;
      q.r = sim_r;
      q.epsilon = sim_eps;
      q.budget = budget;
      const auto theory = compute_bound(q).l_min;
      with_output(common, out, [&](std::ostream& o) {
        if (sim_l >= 0) {
          TrialConfig cfg{sim_d, sim_n, sim_r, sim_l, budget, trials, common.seed, target};
          const auto outcome = estimate_pass_probability(cfg, opts);
          if (common.format == "json") {
            Json j = trial_json(outcome);
            j["theory_lmin"] = theory;
            o << j.dump(2) << '\n';
          } else {
            write_trials_csv(o, {outcome}, theory);
          }
        } else {
          const auto t = empirical_threshold(sim_d, sim_n, sim_r, budget, sim_eps, trials, common.seed, target, opts);
          if (common.format == "json") {
            o << threshold_json(t, sim_eps).dump(2) << '\n';
          } else {
            write_trials_csv(o, t.outcomes, t.theory_l_min);
          }
        }
      });
    } else if (generate->parsed()) {
      const NoiseBudget budget = parse_noise(gen_noise);
      const int l = gen_l < 0 ? gen_d : gen_l;
      if (l > gen_d) throw UsageError("--l exceeds --d");
      const auto pattern = l == gen_d ? SamplingPattern::full(gen_d, gen_n)
                                      : sample_uniform_pattern(gen_d, gen_n, l, mix_seed(common.seed, 1));
      Instance inst;
      try {
        inst = generate_instance(pattern, gen_r, budget, gen_planted, common.seed);
      } catch (const PreconditionError& e) {
        throw UsageError(e.what());
      }
      with_output(common, out, [&](std::ostream& o) { write_observations(o, inst.observations()); });
      if (!gen_meta.empty()) {
        std::ofstream meta(gen_meta);
        if (!meta) throw NoInput("cannot write " + gen_meta);
        meta << instance_metadata_json(inst).dump(2) << '\n';
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "malformed input: " << e.what() << '\n';
    return kDataError;
  } catch (const NoInput& e) {
    err << "error: " << e.what() << '\n';
    return kNoInput;
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return exit_code;
}

}  // namespace rmc::cli
