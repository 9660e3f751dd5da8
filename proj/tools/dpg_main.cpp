// dpg: run and check distributed proximal gradient experiments.
//
//   dpg run --config cfg.txt [--output trace.csv] [--seed N] [--max-iter N] [--alpha X]
//   dpg validate-graph --config cfg.txt [--horizon N]
//   dpg prox-check --kind elastic-net [--trials 1000] [--seed 1]
//   dpg lipschitz --config cfg.txt

#include "dpg/algorithm.hpp"
#include "dpg/config.hpp"
#include "dpg/io.hpp"
#include "dpg/oracle.hpp"
#include "dpg/simulator.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum Exit { kOk = 0, kFail = 1, kConfig = 2, kStep = 3, kNumerical = 4 };

struct Overrides {
  std::string config;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_iter;
  std::optional<double> alpha;
};

dpg::ExperimentConfig load(const Overrides& o) {
  dpg::ExperimentConfig c = o.config.empty() ? dpg::ExperimentConfig{} : dpg::load_config(o.config);
  if (o.seed) c.problem.seed = c.graph.seed = c.algo.seed = *o.seed;
  if (o.max_iter) c.algo.max_iter = *o.max_iter;
  if (o.alpha) c.algo.alpha = *o.alpha;
  if (!o.output.empty()) c.output.trace = o.output;
  return c;
}

std::filesystem::path output_path(const std::string& path) {
  std::filesystem::path p(path);
  if (const char* dir = std::getenv("OUTPUT_DIR"); dir && *dir && p.is_relative()) p = std::filesystem::path(dir) / p;
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dpg::ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

int cmd_run(const Overrides& o) {
  const dpg::ExperimentConfig config = load(o);
  const auto start = std::chrono::steady_clock::now();
  const dpg::Experiment ex = dpg::build_experiment(config);
  const dpg::RunTrace trace = dpg::run(ex.problem, ex.options);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ostringstream csv;
  dpg::write_trace_csv(csv, trace);
  const auto trace_path = output_path(config.output.trace);
  write_file(trace_path, csv.str());

  const dpg::IterationMetrics& first = trace.rows.size() > 1 ? trace.rows[1].metrics : trace.last();
  const dpg::IterationMetrics& last = trace.last();
  std::ostringstream s;
  s << "trace = " << trace_path.string() << '\n'
    << "iterations = " << trace.iterations() << '\n'
    << "stopped_early = " << (trace.stopped_early ? "true" : "false") << '\n'
    << "agents = " << trace.agents << '\n'
    << "dim = " << trace.dim << '\n'
    << "alpha = " << dpg::format_double(trace.alpha) << '\n'
    << "lipschitz = " << dpg::format_double(trace.lipschitz) << '\n'
    << "D_first = " << dpg::format_double(first.D) << '\n'
    << "D_final = " << dpg::format_double(last.D) << '\n'
    << "residual_bound_first = " << dpg::format_double(first.residual_bound) << '\n'
    << "residual_bound_final = " << dpg::format_double(last.residual_bound) << '\n'
    << "residual_partial = " << (last.residual_partial ? "true" : "false") << '\n'
    << "f_final = " << dpg::format_double(last.f_avg) << '\n'
    << "comm_steps_total = " << last.comm_cumulative << '\n'
    << "messages_total = " << last.messages_cumulative << '\n'
    << "wall_time_s = " << dpg::format_double(wall) << '\n';
  if (config.problem.kind == "sigmoid")
    s << "data_path = " << config.data.path << '\n'
      << "data_samples_source = " << ex.source_samples << '\n'
      << "data_samples_used = " << ex.samples << '\n'
      << "data_subsample_seed = " << config.problem.seed << '\n';
  if (config.output.snapshot_every == 1) s << dpg::replay_check(trace, ex.problem.schedule).summary() << '\n';

  std::cout << s.str();
  if (!config.output.summary.empty()) write_file(output_path(config.output.summary), s.str());
  return kOk;
}

int cmd_validate_graph(const Overrides& o, std::optional<std::size_t> horizon) {
  const dpg::ExperimentConfig config = load(o);
  dpg::check_config(config);
  const dpg::GraphSchedule schedule = dpg::build_schedule(config.graph);
  const std::size_t h = horizon.value_or(
      std::max(dpg::cumulative_slots(config.algo.max_iter), static_cast<std::size_t>(schedule.interval())));
  if (h < static_cast<std::size_t>(schedule.interval()))
    throw dpg::ConfigError("horizon must be at least B = " + std::to_string(schedule.interval()));
  const dpg::ValidationReport report = dpg::validate_schedule(schedule, h);
  std::cout << report.summary() << '\n';
  return report.valid() ? kOk : kFail;
}

int cmd_prox_check(const std::string& kind, int trials, std::uint64_t seed) {
  dpg::RegularizerKind k;
  try {
    k = dpg::parse_regularizer_kind(kind);
  } catch (const std::exception& e) {
    throw dpg::ConfigError(e.what());
  }
  const auto start = std::chrono::steady_clock::now();
  const dpg::oracle::ProxCheckResult r = dpg::oracle::compare_prox(k, trials, seed);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool pass = r.max_deviation < 1e-6;
  std::cout << "kind = " << dpg::to_string(k) << '\n'
            << "trials = " << r.trials << '\n'
            << "max_deviation = " << dpg::format_double(r.max_deviation) << '\n'
            << "wall_time_s = " << dpg::format_double(wall) << '\n'
            << "result = " << (pass ? "pass" : "FAIL") << '\n';
  return pass ? kOk : kFail;
}

int cmd_lipschitz(const Overrides& o) {
  const dpg::ExperimentConfig config = load(o);
  dpg::check_config(config);
  const dpg::Objectives objectives = dpg::build_objectives(config);
  for (std::size_t i = 0; i < objectives.size(); ++i)
    std::cout << "L_" << i << " = " << dpg::format_double(objectives[i]->lipschitz_bound()) << '\n';
  const double L = dpg::global_lipschitz(objectives);
  std::cout << "L = " << dpg::format_double(L) << '\n';
  if (L > 0.0)
    std::cout << "alpha = " << dpg::format_double(dpg::auto_step(L, config.algo.safety)) << '\n';
  else
    std::cout << "alpha = any\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed proximal gradient over time-varying networks"};
  app.require_subcommand(1);

  Overrides o;
  auto add_common = [&o](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "Config file (flat dotted keys)");
    cmd->add_option("--output", o.output, "Trace CSV path");
    cmd->add_option("--seed", o.seed, "Overrides problem, graph and algorithm seeds");
    cmd->add_option("--max-iter", o.max_iter, "Iterations");
    cmd->add_option("--alpha", o.alpha, "Step size");
  };

  CLI::App* run = app.add_subcommand("run", "Run an experiment and write its trace");
  add_common(run);

  CLI::App* validate = app.add_subcommand("validate-graph", "Check the graph schedule over a horizon");
  add_common(validate);
  std::optional<std::size_t> horizon;
  validate->add_option("--horizon", horizon, "Slots to check (default: T(T+1)/2 for max_iter T)");

  CLI::App* prox = app.add_subcommand("prox-check", "Compare closed-form prox with the search oracle");
  std::string kind = "elastic-net";
  int trials = 1000;
  std::uint64_t prox_seed = 1;
  prox->add_option("--kind", kind, "zero, l1, squared-l2, elastic-net or box");
  prox->add_option("--trials", trials, "Random triples")->check(CLI::PositiveNumber);
  prox->add_option("--seed", prox_seed, "Seed");

  CLI::App* lipschitz = app.add_subcommand("lipschitz", "Print per-agent and global Lipschitz bounds");
  add_common(lipschitz);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(o);
    if (*validate) return cmd_validate_graph(o, horizon);
    if (*prox) return cmd_prox_check(kind, trials, prox_seed);
    if (*lipschitz) return cmd_lipschitz(o);
  } catch (const dpg::StepSizeError& e) {
    std::cerr << "step size error: " << e.what() << '\n';
    return kStep;
  } catch (const dpg::NumericalFault& e) {
    std::cerr << "numerical fault at iteration " << e.iteration() << ": " << e.what() << '\n';
    return kNumerical;
  } catch (const dpg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const dpg::ScheduleError& e) {
    std::cerr << "schedule error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kFail;
}
