#pragma once

// Experiment configuration: flat "dotted.key = value" text.
//
//   # comment
//   problem.kind = sigmoid
//   data.path    = data/a9a
//   graph.m      = 10
//
// Unknown keys are errors. Every key has a default, so an empty file is a
// valid (quadratic) configuration.

#include "dpg/algorithm.hpp"
#include "dpg/dataset.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dpg {

struct ProblemBlock {
  std::string kind = "quadratic";     // sigmoid | quadratic
  std::uint64_t seed = 1;             // subsampling, sharding and fixture draws
  std::string reg_split = "h";        // h: l2 term in h; g: l2 term in each g_i
  // quadratic fixtures
  int dim = 5;
  std::string q_kind = "identity";    // identity | diagonal | random
  std::vector<double> q_diag;         // explicit diagonal shared by all agents
  double q_min = 0.5;
  double q_max = 2.0;
  double c_scale = 1.0;

  friend bool operator==(const ProblemBlock&, const ProblemBlock&) = default;
};

struct DataBlock {
  std::string path;
  std::size_t subsample = 0;  // 0 keeps every sample
  int n_override = 0;         // 0 uses the largest index

  friend bool operator==(const DataBlock&, const DataBlock&) = default;
};

struct RegBlock {
  std::string kind = "elastic-net";
  double lambda1 = 5e-4;
  double lambda2 = 5e-4;
  double lo = -1.0;
  double hi = 1.0;

  friend bool operator==(const RegBlock&, const RegBlock&) = default;
};

struct GraphBlock {
  std::string kind = "static";        // static | periodic | random | file
  int m = 10;
  std::string topology = "complete";  // static: complete|path|ring|star|empty; periodic: alternating-path|random
  double eta = 0.0;                   // 0 uses the realized floor
  int B = 1;
  int period = 2;
  std::uint64_t seed = 1;
  double edge_prob = 0.3;
  std::string file;
  bool cyclic = true;

  friend bool operator==(const GraphBlock&, const GraphBlock&) = default;
};

struct AlgoBlock {
  std::optional<double> alpha;  // empty = auto
  double safety = 0.9;
  std::size_t max_iter = 100;
  double tol = 0.0;
  std::string init = "zeros";   // zeros | gaussian
  double init_scale = 1.0;
  std::uint64_t seed = 1;
  double radius = 0.0;
  std::string consensus = "matrix";  // matrix | gossip

  friend bool operator==(const AlgoBlock&, const AlgoBlock&) = default;
};

struct OutputBlock {
  std::string trace = "trace.csv";
  std::string summary;
  std::size_t snapshot_every = 0;

  friend bool operator==(const OutputBlock&, const OutputBlock&) = default;
};

struct ExperimentConfig {
  ProblemBlock problem;
  DataBlock data;
  RegBlock reg;
  GraphBlock graph;
  AlgoBlock algo;
  OutputBlock output;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigError (or ParseError with a line number).
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Every key, one per line, in a fixed order; parse_config reads it back.
void dump_config(std::ostream& out, const ExperimentConfig& config);

/// Structural checks that need no files: ranges and enumerations.
void check_config(const ExperimentConfig& config);

/// Everything a run needs, built from a config.
struct Experiment {
  Problem problem;
  RunOptions options;
  std::size_t samples = 0;       // after subsampling; 0 for quadratic problems
  std::size_t source_samples = 0;
};

/// Reads data files, shards, builds the schedule and the step size. Throws
/// ConfigError for problems with the config itself and StepSizeError when an
/// explicit alpha violates alpha < 1/L.
Experiment build_experiment(const ExperimentConfig& config);

/// Just the schedule part of build_experiment.
GraphSchedule build_schedule(const GraphBlock& graph);

/// Just the objectives (one per agent).
Objectives build_objectives(const ExperimentConfig& config, std::size_t* samples = nullptr,
                            std::size_t* source_samples = nullptr);

Regularizer build_regularizer(const ExperimentConfig& config, int dim);

}  // namespace dpg
