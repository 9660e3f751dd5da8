#pragma once

// The quadratic fixture shared by the tests and the acceptance suite:
// 10 agents, 5 dimensions, random positive definite Q_i, l1 weight 0.1, and
// two alternating matchings whose union is a path (B = 2).

#include "dpg/config.hpp"

namespace dpg::fixtures {

inline ExperimentConfig fixture_config(std::size_t iterations = 200) {
  ExperimentConfig c;
  c.problem.kind = "quadratic";
  c.problem.seed = 7;
  c.problem.dim = 5;
  c.problem.q_kind = "random";
  c.problem.q_min = 0.5;
  c.problem.q_max = 2.0;
  c.reg.kind = "l1";
  c.reg.lambda1 = 0.1;
  c.graph.kind = "periodic";
  c.graph.topology = "alternating-path";
  c.graph.m = 10;
  c.graph.B = 2;
  c.algo.max_iter = iterations;
  c.algo.init = "gaussian";
  c.algo.seed = 3;
  c.output.snapshot_every = 1;
  return c;
}

inline Experiment fixture(std::size_t iterations = 200) { return build_experiment(fixture_config(iterations)); }

}  // namespace dpg::fixtures
