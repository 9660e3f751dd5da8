#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One vector per agent, indexed by agent id.
using AgentVectors = std::vector<Vector>;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Step size violates alpha < 1/L.
class StepSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A non-finite value appeared in an agent's state.
class NumericalFault : public std::runtime_error {
 public:
  NumericalFault(int agent, long iteration, const std::string& what)
      : std::runtime_error(what + " (agent " + std::to_string(agent) + ", iteration " +
                           std::to_string(iteration) + ")"),
        agent_(agent),
        iteration_(iteration) {}

  int agent() const noexcept { return agent_; }
  long iteration() const noexcept { return iteration_; }

 private:
  int agent_;
  long iteration_;
};

/// A finite slot list was asked for a slot past its end.
class ScheduleExhausted : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace dpg
