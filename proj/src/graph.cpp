#include "dpg/graph.hpp"

#include "dpg/io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace dpg {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) { return rng() % bound; }

std::mt19937_64 slot_rng(std::uint64_t seed, std::size_t t) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(static_cast<std::uint64_t>(t) >> 32)};
  return std::mt19937_64(seq);
}

std::vector<Edge> random_spanning_tree(int m, std::mt19937_64& rng) {
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < order.size(); ++i) {
    int parent = order[uniform_index(rng, i)];
    edges.push_back({std::min(parent, order[i]), std::max(parent, order[i])});
  }
  return edges;
}

std::vector<Edge> random_edge_subset(int m, double prob, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (unit_uniform(rng) < prob) edges.push_back({i, j});
  return edges;
}

}  // namespace

// ---------------------------------------------------------------------------
// AdjacencyMatrix

AdjacencyMatrix::AdjacencyMatrix(Matrix w) : w_(std::move(w)) {
  if (w_.rows() != w_.cols()) throw std::invalid_argument("adjacency matrix must be square");
}

std::vector<Edge> AdjacencyMatrix::edges() const {
  std::vector<Edge> out;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (w_(i, j) > 0.0 || w_(j, i) > 0.0) out.push_back({i, j});
  return out;
}

double AdjacencyMatrix::min_positive() const {
  double lo = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < w_.size(); ++i)
    if (w_.data()[i] > 0.0) lo = std::min(lo, w_.data()[i]);
  return lo;
}

bool AdjacencyMatrix::is_symmetric(double tol) const {
  return (w_ - w_.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool AdjacencyMatrix::is_nonnegative() const { return size() == 0 || w_.minCoeff() >= 0.0; }

double AdjacencyMatrix::stochastic_defect() const {
  if (size() == 0) return 0.0;
  double rows = (w_.rowwise().sum().array() - 1.0).abs().maxCoeff();
  double cols = (w_.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

bool AdjacencyMatrix::satisfies_floor(double eta, double tol) const {
  for (int i = 0; i < size(); ++i) {
    if (w_(i, i) < eta - tol) return false;
    for (int j = 0; j < size(); ++j)
      if (i != j && w_(i, j) > 0.0 && w_(i, j) < eta - tol) return false;
  }
  return true;
}

AdjacencyMatrix metropolis_weights(std::span<const Edge> edges, int m) {
  if (m < 1) throw std::invalid_argument("metropolis_weights: agent count must be >= 1");
  std::set<std::pair<int, int>> seen;
  std::vector<int> degree(static_cast<std::size_t>(m), 0);
  for (const Edge& e : edges) {
    if (e.a == e.b) throw std::invalid_argument("metropolis_weights: self-loop on agent " + std::to_string(e.a));
    if (e.a < 0 || e.b < 0 || e.a >= m || e.b >= m)
      throw std::invalid_argument("metropolis_weights: edge endpoint out of range");
    auto key = std::minmax(e.a, e.b);
    if (!seen.insert(key).second)
      throw std::invalid_argument("metropolis_weights: duplicate edge {" + std::to_string(key.first) + ", " +
                                  std::to_string(key.second) + "}");
    ++degree[e.a];
    ++degree[e.b];
  }
  Matrix w = Matrix::Zero(m, m);
  for (const Edge& e : edges) {
    double weight = 1.0 / (1.0 + std::max(degree[e.a], degree[e.b]));
    w(e.a, e.b) = weight;
    w(e.b, e.a) = weight;
  }
  for (int i = 0; i < m; ++i) {
    double off = 0.0;
    for (int j = 0; j < m; ++j)
      if (j != i) off += w(i, j);
    w(i, i) = 1.0 - off;
  }
  return AdjacencyMatrix(std::move(w));
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::static_graph:
      return "static";
    case ScheduleKind::periodic_list:
      return "periodic";
    case ScheduleKind::random_b_connected:
      return "random";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// GraphSchedule

struct GraphSchedule::Impl {
  ScheduleKind kind = ScheduleKind::static_graph;
  int m = 0;
  int B = 1;
  double eta = 0.0;
  double tolerance = kGeneratedStochasticTol;
  std::vector<AdjacencyMatrix> slots;
  bool cyclic = true;
  std::uint64_t seed = 0;
  double edge_prob = 0.0;
};

namespace {

double list_floor(const std::vector<AdjacencyMatrix>& slots) {
  double eta = 1.0;
  for (const auto& a : slots) eta = std::min(eta, a.min_positive());
  return eta;
}

}  // namespace

GraphSchedule GraphSchedule::constant(AdjacencyMatrix a, int B) {
  if (B < 1) throw std::invalid_argument("GraphSchedule: B must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = ScheduleKind::static_graph;
  impl->m = a.size();
  impl->B = B;
  impl->slots.push_back(std::move(a));
  impl->eta = list_floor(impl->slots);
  return GraphSchedule(std::move(impl));
}

GraphSchedule GraphSchedule::periodic(std::vector<AdjacencyMatrix> slots, int B, bool cyclic, double tolerance) {
  if (slots.empty()) throw std::invalid_argument("GraphSchedule: empty slot list");
  if (B < 1) throw std::invalid_argument("GraphSchedule: B must be >= 1");
  for (const auto& a : slots)
    if (a.size() != slots.front().size()) throw std::invalid_argument("GraphSchedule: slot sizes differ");
  auto impl = std::make_shared<Impl>();
  impl->kind = ScheduleKind::periodic_list;
  impl->m = slots.front().size();
  impl->B = B;
  impl->cyclic = cyclic;
  impl->tolerance = tolerance;
  impl->slots = std::move(slots);
  impl->eta = list_floor(impl->slots);
  return GraphSchedule(std::move(impl));
}

GraphSchedule GraphSchedule::random_b_connected(int m, int B, std::uint64_t seed, double edge_prob) {
  if (m < 1) throw std::invalid_argument("GraphSchedule: agent count must be >= 1");
  if (B < 1) throw std::invalid_argument("GraphSchedule: B must be >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw std::invalid_argument("GraphSchedule: edge_prob outside [0, 1]");
  auto impl = std::make_shared<Impl>();
  impl->kind = ScheduleKind::random_b_connected;
  impl->m = m;
  impl->B = B;
  impl->seed = seed;
  impl->edge_prob = edge_prob;
  // Metropolis entries are >= 1/(1 + max degree) >= 1/m, diagonal included.
  impl->eta = 1.0 / m;
  return GraphSchedule(std::move(impl));
}

AdjacencyMatrix GraphSchedule::at(std::size_t t) const {
  const Impl& s = *impl_;
  switch (s.kind) {
    case ScheduleKind::static_graph:
      return s.slots.front();
    case ScheduleKind::periodic_list:
      if (!s.cyclic && t >= s.slots.size())
        throw ScheduleExhausted("schedule has " + std::to_string(s.slots.size()) + " slots, slot " +
                                std::to_string(t) + " requested");
      return s.slots[t % s.slots.size()];
    case ScheduleKind::random_b_connected: {
      auto rng = slot_rng(s.seed, t);
      auto edges = (t % static_cast<std::size_t>(s.B) == 0) ? random_spanning_tree(s.m, rng)
                                                             : random_edge_subset(s.m, s.edge_prob, rng);
      return metropolis_weights(edges, s.m);
    }
  }
  throw std::logic_error("GraphSchedule: unknown kind");
}

int GraphSchedule::agents() const noexcept { return impl_->m; }
int GraphSchedule::interval() const noexcept { return impl_->B; }
double GraphSchedule::eta() const noexcept { return impl_->eta; }
ScheduleKind GraphSchedule::kind() const noexcept { return impl_->kind; }
double GraphSchedule::tolerance() const noexcept { return impl_->tolerance; }

std::size_t GraphSchedule::length() const noexcept {
  return (impl_->kind == ScheduleKind::periodic_list && !impl_->cyclic) ? impl_->slots.size() : 0;
}

std::size_t GraphSchedule::period() const noexcept {
  return impl_->kind == ScheduleKind::random_b_connected ? 0 : impl_->slots.size();
}

GraphSchedule GraphSchedule::with_eta(double eta) const {
  auto copy = std::make_shared<Impl>(*impl_);
  copy->eta = eta;
  return GraphSchedule(std::move(copy));
}

// ---------------------------------------------------------------------------
// Validation

std::string ValidationReport::summary() const {
  std::ostringstream out;
  out << "horizon=" << horizon << " B=" << interval << " eta=" << format_double(eta) << '\n';
  out << "double-stochastic: " << (stochasticity_failures.empty() ? "pass" : "FAIL") << " ("
      << stochasticity_failures.size() << " bad slots)\n";
  out << "eta floor:         " << (eta_failures.empty() ? "pass" : "FAIL") << " (" << eta_failures.size()
      << " bad slots)\n";
  out << "B-connectivity:    " << (disconnected_windows.empty() ? "pass" : "FAIL") << " ("
      << disconnected_windows.size() << " disconnected windows)\n";
  if (exhausted) out << "schedule exhausted before the horizon\n";
  out << "verdict: " << (valid() ? "valid" : "invalid") << '\n';
  return out.str();
}

ValidationReport validate_schedule(const GraphSchedule& schedule, std::size_t horizon) {
  const int B = schedule.interval();
  if (horizon < static_cast<std::size_t>(B)) throw std::invalid_argument("validate_schedule: horizon must be >= B");
  ValidationReport report;
  report.horizon = horizon;
  report.interval = B;
  report.eta = schedule.eta();

  const int m = schedule.agents();
  const double tol = schedule.tolerance();
  std::size_t usable = horizon;
  if (schedule.length() != 0 && schedule.length() < horizon) {
    usable = schedule.length();
    report.exhausted = true;
  }

  std::vector<std::vector<Edge>> slot_edges;
  slot_edges.reserve(usable);
  for (std::size_t t = 0; t < usable; ++t) {
    AdjacencyMatrix a = schedule.at(t);
    if (!a.is_symmetric(tol) || !a.is_nonnegative() || a.stochastic_defect() > tol)
      report.stochasticity_failures.push_back(t);
    if (!a.satisfies_floor(schedule.eta(), tol)) report.eta_failures.push_back(t);
    slot_edges.push_back(a.edges());
  }

  for (std::size_t start = 0; start + static_cast<std::size_t>(B) <= usable; ++start) {
    DisjointSets sets(m);
    int components = m;
    for (std::size_t t = start; t < start + static_cast<std::size_t>(B); ++t)
      for (const Edge& e : slot_edges[t])
        if (sets.unite(e.a, e.b)) --components;
    if (components > 1) report.disconnected_windows.push_back(start);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Transition products

Matrix transition_matrix(const GraphSchedule& schedule, std::size_t t, std::size_t s) {
  if (t < s) throw std::invalid_argument("transition_matrix: requires t >= s");
  Matrix product = schedule.at(s).weights();
  for (std::size_t r = s + 1; r <= t; ++r) product = schedule.at(r).weights() * product;
  return product;
}

Matrix consensus_weights(const GraphSchedule& schedule, std::size_t k) {
  if (k < 1) throw std::invalid_argument("consensus_weights: iteration index must be >= 1");
  const std::size_t first = communication_offset(k);
  return transition_matrix(schedule, first + k - 1, first);
}

Matrix ConsensusWeightCache::operator()(std::size_t k) const {
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(k); it != cache_.end()) return it->second;
  }
  Matrix w = consensus_weights(schedule_, k);
  std::unique_lock lock(mutex_);
  return cache_.try_emplace(k, std::move(w)).first->second;
}

std::size_t ConsensusWeightCache::cached() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

double GeometricConstants::decay(std::size_t k) const {
  return std::exp(log_Gamma + static_cast<double>(k) * log_gamma);
}

GeometricConstants geometric_constants(int m, int B, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("geometric_constants: eta must lie in (0, 1)");
  if (B < 1) throw std::invalid_argument("geometric_constants: B must be >= 1");
  if (m < 2) throw std::invalid_argument("geometric_constants: needs at least two agents (B0 = 0)");
  GeometricConstants c;
  c.B0 = static_cast<long>(m - 1) * B;
  const double b0 = static_cast<double>(c.B0);
  const double floor_pow = std::pow(eta, b0);
  c.log_gamma = std::log1p(-floor_pow) / b0;
  c.gamma = std::exp(c.log_gamma);
  // log(1 + eta^-B0) = -B0 log(eta) + log(1 + eta^B0) stays finite when eta^-B0 overflows.
  c.log_Gamma = std::log(2.0) - b0 * std::log(eta) + std::log1p(floor_pow) - std::log1p(-floor_pow);
  c.Gamma = std::exp(c.log_Gamma);
  return c;
}

// ---------------------------------------------------------------------------
// Matrix files

std::vector<AdjacencyMatrix> read_matrices(std::istream& in) {
  std::vector<AdjacencyMatrix> out;
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 0;
  std::size_t block_start = 0;

  auto flush = [&] {
    if (rows.empty()) return;
    const std::size_t n = rows.size();
    Matrix w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n)
        throw ParseError(block_start + i, "matrix row has " + std::to_string(rows[i].size()) +
                                              " entries, expected " + std::to_string(n));
      for (std::size_t j = 0; j < n; ++j) w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    if (!out.empty() && out.front().size() != static_cast<int>(n))
      throw ParseError(block_start, "matrix size differs from the first block");
    out.emplace_back(std::move(w));
    rows.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    auto tokens = split_whitespace(trim(view));
    if (tokens.empty()) {
      // Comment-only lines do not end a block.
      if (trim(line).empty()) flush();
      continue;
    }
    if (rows.empty()) block_start = lineno;
    std::vector<double> row;
    for (auto tok : tokens) {
      try {
        row.push_back(parse_double(tok));
      } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  flush();
  return out;
}

void write_matrices(std::ostream& out, std::span<const AdjacencyMatrix> matrices) {
  bool first = true;
  for (const auto& a : matrices) {
    if (!first) out << '\n';
    first = false;
    for (int i = 0; i < a.size(); ++i) {
      for (int j = 0; j < a.size(); ++j) out << (j ? " " : "") << format_double(a(i, j));
      out << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Topologies

std::vector<Edge> complete_edges(int m) {
  std::vector<Edge> edges;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) edges.push_back({i, j});
  return edges;
}

std::vector<Edge> path_edges(int m) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < m; ++i) edges.push_back({i, i + 1});
  return edges;
}

std::vector<Edge> ring_edges(int m) {
  auto edges = path_edges(m);
  if (m > 2) edges.push_back({0, m - 1});
  return edges;
}

std::vector<Edge> star_edges(int m) {
  std::vector<Edge> edges;
  for (int i = 1; i < m; ++i) edges.push_back({0, i});
  return edges;
}

std::vector<AdjacencyMatrix> alternating_path_slots(int m) {
  std::vector<Edge> even, odd;
  for (int i = 0; i + 1 < m; ++i) (i % 2 == 0 ? even : odd).push_back({i, i + 1});
  return {metropolis_weights(even, m), metropolis_weights(odd, m)};
}

}  // namespace dpg
