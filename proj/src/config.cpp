#include "dpg/config.hpp"

#include "dpg/io.hpp"

#include <Eigen/QR>

#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>

namespace dpg {

namespace {

std::string format_bool(bool b) { return b ? "true" : "false"; }

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

std::uint64_t parse_seed(const std::string& s) {
  const long long v = parse_integer(s);
  if (v < 0) throw std::invalid_argument("seed must be >= 0");
  return static_cast<std::uint64_t>(v);
}

std::size_t parse_count(const std::string& s) {
  const long long v = parse_integer(s);
  if (v < 0) throw std::invalid_argument("count must be >= 0");
  return static_cast<std::size_t>(v);
}

int parse_int(const std::string& s) {
  const long long v = parse_integer(s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw std::invalid_argument("integer out of range");
  return static_cast<int>(v);
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    out.push_back(parse_double(trim(s.substr(start, comma - start))));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Field {
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

#define DPG_STRING(KEY, MEMBER)                                            \
  Field {                                                                  \
    KEY, [](const ExperimentConfig& c) { return c.MEMBER; },               \
        [](ExperimentConfig& c, const std::string& s) { c.MEMBER = s; }    \
  }
#define DPG_DOUBLE(KEY, MEMBER)                                                     \
  Field {                                                                           \
    KEY, [](const ExperimentConfig& c) { return format_double(c.MEMBER); },         \
        [](ExperimentConfig& c, const std::string& s) { c.MEMBER = parse_double(s); } \
  }
#define DPG_PARSED(KEY, MEMBER, FORMAT, PARSE)                                 \
  Field {                                                                      \
    KEY, [](const ExperimentConfig& c) { return FORMAT(c.MEMBER); },           \
        [](ExperimentConfig& c, const std::string& s) { c.MEMBER = PARSE(s); } \
  }

std::string format_int(long long v) { return std::to_string(v); }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      DPG_STRING("problem.kind", problem.kind),
      DPG_PARSED("problem.seed", problem.seed, format_int, parse_seed),
      DPG_STRING("problem.reg_split", problem.reg_split),
      DPG_PARSED("problem.dim", problem.dim, format_int, parse_int),
      DPG_STRING("problem.q_kind", problem.q_kind),
      DPG_PARSED("problem.q_diag", problem.q_diag, format_list, parse_list),
      DPG_DOUBLE("problem.q_min", problem.q_min),
      DPG_DOUBLE("problem.q_max", problem.q_max),
      DPG_DOUBLE("problem.c_scale", problem.c_scale),
      DPG_STRING("data.path", data.path),
      DPG_PARSED("data.subsample", data.subsample, format_int, parse_count),
      DPG_PARSED("data.n_override", data.n_override, format_int, parse_int),
      DPG_STRING("reg.kind", reg.kind),
      DPG_DOUBLE("reg.lambda1", reg.lambda1),
      DPG_DOUBLE("reg.lambda2", reg.lambda2),
      DPG_DOUBLE("reg.lo", reg.lo),
      DPG_DOUBLE("reg.hi", reg.hi),
      DPG_STRING("graph.kind", graph.kind),
      DPG_PARSED("graph.m", graph.m, format_int, parse_int),
      DPG_STRING("graph.topology", graph.topology),
      DPG_DOUBLE("graph.eta", graph.eta),
      DPG_PARSED("graph.B", graph.B, format_int, parse_int),
      DPG_PARSED("graph.period", graph.period, format_int, parse_int),
      DPG_PARSED("graph.seed", graph.seed, format_int, parse_seed),
      DPG_DOUBLE("graph.edge_prob", graph.edge_prob),
      DPG_STRING("graph.file", graph.file),
      DPG_PARSED("graph.cyclic", graph.cyclic, format_bool, parse_bool),
      Field{"algo.alpha",
            [](const ExperimentConfig& c) { return c.algo.alpha ? format_double(*c.algo.alpha) : std::string("auto"); },
            [](ExperimentConfig& c, const std::string& s) {
              if (s == "auto")
                c.algo.alpha.reset();
              else
                c.algo.alpha = parse_double(s);
            }},
      DPG_DOUBLE("algo.safety", algo.safety),
      DPG_PARSED("algo.max_iter", algo.max_iter, format_int, parse_count),
      DPG_DOUBLE("algo.tol", algo.tol),
      DPG_STRING("algo.init", algo.init),
      DPG_DOUBLE("algo.init_scale", algo.init_scale),
      DPG_PARSED("algo.seed", algo.seed, format_int, parse_seed),
      DPG_DOUBLE("algo.radius", algo.radius),
      DPG_STRING("algo.consensus", algo.consensus),
      DPG_STRING("output.trace", output.trace),
      DPG_STRING("output.summary", output.summary),
      DPG_PARSED("output.snapshot_every", output.snapshot_every, format_int, parse_count),
  };
  return table;
}

#undef DPG_STRING
#undef DPG_DOUBLE
#undef DPG_PARSED

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_one_of(const std::string& key, const std::string& value, std::initializer_list<const char*> allowed) {
  std::string list;
  for (const char* a : allowed) {
    if (value == a) return;
    if (!list.empty()) list += ", ";
    list += a;
  }
  throw ConfigError(key + " = '" + value + "' is not one of: " + list);
}

Matrix random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  std::map<std::string, const Field*> index;
  for (const Field& f : fields()) index[f.key] = &f;

  ExperimentConfig config;
  std::set<std::string> seen;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = std::string(trim(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(number, "expected 'key = value'");
    const std::string key = std::string(trim(line.substr(0, eq)));
    const std::string value = std::string(trim(line.substr(eq + 1)));
    const auto it = index.find(key);
    if (it == index.end()) throw ParseError(number, "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ParseError(number, "duplicate key '" + key + "'");
    try {
      it->second->set(config, value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(number, key + ": " + e.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ExperimentConfig config;
  try {
    config = parse_config(in);
  } catch (const ParseError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  for (const std::string& file : {config.data.path, config.graph.file})
    if (!file.empty() && !std::filesystem::exists(file))
      throw ConfigError(path + ": referenced file '" + file + "' does not exist");
  return config;
}

void dump_config(std::ostream& out, const ExperimentConfig& config) {
  for (const Field& f : fields()) out << f.key << " = " << f.get(config) << '\n';
}

void check_config(const ExperimentConfig& c) {
  require_one_of("problem.kind", c.problem.kind, {"sigmoid", "quadratic"});
  require_one_of("problem.reg_split", c.problem.reg_split, {"h", "g"});
  require_one_of("problem.q_kind", c.problem.q_kind, {"identity", "diagonal", "random"});
  require(c.problem.dim >= 1, "problem.dim must be >= 1");
  require(c.problem.q_min >= 0.0 && c.problem.q_min <= c.problem.q_max, "need 0 <= problem.q_min <= problem.q_max");
  for (double d : c.problem.q_diag) require(d >= 0.0, "problem.q_diag entries must be >= 0");
  require(c.data.n_override >= 0, "data.n_override must be >= 0");
  if (c.problem.kind == "sigmoid") require(!c.data.path.empty(), "problem.kind = sigmoid needs data.path");

  try {
    parse_regularizer_kind(c.reg.kind);
  } catch (const std::exception&) {
    throw ConfigError("reg.kind = '" + c.reg.kind + "' is not one of: zero, l1, squared-l2, elastic-net, box");
  }
  require(c.reg.lambda1 >= 0.0 && c.reg.lambda2 >= 0.0, "reg.lambda1 and reg.lambda2 must be >= 0");
  require(c.reg.lo <= c.reg.hi, "reg.lo must not exceed reg.hi");

  require_one_of("graph.kind", c.graph.kind, {"static", "periodic", "random", "file"});
  require(c.graph.m >= 1, "graph.m must be >= 1");
  require(c.graph.B >= 1, "graph.B must be >= 1");
  require(c.graph.eta >= 0.0 && c.graph.eta <= 1.0, "graph.eta must lie in [0, 1]");
  require(c.graph.edge_prob >= 0.0 && c.graph.edge_prob <= 1.0, "graph.edge_prob must lie in [0, 1]");
  if (c.graph.kind == "static")
    require_one_of("graph.topology", c.graph.topology, {"complete", "path", "ring", "star", "empty"});
  if (c.graph.kind == "periodic") {
    require_one_of("graph.topology", c.graph.topology, {"alternating-path", "random"});
    if (c.graph.topology == "random") {
      require(c.graph.period >= 1, "graph.period must be >= 1");
      require(c.graph.period % c.graph.B == 0, "graph.period must be a multiple of graph.B");
    }
  }
  if (c.graph.kind == "file") require(!c.graph.file.empty(), "graph.kind = file needs graph.file");

  if (c.algo.alpha) require(*c.algo.alpha > 0.0, "algo.alpha must be > 0");
  require(c.algo.safety > 0.0 && c.algo.safety < 1.0, "algo.safety must lie in (0, 1)");
  require(c.algo.max_iter >= 1, "algo.max_iter must be >= 1");
  require(c.algo.tol >= 0.0, "algo.tol must be >= 0");
  require_one_of("algo.init", c.algo.init, {"zeros", "gaussian"});
  require(c.algo.init_scale >= 0.0, "algo.init_scale must be >= 0");
  require(c.algo.radius >= 0.0, "algo.radius must be >= 0");
  require_one_of("algo.consensus", c.algo.consensus, {"matrix", "gossip"});
}

GraphSchedule build_schedule(const GraphBlock& g) {
  GraphSchedule schedule = GraphSchedule::constant(AdjacencyMatrix(Matrix::Identity(1, 1)));
  if (g.kind == "static") {
    std::vector<Edge> edges;
    if (g.topology == "complete") edges = complete_edges(g.m);
    if (g.topology == "path") edges = path_edges(g.m);
    if (g.topology == "ring") edges = ring_edges(g.m);
    if (g.topology == "star") edges = star_edges(g.m);
    schedule = GraphSchedule::constant(metropolis_weights(edges, g.m), g.B);
  } else if (g.kind == "periodic" && g.topology == "alternating-path") {
    schedule = GraphSchedule::periodic(alternating_path_slots(g.m), g.B, true);
  } else if (g.kind == "periodic") {
    const GraphSchedule source = GraphSchedule::random_b_connected(g.m, g.B, g.seed, g.edge_prob);
    std::vector<AdjacencyMatrix> slots;
    for (int t = 0; t < g.period; ++t) slots.push_back(source.at(static_cast<std::size_t>(t)));
    schedule = GraphSchedule::periodic(std::move(slots), g.B, true);
  } else if (g.kind == "random") {
    schedule = GraphSchedule::random_b_connected(g.m, g.B, g.seed, g.edge_prob);
  } else {
    std::ifstream in(g.file);
    if (!in) throw ConfigError("cannot open graph file '" + g.file + "'");
    std::vector<AdjacencyMatrix> slots;
    try {
      slots = read_matrices(in);
    } catch (const ParseError& e) {
      throw ConfigError(g.file + ": " + e.what());
    }
    if (slots.empty()) throw ConfigError("graph file '" + g.file + "' holds no matrices");
    if (slots.front().size() != g.m)
      throw ConfigError("graph file '" + g.file + "' has " + std::to_string(slots.front().size()) +
                        " agents, graph.m = " + std::to_string(g.m));
    schedule = GraphSchedule::periodic(std::move(slots), g.B, g.cyclic, kUserStochasticTol);
  }
  if (g.eta > 0.0) schedule = schedule.with_eta(g.eta);
  return schedule;
}

Regularizer build_regularizer(const ExperimentConfig& c, int dim) {
  const double l2_in_h = c.problem.reg_split == "h" ? c.reg.lambda2 : 0.0;
  switch (parse_regularizer_kind(c.reg.kind)) {
    case RegularizerKind::zero: return Regularizer::zero(dim);
    case RegularizerKind::l1: return Regularizer::l1(dim, c.reg.lambda1);
    case RegularizerKind::squared_l2: return Regularizer::squared_l2(dim, l2_in_h);
    case RegularizerKind::elastic_net: return Regularizer::elastic_net(dim, c.reg.lambda1, l2_in_h);
    case RegularizerKind::box: return Regularizer::box(dim, c.reg.lo, c.reg.hi);
  }
  return Regularizer::zero(dim);
}

Objectives build_objectives(const ExperimentConfig& c, std::size_t* samples, std::size_t* source_samples) {
  const int m = c.graph.m;
  Objectives objectives;
  if (c.problem.kind == "sigmoid") {
    Dataset data;
    try {
      data = load_libsvm(c.data.path, c.data.n_override > 0 ? std::optional<int>(c.data.n_override) : std::nullopt);
    } catch (const ParseError& e) {
      throw ConfigError(c.data.path + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw ConfigError(e.what());
    }
    if (source_samples) *source_samples = data.size();
    if (c.data.subsample > 0 && c.data.subsample < data.size()) data = subsample(data, c.data.subsample, c.problem.seed);
    if (samples) *samples = data.size();
    if (static_cast<std::size_t>(m) > data.size())
      throw ConfigError("graph.m = " + std::to_string(m) + " exceeds the " + std::to_string(data.size()) + " samples");
    // Ridge term carried by g: lambda2 ||x||^2 has gradient 2 lambda2 x.
    const bool ridge_in_g = c.problem.reg_split == "g" &&
                            (c.reg.kind == "squared-l2" || c.reg.kind == "l2" || c.reg.kind == "elastic-net");
    for (Dataset& part : shard(data, m, c.problem.seed))
      objectives.push_back(std::make_shared<SigmoidLoss>(std::move(part), ridge_in_g ? c.reg.lambda2 : 0.0));
    return objectives;
  }

  const int n = c.problem.q_diag.empty() ? c.problem.dim : static_cast<int>(c.problem.q_diag.size());
  std::mt19937_64 rng(c.problem.seed);
  std::uniform_real_distribution<double> curvature(c.problem.q_min, c.problem.q_max);
  std::normal_distribution<double> normal;
  for (int i = 0; i < m; ++i) {
    Matrix Q = Matrix::Identity(n, n);
    if (!c.problem.q_diag.empty()) {
      for (int j = 0; j < n; ++j) Q(j, j) = c.problem.q_diag[j];
    } else if (c.problem.q_kind == "diagonal") {
      for (int j = 0; j < n; ++j) Q(j, j) = curvature(rng);
    } else if (c.problem.q_kind == "random") {
      const Matrix U = random_orthogonal(n, rng);
      Vector d(n);
      for (int j = 0; j < n; ++j) d[j] = curvature(rng);
      Q = U * d.asDiagonal() * U.transpose();
      Q = 0.5 * (Q + Q.transpose());
    }
    Vector center(n);
    for (int j = 0; j < n; ++j) center[j] = c.problem.c_scale * normal(rng);
    objectives.push_back(std::make_shared<Quadratic>(std::move(Q), std::move(center)));
  }
  if (samples) *samples = 0;
  if (source_samples) *source_samples = 0;
  return objectives;
}

Experiment build_experiment(const ExperimentConfig& c) {
  check_config(c);
  Experiment ex;
  ex.problem.objectives = build_objectives(c, &ex.samples, &ex.source_samples);
  const int n = ex.problem.objectives.front()->dim();
  ex.problem.regularizer = build_regularizer(c, n);
  ex.problem.schedule = build_schedule(c.graph);

  const double L = global_lipschitz(ex.problem.objectives);
  if (c.algo.alpha) {
    check_step(*c.algo.alpha, L);
    ex.options.alpha = *c.algo.alpha;
  } else {
    ex.options.alpha = L > 0.0 ? auto_step(L, c.algo.safety) : 1.0;
  }
  ex.options.max_iter = c.algo.max_iter;
  ex.options.tol = c.algo.tol;
  ex.options.snapshot_every = c.output.snapshot_every;
  ex.options.consensus = c.algo.consensus == "gossip" ? ConsensusMode::gossip : ConsensusMode::matrix;
  ex.options.radius = c.algo.radius;
  ex.options.initial = initial_points(c.graph.m, n, c.algo.init == "gaussian" ? InitKind::gaussian : InitKind::zeros,
                                      c.algo.init_scale, c.algo.seed);
  return ex;
}

}  // namespace dpg
