#include "dpg/dataset.hpp"

#include "dpg/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace dpg {

namespace {

struct RawSample {
  Sample sample;
  double label = 0.0;
  std::size_t line = 0;
};

// Returns the label map for a binary label set, or nothing.
std::optional<std::map<double, int>> label_mapping(const std::map<double, std::size_t>& seen) {
  auto subset_of = [&](double lo, double hi) {
    return std::all_of(seen.begin(), seen.end(), [&](const auto& kv) { return kv.first == lo || kv.first == hi; });
  };
  if (subset_of(-1.0, 1.0)) return std::map<double, int>{{-1.0, -1}, {1.0, 1}};
  if (subset_of(0.0, 1.0)) return std::map<double, int>{{0.0, -1}, {1.0, 1}};
  if (subset_of(1.0, 2.0)) return std::map<double, int>{{1.0, -1}, {2.0, 1}};
  return std::nullopt;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::optional<int> dim_override) {
  std::vector<RawSample> raw;
  std::map<double, std::size_t> first_line_of_label;
  int max_index = 0;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    auto tokens = split_whitespace(trim(view));
    if (tokens.empty()) continue;

    RawSample rs;
    rs.line = lineno;
    try {
      rs.label = parse_double(tokens[0]);
    } catch (const std::invalid_argument&) {
      throw ParseError(lineno, "bad label '" + std::string(tokens[0]) + "'");
    }
    first_line_of_label.try_emplace(rs.label, lineno);

    int previous = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      auto tok = tokens[t];
      auto colon = tok.find(':');
      if (colon == std::string_view::npos) throw ParseError(lineno, "expected idx:val, got '" + std::string(tok) + "'");
      if (tok.substr(0, colon) == "qid") continue;
      long long idx = 0;
      double value = 0.0;
      try {
        idx = parse_integer(tok.substr(0, colon));
        value = parse_double(tok.substr(colon + 1));
      } catch (const std::invalid_argument&) {
        throw ParseError(lineno, "malformed feature '" + std::string(tok) + "'");
      }
      if (idx < 1 || idx > (1LL << 30)) throw ParseError(lineno, "feature index out of range: " + std::to_string(idx));
      if (idx <= previous) throw ParseError(lineno, "feature indices must be strictly increasing");
      previous = static_cast<int>(idx);
      rs.sample.features.push_back({previous - 1, value});
    }
    max_index = std::max(max_index, previous);
    raw.push_back(std::move(rs));
  }

  auto mapping = label_mapping(first_line_of_label);
  if (!mapping) {
    std::size_t where = 0;
    for (const auto& [label, at] : first_line_of_label) where = std::max(where, at);
    throw ParseError(where, "label set is not binary ({-1,+1}, {0,1} or {1,2})");
  }

  Dataset data;
  data.dim = max_index;
  if (dim_override) {
    if (*dim_override < max_index)
      throw ParseError(lineno, "dimension override " + std::to_string(*dim_override) + " below largest index " +
                                   std::to_string(max_index));
    data.dim = *dim_override;
  }
  data.samples.reserve(raw.size());
  for (auto& rs : raw) {
    rs.sample.label = mapping->at(rs.label);
    data.samples.push_back(std::move(rs.sample));
  }
  return data;
}

Dataset load_libsvm(const std::string& path, std::optional<int> dim_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path + "'");
  return parse_libsvm(in, dim_override);
}

void write_libsvm(std::ostream& out, const Dataset& data) {
  for (const Sample& s : data.samples) {
    out << (s.label > 0 ? "+1" : "-1");
    for (const Feature& f : s.features) out << ' ' << (f.index + 1) << ':' << format_double(f.value);
    out << '\n';
  }
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  return order;
}

std::vector<Dataset> shard(const Dataset& data, int m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("shard: agent count must be >= 1");
  if (data.empty()) throw std::invalid_argument("shard: empty dataset");
  if (static_cast<std::size_t>(m) > data.size())
    throw std::invalid_argument("shard: " + std::to_string(m) + " agents but only " + std::to_string(data.size()) +
                                " samples");
  if (m == 1) return {data};

  const auto order = seeded_permutation(data.size(), seed);
  const std::size_t base = data.size() / static_cast<std::size_t>(m);
  const std::size_t extra = data.size() % static_cast<std::size_t>(m);
  std::vector<Dataset> parts(static_cast<std::size_t>(m));
  std::size_t next = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const std::size_t count = base + (p < extra ? 1 : 0);
    parts[p].dim = data.dim;
    parts[p].samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) parts[p].samples.push_back(data.samples[order[next++]]);
  }
  return parts;
}

Dataset subsample(const Dataset& data, std::size_t count, std::uint64_t seed) {
  if (count >= data.size()) return data;
  const auto order = seeded_permutation(data.size(), seed);
  Dataset out;
  out.dim = data.dim;
  out.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.samples.push_back(data.samples[order[i]]);
  return out;
}

}  // namespace dpg
