#pragma once

// Sparse binary-classification datasets in LIBSVM text form.

#include "dpg/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dpg {

struct Feature {
  int index = 0;  // 0-based; written 1-based
  double value = 0.0;

  friend bool operator==(const Feature&, const Feature&) = default;
};

struct Sample {
  std::vector<Feature> features;  // strictly increasing index
  int label = 1;                  // -1 or +1

  double dot(const Vector& x) const {
    double s = 0.0;
    for (const Feature& f : features) s += f.value * x[f.index];
    return s;
  }

  double squared_norm() const {
    double s = 0.0;
    for (const Feature& f : features) s += f.value * f.value;
    return s;
  }

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct Dataset {
  std::vector<Sample> samples;
  int dim = 0;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Reads "label idx:val idx:val ..." lines. Labels {-1,+1}, {0,1} or {1,2}
/// map to {-1,+1}. Blank lines and '#' comments are skipped. The dimension
/// is the largest index seen unless dim_override is given (it may not be
/// smaller than an index in the file). Throws ParseError with the line number.
Dataset parse_libsvm(std::istream& in, std::optional<int> dim_override = std::nullopt);

Dataset load_libsvm(const std::string& path, std::optional<int> dim_override = std::nullopt);

void write_libsvm(std::ostream& out, const Dataset& data);

/// Seeded shuffle followed by a contiguous split into m parts whose sizes
/// differ by at most one (larger parts first).
std::vector<Dataset> shard(const Dataset& data, int m, std::uint64_t seed);

/// Seeded draw of count samples without replacement; the whole set when
/// count >= size.
Dataset subsample(const Dataset& data, std::size_t count, std::uint64_t seed);

/// Fisher-Yates permutation of [0, n) from a 64-bit Mersenne twister.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

}  // namespace dpg
