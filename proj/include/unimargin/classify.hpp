#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "unimargin/odds.hpp"
#include "unimargin/polytope.hpp"
#include "unimargin/table.hpp"

namespace unimargin {

struct PatternRecord {
  std::uint64_t positive_mask = 0;
  int N0 = 0;  // zero-cell count
  CompatibilityVerdict::Status status = CompatibilityVerdict::Status::s1_empty;
  int N1 = 0;  // extreme points of the restricted polytope (|S1|)
  bool lp_checked = false;
  double lp_delta = 0.0;

  bool compatible() const {
    return status == CompatibilityVerdict::Status::compatible;
  }
};

struct Atlas {
  Shape shape;
  std::vector<PatternRecord> records;  // all 2^cells - 1 nontrivial patterns
  std::map<std::pair<int, int>, int> crosstab;  // (N0, N1) -> count, compatible only
  int compatible_count = 0;
  int pruned_count = 0;  // patterns settled by monotonicity instead of ray test
};

struct ClassifyConfig {
  bool lp_all = false;        // cross-check every pattern against the LP
  std::size_t lp_sample = 0;  // or a random sample of this size
  unsigned seed = 1;
  int jobs = 1;
};

Atlas classify_all(const Shape& shape, const ClassifyConfig& cfg = {});

struct ProbeEntry {
  std::string name;  // "12|1", "13,23|01", ...
  enum class Kind { defined, zero, undefined } kind = Kind::undefined;
  bool separates = false;  // non-constant across the restricted polytope
  double lo = 0.0, hi = 0.0;  // value range seen on the sample grid
};

struct UniquenessReport {
  ZeroPattern pattern;
  int n_rays = 0;  // extreme points of the restricted polytope
  std::vector<ProbeEntry> singles, pair_products, triple_products;
};

// d=3 catalog: all six conditional ORs, the 12 two-factor products across
// distinct pairs, and the 8 three-factor products, each evaluated on a grid
// of convex combinations of the restricted extreme pmfs.
UniquenessReport uniqueness_probe(const ZeroPattern& pattern, const Shape& shape);

// Mixes the 000/111 antipodal extreme pmf (weight lambda) with the odd-parity
// one: the one-parameter family supported on the pattern with zeros at
// (0,1,1), (1,0,1), (1,1,0).
Table lambda_family(double lambda);

// 4 lambda^2 (1 + lambda) / (1 - lambda)^3, the value of the triple product
// omega_{001}^{12,13,23} along lambda_family; strictly increasing on [0, 1).
double lambda_triple_or(double lambda);

}  // namespace unimargin
