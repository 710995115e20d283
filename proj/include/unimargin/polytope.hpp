#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unimargin/rational.hpp"
#include "unimargin/table.hpp"

namespace unimargin {

// Small dense integer matrix in row-major order.
struct ConstraintMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<long long> a;

  long long at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

// H: one row per adjacent level pair of each axis; entries +1 on cells at
// level j, -1 on cells at level j+1, 0 elsewhere. Sum_i (x_i - 1) rows.
ConstraintMatrix margin_matrix(const Shape& shape);

// C = all-ones normalization row stacked on H, with target b = (1, 0, ..., 0).
std::pair<ConstraintMatrix, std::vector<long long>> full_matrix(const Shape& shape);

using RationalVec = std::vector<Rational>;

// All extreme rays of {y >= 0 : Hy = 0}, normalized to pmfs and sorted
// ascending lexicographically by entry. Exact arithmetic throughout.
std::vector<RationalVec> extreme_pmfs(const Shape& shape,
                                      std::size_t cell_bound = 64);

// Extreme pmfs of the face {Hy = 0, y >= 0, y = 0 on the pattern's zeros}.
std::vector<RationalVec> restricted_extreme_pmfs(const Shape& shape,
                                                 const ZeroPattern& pattern,
                                                 std::size_t cell_bound = 64);

struct CompatibilityVerdict {
  enum class Status { compatible, s1_empty, s2_proper_subset };
  Status status = Status::s1_empty;
  std::vector<int> S1;           // 0-based indices into the canonical ray list
  std::vector<std::size_t> S2;   // 0-based cell indices covered by S1 rays
  std::optional<RationalVec> witness;  // uniform mixture of the S1 rays

  bool compatible() const { return status == Status::compatible; }
};

CompatibilityVerdict check_compatibility_rays(const ZeroPattern& pattern,
                                              const Shape& shape);
// Same test against a precomputed canonical ray list (classify_all path).
CompatibilityVerdict check_compatibility_rays(
    const ZeroPattern& pattern, const Shape& shape,
    const std::vector<RationalVec>& rays);

// All patterns Z' strictly below Z (every positive cell of Z' positive in Z,
// Z' != Z), incompatible by monotonicity when Z has S1 empty. The all-zero
// pattern is included as the bottom element. Domain error when S1 != empty.
std::vector<ZeroPattern> monotone_prune(const ZeroPattern& pattern,
                                        const Shape& shape);

// Binary shapes: whenever a two-axis slice (alpha_{i1}, alpha_{i2}) = (y1, y2)
// is entirely zero, the opposite slice (1-y1, 1-y2) is forced zero as well;
// iterated to a fixpoint. Degenerating to the all-zero pattern is an error.
ZeroPattern forced_zeros(const ZeroPattern& pattern, const Shape& shape);

// Integer basis of ker C(Z) on the pattern's positive columns (canonical cell
// order), each vector content-1 with its first nonzero entry positive.
std::vector<std::vector<long long>> kernel_basis(const ZeroPattern& pattern,
                                                 const Shape& shape);

}  // namespace unimargin
