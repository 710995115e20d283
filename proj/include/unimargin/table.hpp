#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "unimargin/rational.hpp"

namespace unimargin {

using Shape = std::vector<int>;       // per-axis cardinalities, each >= 2
using MultiIndex = std::vector<int>;  // 0-based levels

void validate_shape(const Shape& shape);
std::size_t cell_count(const Shape& shape);

// 1-based lexicographic rank, axis 1 most significant. For binary shapes
// rank-1 is the integer whose binary digits are (alpha_1 ... alpha_d).
std::size_t cell_rank(const Shape& shape, const MultiIndex& alpha);
MultiIndex cell_index(const Shape& shape, std::size_t rank);

enum class TableMode { probability, counts };

struct Table {
  Shape shape;
  std::vector<double> p;  // canonical cell order
  TableMode mode = TableMode::probability;

  int dims() const { return (int)shape.size(); }
  std::size_t cells() const { return p.size(); }
  double total() const;
  double at(const MultiIndex& alpha) const;
};

// Validates and builds. Probability mode requires the entries to sum to 1
// within sum_tol (then renormalizes exactly); counts are kept as given.
Table make_table(Shape shape, std::vector<double> entries, TableMode mode,
                 double sum_tol = 1e-6);

Table normalized(const Table& t);  // counts or probability -> probability

std::vector<double> margin(const Table& t, int axis);  // axis is 1-based
std::vector<std::vector<double>> margins(const Table& t);
bool is_uniform_margins(const Table& t, double tol);

double kl_divergence(const Table& q, const Table& p);

// z[i] = 1 marks a positive cell, z[i] = 0 a forced zero.
struct ZeroPattern {
  Shape shape;
  std::vector<std::uint8_t> z;

  std::size_t cells() const { return z.size(); }
  int zero_count() const;
  bool all_zero() const;
  // bit i set <=> cell with rank i+1 is positive; shapes up to 64 cells
  std::uint64_t positive_mask() const;
  std::string to_string() const;  // e.g. "01011010"

  static ZeroPattern from_string(const Shape& shape, const std::string& s);
  static ZeroPattern from_mask(const Shape& shape, std::uint64_t positive);
  static ZeroPattern from_zero_cells(const Shape& shape,
                                     const std::vector<MultiIndex>& zeros);
  static ZeroPattern all_ones(const Shape& shape);
};

// Throws std::domain_error when the pattern has no positive cell.
void validate_pattern(const ZeroPattern& pat);

ZeroPattern zero_pattern_of(const Table& t, double eps = 0.0);

// Exact-rational margin helpers (used by the polytope tests and rays).
std::vector<Rational> margin_exact(const Shape& shape,
                                   const std::vector<Rational>& p, int axis);
bool is_uniform_margins_exact(const Shape& shape,
                              const std::vector<Rational>& p);

}  // namespace unimargin
