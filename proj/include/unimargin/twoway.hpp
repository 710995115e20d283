#pragma once

#include <cstdint>
#include <vector>

#include "unimargin/table.hpp"

namespace unimargin {

// A rectangle rows x cols over which the table is identically zero.
// weight = |rows|/R + |cols|/S, kept as an exact fraction over R*S.
struct NullRectangle {
  std::uint32_t rows = 0;  // bitmask over row indices
  std::uint32_t cols = 0;  // bitmask over column indices
  int weight_num = 0;      // |rows|*S + |cols|*R
  int weight_den = 0;      // R*S

  double weight() const { return (double)weight_num / weight_den; }
};

// Maximal null rectangles of a two-way table (every null rectangle is
// contained in at least one of them). R, S <= 12.
std::vector<NullRectangle> null_rectangles(const Table& t, double eps = 0.0);

enum class TwoWayCase {
  unique_exists,           // 1: all null-rectangle weights < 1
  unique_exists_boundary,  // 2i: max weight 1, all weight-1 complements null
  reduced_support_only,    // 2ii: some weight-1 complement not null
  no_solution,             // 3: some weight > 1
};

struct TwoWayVerdict {
  TwoWayCase verdict = TwoWayCase::unique_exists;
  std::vector<NullRectangle> witnesses;  // rectangles driving the verdict
};

TwoWayVerdict classify_twoway(const Table& t, double eps = 0.0);

// Checkerboard copula of a two-way table: grids are cumulative normalized
// margins (including 0 and 1), c[i][j] = (1/N) * sum_{l<=i, h<=j} x_{l,h}.
struct DiscreteCopula {
  std::vector<double> u;                  // size R+1
  std::vector<double> v;                  // size S+1
  std::vector<std::vector<double>> c;     // (R+1) x (S+1)
};

DiscreteCopula discrete_copula(const Table& t);

}  // namespace unimargin
