#pragma once

#include <utility>
#include <vector>

#include "unimargin/table.hpp"

namespace unimargin {

struct IpfpConfig {
  int max_iter = 100000;     // full sweeps
  double tol = 1e-10;        // max absolute margin deviation from 1/x_i
  std::vector<int> sweep;    // 1-based axis order per cycle; empty = 1..d
};

struct IpfpReport {
  int iterations_used = 0;
  double final_margin_deviation = 0.0;
  bool converged = false;
  double kl_to_input = 0.0;
  // Some positive input cell ended below ~20*sqrt(tol): the iteration is
  // drifting to a boundary solution. A collapsing cell decays harmonically
  // (roughly 1/iterations), so a cutoff near machine zero would never fire
  // at realistic sweep counts; this one scales with the tolerance.
  bool boundary_drift = false;
};

// Rescales toward uniform margins (1/x_i per axis). Probability mode only;
// a zero axis-level margin on the input is a domain error.
std::pair<Table, IpfpReport> ipfp_uniform(const Table& input,
                                          const IpfpConfig& cfg = {});

// The 2x2 table with uniform margins and odds ratio omega:
// diagonal sqrt(omega)/(2(1+sqrt(omega))), off-diagonal 1/(2(1+sqrt(omega))).
Table closed_form_2x2(double omega);

}  // namespace unimargin
