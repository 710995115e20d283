#pragma once

#include <optional>
#include <string>

#include "unimargin/table.hpp"

namespace unimargin {

enum class LpStatus { strictly_positive, boundary_only, infeasible_system };

struct LPVerdict {
  double delta_star = 0.0;
  LpStatus status = LpStatus::infeasible_system;
  std::optional<Table> witness;  // present when delta_star clears the threshold
  std::string delta_exact;       // "num/den", filled by the exact solver
};

// Maximize delta subject to C(Z) p = b, p_alpha >= delta on positive cells,
// p >= 0 (zero-pattern columns dropped). exact selects the rational simplex.
LPVerdict lp_feasibility(const ZeroPattern& pattern, const Shape& shape,
                         bool exact = false);

}  // namespace unimargin
