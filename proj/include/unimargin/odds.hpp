#pragma once

#include <string>
#include <utility>
#include <vector>

#include "unimargin/table.hpp"

namespace unimargin {

// omega_{alpha'}^{ij}: odds ratio of binary axes (i, j), i < j (1-based),
// with the remaining axes fixed at cond (levels listed in ascending axis
// order, skipping i and j).
struct ConditionalORSpec {
  int i = 1;
  int j = 2;
  MultiIndex cond;
};

enum class ORStatus { defined, undefined };

struct ORValue {
  ORStatus status = ORStatus::undefined;
  double value = 0.0;  // meaningful only when defined
};

// Integer exponent vector over cells: positive exponents form the numerator,
// negative ones the denominator. Always degree zero for OR products.
struct ORMonomial {
  Shape shape;
  std::vector<int> expo;
};

ORMonomial monomial_of(const Shape& shape, const ConditionalORSpec& spec);
ORMonomial monomial_product(const std::vector<ORMonomial>& factors);
ORValue evaluate_monomial(const Table& t, const ORMonomial& m);

ORValue conditional_or(const Table& t, const ConditionalORSpec& spec);
ORValue marginal_or(const Table& t, int i, int j);

std::vector<std::pair<ConditionalORSpec, ORValue>> all_conditional_ors(
    const Table& t);
std::vector<ConditionalORSpec> all_conditional_specs(const Shape& shape);

bool degree_zero(const ORMonomial& m);
// True when, for every axis and level, the exponents over that level's slice
// sum to zero; exactly the monomials invariant under per-axis rescaling.
bool axis_balanced(const ORMonomial& m);

// Compact text form, e.g. "12|1" for omega_1^{12}, "13,23|01" for a product.
std::string spec_name(const ConditionalORSpec& spec);
std::string product_name(const std::vector<ConditionalORSpec>& specs);
// Parses "12|1" (single) — the inverse of spec_name for binary shapes.
ConditionalORSpec parse_spec(const Shape& shape, const std::string& text);

}  // namespace unimargin
