#include "unimargin/ipfp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace unimargin {

namespace {

double margin_deviation(const Table& t) {
  double dev = 0;
  for (int i = 1; i <= t.dims(); ++i) {
    double target = 1.0 / t.shape[i - 1];
    for (double v : margin(t, i)) dev = std::max(dev, std::fabs(v - target));
  }
  return dev;
}

}  // namespace

std::pair<Table, IpfpReport> ipfp_uniform(const Table& input,
                                          const IpfpConfig& cfg) {
  if (input.mode != TableMode::probability)
    throw std::domain_error("ipfp_uniform needs a probability-mode table");
  if (cfg.tol <= 0) throw std::invalid_argument("ipfp tol must be positive");
  if (cfg.max_iter < 1) throw std::invalid_argument("ipfp max_iter must be >= 1");
  int d = input.dims();
  std::vector<int> sweep = cfg.sweep;
  if (sweep.empty())
    for (int i = 1; i <= d; ++i) sweep.push_back(i);
  for (int a : sweep)
    if (a < 1 || a > d) throw std::invalid_argument("sweep axis out of range");
  for (int i = 1; i <= d; ++i)
    for (double v : margin(input, i))
      if (v == 0)
        throw std::domain_error("ipfp requires every axis-level margin nonzero");

  Table t = input;
  IpfpReport rep;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    for (int axis : sweep) {
      std::vector<double> m = margin(t, axis);
      double target = 1.0 / t.shape[axis - 1];
      std::size_t inner = 1;
      for (int j = axis; j < d; ++j) inner *= (std::size_t)t.shape[j];
      std::size_t levels = (std::size_t)t.shape[axis - 1];
      std::vector<double> f(levels);
      for (std::size_t l = 0; l < levels; ++l) {
        if (m[l] == 0)
          throw std::domain_error("ipfp hit a zero axis-level margin");
        f[l] = target / m[l];
      }
      for (std::size_t k = 0; k < t.p.size(); ++k)
        t.p[k] *= f[(k / inner) % levels];
    }
    rep.iterations_used = it;
    rep.final_margin_deviation = margin_deviation(t);
    if (rep.final_margin_deviation <= cfg.tol) {
      rep.converged = true;
      break;
    }
  }
  double drift_eps = std::clamp(20 * std::sqrt(cfg.tol), 1e-14, 1e-3);
  for (std::size_t k = 0; k < t.p.size(); ++k)
    if (input.p[k] > 0 && t.p[k] < drift_eps) rep.boundary_drift = true;
  rep.kl_to_input = kl_divergence(t, input);
  return {std::move(t), rep};
}

Table closed_form_2x2(double omega) {
  if (!(omega > 0) || std::isinf(omega) || std::isnan(omega))
    throw std::domain_error("closed_form_2x2 needs omega > 0");
  double s = std::sqrt(omega);
  double diag = s / (2 * (1 + s));
  double off = 1 / (2 * (1 + s));
  return make_table({2, 2}, {diag, off, off, diag}, TableMode::probability);
}

}  // namespace unimargin
