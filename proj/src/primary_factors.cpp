#include "ratiolab/primary_factors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ratiolab/kernels.hpp"

namespace ratiolab::factors {

namespace {

// Grid points placed exactly on the guard circle must not trip the check
// through rounding in z / z_n.
constexpr double kGuardSlack = 1e-12;
constexpr double kSeriesRelTol = 1e-18;

}  // namespace

double guard_radius(int p) {
  if (p < 0) throw std::invalid_argument("genus must be >= 0");
  return static_cast<double>(p) / (p + 1.0);
}

cplx log_primary_factor(cplx xi, int p) {
  const double guard = guard_radius(p);
  const double r = std::abs(xi);
  if (r > guard * (1.0 + kGuardSlack)) {
    throw std::domain_error("ln E_p evaluated outside |xi| <= p/(p+1) (|xi|=" +
                            std::to_string(r) + ", p=" + std::to_string(p) + ")");
  }
  if (r == 0.0) return {0.0, 0.0};

  cplx term = xi;
  double term_abs = r;
  for (int k = 1; k <= p; ++k) {
    term *= xi;
    term_abs *= r;
  }
  // term = xi^{p+1}
  cplx sum{0.0, 0.0};
  for (int k = p + 1;; ++k) {
    sum += term / static_cast<double>(k);
    const double next_abs = term_abs * r;
    const double remainder = next_abs / ((k + 1.0) * (1.0 - r));
    if (remainder <= kSeriesRelTol * std::abs(sum) || next_abs == 0.0) break;
    term *= xi;
    term_abs = next_abs;
  }
  return -sum;
}

cplx primary_factor(cplx xi, int p) {
  if (p >= 1 && std::abs(xi) <= guard_radius(p)) {
    return std::exp(log_primary_factor(xi, p));
  }
  cplx exponent{0.0, 0.0};
  cplx power{1.0, 0.0};
  for (int k = 1; k <= p; ++k) {
    power *= xi;
    exponent += power / static_cast<double>(k);
  }
  return (cplx(1.0, 0.0) - xi) * std::exp(exponent);
}

cplx expm1(cplx w) {
  const double x = w.real();
  const double y = w.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

TailProductSpec::TailProductSpec(ZeroSet zeros, int genus, double cutoff)
    : zeros_(std::move(zeros)), genus_(genus), cutoff_(cutoff) {
  if (genus_ < 0) throw std::invalid_argument("genus must be >= 0");
  if (!zeros_.empty() && zeros_.min_modulus() < cutoff_) {
    throw std::invalid_argument("tail product zeros must all have modulus >= cutoff");
  }
}

cplx tail_log_sum(const TailProductSpec& spec, cplx z) {
  return kernels::log_factor_sum(spec.zeros().entries(), spec.genus(), z);
}

cplx tail_product(const TailProductSpec& spec, cplx z) {
  return std::exp(tail_log_sum(spec, z));
}

cplx tail_product_minus_one(const TailProductSpec& spec, cplx z) {
  return expm1(tail_log_sum(spec, z));
}

double tail_power_sum(const ZeroSet& zeros, int p, double R) {
  if (!zeros.empty() && zeros.min_modulus() < R) {
    throw std::invalid_argument("tail_power_sum: zero inside the cutoff radius");
  }
  // Ascending moduli means descending terms; summing from the far end keeps
  // small terms from being swallowed.
  const auto entries = zeros.entries();
  double sum = 0.0;
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    sum += it->multiplicity * std::pow(std::abs(it->location), -(p + 1.0));
  }
  return sum;
}

ExpBound exp_minus_one_bound_check(cplx w) {
  const double m = std::abs(w);
  return {std::abs(expm1(w)), m * std::exp(m)};
}

}  // namespace ratiolab::factors
