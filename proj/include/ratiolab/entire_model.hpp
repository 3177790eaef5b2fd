#pragma once

// psi(z) = z^n exp(g(z)) prod E_p(z / z_k) over a finite zero set.

#include <optional>
#include <vector>

#include "ratiolab/zero_locator.hpp"
#include "ratiolab/zero_set.hpp"

namespace ratiolab::model {

// Analytic description of zeros left out of a truncated product: every
// neglected zero has modulus >= cutoff and sum |z_n|^{-(p+1)} <= power_sum.
struct TailBound {
  double cutoff = 0.0;
  double power_sum = 0.0;
};

class EntireModel {
 public:
  EntireModel() = default;
  /// Throws std::invalid_argument if deg g > genus, genus < 0 or n < 0.
  EntireModel(ZeroSet zeros, int genus, std::vector<cplx> g = {}, int origin_order = 0,
              std::optional<TailBound> tail = std::nullopt);

  cplx operator()(cplx z) const;
  /// psi(z) - 1, computed as expm1 of the log sum when z is inside the guard
  /// radius of every zero (and n = 0), so small deviations keep full precision.
  cplx minus_one(cplx z) const;
  /// A branch of ln psi(z), finite wherever psi(z) != 0 even if psi overflows.
  cplx log_value(cplx z) const;
  /// psi'(z)/psi(z); infinite at a zero.
  cplx log_derivative(cplx z) const;
  /// Phase of P(z) = z^n prod (1 - z/z_k)^{m_k} (0 at a zero) and P'/P:
  /// psi / P is exp of an entire function, so both wind alike.
  zeros::ProxySample winding_proxy(cplx z) const;
  /// g(z) by Horner's rule.
  cplx exponent(cplx z) const;

  /// Pi(R, z): product over the zeros with |z_n| >= R. Uses the compensated
  /// log sum when every ratio is inside the guard radius and direct
  /// multiplication otherwise.
  cplx tail_product(double R, cplx z) const;
  cplx tail_product_minus_one(double R, cplx z) const;

  /// Upper bound on |ln psi_true(z) - ln psi(z)| from the neglected zeros:
  /// |z|^{p+1} power_sum, valid while |z| <= guard * cutoff; +inf beyond,
  /// 0 without a tail.
  double error_budget(cplx z) const;

  const ZeroSet& zeros() const { return zeros_; }
  int genus() const { return genus_; }
  const std::vector<cplx>& g() const { return g_; }
  int origin_order() const { return origin_order_; }
  const std::optional<TailBound>& tail() const { return tail_; }

  zeros::AnalyticFn as_analytic() const;

 private:
  ZeroSet zeros_;
  int genus_ = 0;
  std::vector<cplx> g_;
  int origin_order_ = 0;
  std::optional<TailBound> tail_;
};

/// Pi(R, z) - 1 over an arbitrary zero set (no cutoff filtering).
cplx product_minus_one(const ZeroSet& zeros, int p, cplx z);

/// Horner evaluation of sum coeffs[j] z^j.
cplx polyval(const std::vector<cplx>& coeffs, cplx z);
/// Derivative of the same polynomial.
cplx polyval_derivative(const std::vector<cplx>& coeffs, cplx z);

}  // namespace ratiolab::model
