#pragma once

#include "ratiolab/zero_set.hpp"

namespace ratiolab::factors {

/// p / (p+1): radius inside which ln E_p is evaluated by its tail series.
double guard_radius(int p);

/// E_p(xi) = (1 - xi) exp(sum_{k=1}^p xi^k / k). Inside the guard radius the
/// value is exp(log_primary_factor) so that E_p - 1 keeps full precision.
cplx primary_factor(cplx xi, int p);

/// ln E_p(xi) = -sum_{k>p} xi^k / k, the branch with ln E_p(0) = 0.
/// Throws std::domain_error when |xi| > p/(p+1).
cplx log_primary_factor(cplx xi, int p);

/// e^w - 1 without cancellation for small |w|.
cplx expm1(cplx w);

// Zeros of modulus >= cutoff feeding the tail product Pi(R, z).
class TailProductSpec {
 public:
  /// Throws std::invalid_argument if some zero lies inside the cutoff.
  TailProductSpec(ZeroSet zeros, int genus, double cutoff);

  const ZeroSet& zeros() const { return zeros_; }
  int genus() const { return genus_; }
  double cutoff() const { return cutoff_; }

 private:
  ZeroSet zeros_;
  int genus_;
  double cutoff_;
};

/// w(z) = sum multiplicity * ln E_p(z / z_n), compensated.
/// Throws std::domain_error if any |z / z_n| leaves the guard radius.
cplx tail_log_sum(const TailProductSpec& spec, cplx z);

/// Pi(R, z) = exp(w(z)).
cplx tail_product(const TailProductSpec& spec, cplx z);

/// Pi(R, z) - 1 evaluated as expm1(w(z)).
cplx tail_product_minus_one(const TailProductSpec& spec, cplx z);

/// sum multiplicity * |z_n|^{-(p+1)} over a set with every |z_n| >= R.
double tail_power_sum(const ZeroSet& zeros, int p, double R);

struct ExpBound {
  double lhs = 0.0;  // |e^w - 1|
  double rhs = 0.0;  // |w| e^{|w|}
};

ExpBound exp_minus_one_bound_check(cplx w);

}  // namespace ratiolab::factors
