#pragma once

// Data-parallel inner loops.
//
// Each kernel has a serial reference implementation (suffix _serial) kept for
// testing and benchmarking. Sums are reduced over fixed-size blocks in index
// order in both versions, so results are bit-identical whatever the thread
// count, and sup-reductions are exact.

#include <cstddef>
#include <functional>
#include <span>

#include "ratiolab/zero_set.hpp"

namespace ratiolab::kernels {

/// Zeros per reduction block in the blocked sums.
inline constexpr std::size_t kBlockSize = 1024;

/// Sets the OpenMP thread count for all later kernels (n <= 0 keeps the default).
void set_thread_count(int n);
int thread_count();

// sum multiplicity * ln E_p(z / z_n); every ratio must be inside the guard
// radius (std::domain_error otherwise).
cplx log_factor_sum_serial(std::span<const Zero> zeros, int p, cplx z);
cplx log_factor_sum(std::span<const Zero> zeros, int p, cplx z);

// Product over all zeros split into a compensated log part and a directly
// multiplied part: ln E_p for ratios inside the guard radius, and for the
// rest sum xi^k/k in the log part with only (1 - xi) multiplied directly.
struct FactorAccumulation {
  cplx log_sum{0.0, 0.0};
  cplx direct{1.0, 0.0};

  cplx value() const;
  /// A branch of the logarithm of value(); finite even where value() overflows.
  cplx log_value() const;
};

FactorAccumulation accumulate_factors_serial(std::span<const Zero> zeros, int p, cplx z);
FactorAccumulation accumulate_factors(std::span<const Zero> zeros, int p, cplx z);

struct SupResult {
  double value = 0.0;          // max over accepted samples (0 if none)
  std::size_t argmax = 0;      // lowest index attaining the max
  std::size_t evaluated = 0;   // accepted samples
  std::size_t excluded = 0;    // samples whose value was NaN
};

using PointFunction = std::function<double(cplx)>;

/// sup of f over the points; NaN values count as excluded samples.
SupResult sampled_sup_serial(std::span<const cplx> points, const PointFunction& f);
SupResult sampled_sup(std::span<const cplx> points, const PointFunction& f);

/// max |f| over n equally spaced points on the circle |z - center| = radius.
double circle_max_modulus_serial(const std::function<cplx(cplx)>& f, cplx center,
                                 double radius, std::size_t n);
double circle_max_modulus(const std::function<cplx(cplx)>& f, cplx center, double radius,
                          std::size_t n);

}  // namespace ratiolab::kernels
