#pragma once

// Functions psi(z) = 1 + int_0^inf K(t) e^{izt} dt and empirical estimates of
// their class parameters.

#include <functional>
#include <optional>
#include <vector>

#include "ratiolab/zero_locator.hpp"
#include "ratiolab/zero_set.hpp"

namespace ratiolab::jost {

enum class KernelKind {
  PiecewisePolynomial,  // polynomial on each [t_j, t_{j+1}], zero past the last knot
  SuperExponential,     // C exp(-(t/2)^gamma), gamma > 1
  Exponential,          // C exp(-beta t), optionally cut off at T
};

struct Kernel {
  KernelKind kind = KernelKind::PiecewisePolynomial;
  // Piece j is sum_i coeffs[j][i] (t - knots[j])^i on [knots[j], knots[j+1]).
  std::vector<double> knots;
  std::vector<std::vector<double>> coeffs;
  double gamma = 2.0;
  double C = 1.0;
  double beta = 1.0;
  std::optional<double> T;  // truncation point of an exponential kernel

  /// Throws std::invalid_argument when the description is inconsistent.
  void validate() const;

  double operator()(double t) const;
  /// K(0+).
  double at_zero() const;
  /// Right end of the support; +inf for unbounded kernels.
  double support_end() const;
  bool compact() const;
  /// Im z must exceed -margin() for the defining integral to converge.
  double convergence_margin() const;

  static Kernel constant(double value, double length);
  static Kernel piecewise(std::vector<double> knots, std::vector<std::vector<double>> coeffs);
  static Kernel super_exponential(double C, double gamma);
  static Kernel exponential(double C, double beta, std::optional<double> T = std::nullopt);
};

enum class Method { ClosedForm, Quadrature };

class JostFunction {
 public:
  /// Closed form is the default for piecewise kernels and the only choice
  /// that is rejected for the others (std::invalid_argument).
  explicit JostFunction(Kernel kernel, std::optional<Method> method = std::nullopt,
                        double tolerance = 1e-14);

  cplx operator()(cplx z) const { return 1.0 + deviation(z); }
  /// psi(z) - 1 = int K(t) e^{izt} dt, without the cancellation of psi - 1.
  /// Throws std::domain_error where the integral diverges.
  cplx deviation(cplx z) const;

  const Kernel& kernel() const { return kernel_; }
  Method method() const { return method_; }
  double tolerance() const { return tolerance_; }

  zeros::AnalyticFn as_analytic() const;

 private:
  cplx closed_form(cplx z) const;
  cplx quadrature(cplx z) const;

  Kernel kernel_;
  Method method_;
  double tolerance_;
};

using Deviation = std::function<cplx(cplx)>;

struct RayFit {
  double C1 = 0.0;
  double mu = 0.0;      // fitted exponent floored to the 0.05 grid
  double mu_raw = 0.0;  // least-squares slope
  bool degenerate = false;  // |psi - 1| vanished on every sample ("infinite decay")
  std::size_t samples = 0;
};

/// Fits |psi - 1| <= C1 r^{-mu} on the ray arg z = angle over geometric
/// samples in [rmin, rmax]. mu is the least-squares slope floored to a
/// multiple of 0.05 (with 1e-3 slack for round-off); C1 is then the smallest
/// constant for which the bound holds at every sample.
/// Throws std::runtime_error("no decay") when the slope is not negative.
RayFit ray_decay_fit(const Deviation& deviation, double angle, std::size_t samples,
                     double rmin, double rmax);
RayFit ray_decay_fit(const JostFunction& jost, double angle, std::size_t samples, double rmin,
                     double rmax);

struct GrowthFit {
  double C0 = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  double log_coefficient = 0.0;  // b in ln M = a + b ln r + sigma r^rho
  bool degenerate = false;        // M(r) = 1 on every circle
  std::vector<double> radii;
  std::vector<double> max_modulus;
};

/// Max modulus on |z| = r: 1024 equally spaced samples, then a golden-section
/// search of the angle between the neighbours of the best sample.
double max_modulus(const std::function<cplx(cplx)>& f, double r);

/// Profile least squares of ln M(r) against 1, ln r, r^rho, with rho
/// scanned on [0.25, 4] and refined by golden section; sigma is the r^rho
/// coefficient and C0 = max_r M(r) e^{-sigma r^rho} makes the envelope
/// hold at every radius.
GrowthFit growth_fit(const std::function<cplx(cplx)>& f, const std::vector<double>& radii);
GrowthFit growth_fit(const JostFunction& jost, const std::vector<double>& radii);

/// psi(z) + K(0)/(iz) - 1, defined for z != 0.
Deviation remark6_deviation(const JostFunction& jost);
/// z -> psi(z) + K(0)/(iz). Evaluating at the origin throws std::domain_error.
zeros::AnalyticFn remark6_transform(const JostFunction& jost);

}  // namespace ratiolab::jost
