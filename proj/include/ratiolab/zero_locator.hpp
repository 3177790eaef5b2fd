#pragma once

// Zero counting by the argument principle, zero location by quad subdivision,
// and the Jensen-formula cross-check.

#include <functional>
#include <limits>
#include <stdexcept>

#include "ratiolab/class_params.hpp"
#include "ratiolab/report.hpp"
#include "ratiolab/zero_set.hpp"

namespace ratiolab::zeros {

// A black-box analytic function. The derivative is optional and only used
// to polish located zeros.
// Value of a winding proxy together with its logarithmic derivative P'/P.
struct ProxySample {
  cplx value;
  cplx log_derivative;
};

struct AnalyticFn {
  std::function<cplx(cplx)> value;
  std::function<cplx(cplx)> derivative;
  // Optional helpers for functions whose values overflow a double:
  //  log_value      a branch of ln f (real part -inf at zeros), used for ln|f|;
  //  log_derivative f'/f, used for Newton steps;
  //  winding_proxy  a function P with the same zeros as f and f/P exp of an
  //                 entire function, used for phase tracking; only arg P
  //                 matters, and P'/P sets the arc resolution.
  std::function<cplx(cplx)> log_value;
  std::function<cplx(cplx)> log_derivative;
  std::function<ProxySample(cplx)> winding_proxy;
  double validity_radius = std::numeric_limits<double>::infinity();

  cplx operator()(cplx z) const { return value(z); }
};

enum class LocatorErrorKind { ZeroOnContour, NonConvergent, UnresolvedCluster, ZeroAtOrigin, ZeroOnCircle };

class LocatorError : public std::runtime_error {
 public:
  LocatorError(LocatorErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  LocatorErrorKind kind() const { return kind_; }

 private:
  LocatorErrorKind kind_;
};

struct CountOptions {
  std::size_t initial_samples = 64;
  std::size_t max_evaluations = std::size_t{1} << 22;
  // Arcs shorter than this fraction of the radius mean a zero sits on the contour.
  double contour_floor = 1e-9;
  // Outward nudges by a factor 1 + 2^-20 before giving up on a contour zero.
  int max_nudges = 8;
};

struct CountResult {
  long count = 0;
  double winding_residual = 0.0;  // |turns - count|
  std::size_t samples = 0;
  double radius_used = 0.0;
  bool reliable = true;  // winding_residual < 0.25
};

/// Winding number of f along |z - center| = radius by adaptive phase tracking:
/// each arc is halved until both half-increments of arg f stay below pi/2.
CountResult count_zeros(const AnalyticFn& f, cplx center, double radius,
                        const CountOptions& options = {});

/// Same as count_zeros but without nudging; a contour zero is an error.
CountResult count_zeros_exact_radius(const AnalyticFn& f, cplx center, double radius,
                                     const CountOptions& options = {});

/// Winding number along the boundary of the axis-aligned rectangle.
CountResult count_zeros_rectangle(const AnalyticFn& f, double xmin, double xmax, double ymin,
                                  double ymax, const CountOptions& options = {});

struct LocateOptions {
  CountOptions count;
  double newton_tolerance = 1e-13;  // relative step size for convergence
  int max_newton_steps = 80;
  double cluster_cell = 1e-4;       // cells below this (relative) try multiple-zero polish
  double subdivision_floor = 1e-9;  // relative cell size at which subdivision gives up
};

/// All zeros in the open disk, polished by (modified) Newton iteration.
/// The multiplicities always add up to the winding count of the disk.
ZeroSet locate_zeros(const AnalyticFn& f, cplx center, double radius,
                     const LocateOptions& options = {});

struct JensenResult {
  double lhs = 0.0;  // mean of ln|f| on the circle minus ln|f(0)|
  double rhs = 0.0;  // sum multiplicity * ln(r / |z_k|)
  std::size_t quadrature_points = 0;
  ZeroSet zeros;

  double diff() const { return lhs - rhs; }
};

/// Trapezoidal rule with point doubling until two successive circle means
/// agree to 1e-10 (1 + |mean|).
JensenResult jensen_check(const AnalyticFn& f, double r, std::size_t initial_points = 256);

/// n(r) <= 2 sigma (2e)^rho r^rho, asserted only when r >= r1(params).
VerificationReport count_bound_check(const AnalyticFn& f, const ClassParams& params, double r);

}  // namespace ratiolab::zeros
