#include "ratiolab/zero_locator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ratiolab/constants.hpp"

namespace ratiolab::zeros {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

using Path = std::function<cplx(double)>;

class PhaseTracker {
 public:
  PhaseTracker(const AnalyticFn& f, Path path, double floor_s, std::size_t max_evaluations)
      : f_(f), path_(std::move(path)), floor_s_(floor_s), max_evaluations_(max_evaluations) {}

  // Total change of arg f along the closed path, divided by 2 pi.
  double turns(std::size_t initial) {
    std::vector<Sample> samples(initial);
    for (std::size_t i = 0; i < initial; ++i) {
      samples[i] = eval(static_cast<double>(i) / static_cast<double>(initial));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < initial; ++i) {
      const double s0 = static_cast<double>(i) / static_cast<double>(initial);
      const double s1 = static_cast<double>(i + 1) / static_cast<double>(initial);
      total += arc(s0, samples[i], s1, samples[(i + 1) % initial]);
    }
    return total / (2.0 * kPi);
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  struct Sample {
    cplx z, v;
    double rate = 0.0;  // |d arg / dz| bound from the proxy, 0 if unknown
  };

  Sample eval(double s) {
    if (++evaluations_ > max_evaluations_) {
      throw LocatorError(LocatorErrorKind::NonConvergent,
                         "phase tracking exceeded its evaluation budget");
    }
    Sample out;
    out.z = path_(s);
    if (f_.winding_proxy) {
      const ProxySample p = f_.winding_proxy(out.z);
      out.v = p.value;
      out.rate = std::abs(p.log_derivative);
    } else {
      out.v = f_(out.z);
    }
    if (!std::isfinite(out.v.real()) || !std::isfinite(out.v.imag())) {
      throw LocatorError(LocatorErrorKind::NonConvergent, "non-finite value on contour");
    }
    if (out.v == cplx(0.0, 0.0)) {
      throw LocatorError(LocatorErrorKind::ZeroOnContour, "function vanishes on the contour");
    }
    return out;
  }

  // Sampled phase increments alias when a zero (especially a multiple one)
  // passes close to the arc. Two guards: with a proxy, the rotation bound
  // max |P'/P| * length must stay below pi/2; without one, |f| must not dip
  // at the midpoint.
  bool resolved(const Sample& a, const Sample& m, const Sample& b) const {
    if (f_.winding_proxy) {
      const double length = std::abs(m.z - a.z) + std::abs(b.z - m.z);
      return std::max({a.rate, m.rate, b.rate}) * length <= kHalfPi;
    }
    return std::abs(m.v) >= 0.25 * std::sqrt(std::abs(a.v)) * std::sqrt(std::abs(b.v));
  }

  double arc(double s0, const Sample& a, double s1, const Sample& b) {
    const double sm = 0.5 * (s0 + s1);
    const Sample m = eval(sm);
    const double d1 = std::arg(m.v / a.v);
    const double d2 = std::arg(b.v / m.v);
    const double d = std::arg(b.v / a.v);
    if (resolved(a, m, b) && std::abs(d1) < kHalfPi && std::abs(d2) < kHalfPi &&
        std::abs(d1 + d2 - d) < 1e-9) {
      return d1 + d2;
    }
    if (s1 - s0 < floor_s_) {
      throw LocatorError(LocatorErrorKind::ZeroOnContour,
                         "zero within the contour resolution floor");
    }
    return arc(s0, a, sm, m) + arc(sm, m, s1, b);
  }

  const AnalyticFn& f_;
  Path path_;
  double floor_s_;
  std::size_t max_evaluations_;
  std::size_t evaluations_ = 0;
};

CountResult finish(double turns, std::size_t samples, double radius) {
  CountResult out;
  out.count = std::lround(turns);
  out.winding_residual = std::abs(turns - static_cast<double>(out.count));
  out.samples = samples;
  out.radius_used = radius;
  out.reliable = out.winding_residual < 0.25;
  return out;
}

CountResult circle_count(const AnalyticFn& f, cplx center, double radius,
                         const CountOptions& options) {
  if (!(radius > 0.0)) throw std::invalid_argument("count radius must be positive");
  PhaseTracker tracker(
      f, [=](double s) { return center + std::polar(radius, 2.0 * kPi * s); },
      options.contour_floor / (2.0 * kPi), options.max_evaluations);
  const double turns = tracker.turns(options.initial_samples);
  return finish(turns, tracker.evaluations(), radius);
}

struct Cell {
  double xmin, xmax, ymin, ymax;

  cplx center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
  double half_size() const { return 0.5 * std::max(xmax - xmin, ymax - ymin); }
  bool contains(cplx z, double pad) const {
    return z.real() >= xmin - pad && z.real() <= xmax + pad && z.imag() >= ymin - pad &&
           z.imag() <= ymax + pad;
  }
};

cplx derivative_at(const AnalyticFn& f, cplx z) {
  if (f.derivative) return f.derivative(z);
  const double h = 1e-7 * std::max(1.0, std::abs(z));
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

// Newton step m f / f' for a root of multiplicity m; through f'/f when
// available, so it stays finite where f overflows.
std::optional<cplx> newton_step(const AnalyticFn& f, cplx z, long m) {
  if (f.log_derivative) {
    const cplx dl = f.log_derivative(z);
    if (std::isinf(dl.real()) || std::isinf(dl.imag())) return cplx(0.0, 0.0);
    if (dl == cplx(0.0, 0.0) || !std::isfinite(std::abs(dl))) return std::nullopt;
    return static_cast<double>(m) / dl;
  }
  const cplx fz = f(z);
  if (fz == cplx(0.0, 0.0)) return cplx(0.0, 0.0);
  const cplx d = derivative_at(f, z);
  if (d == cplx(0.0, 0.0) || !std::isfinite(std::abs(d))) return std::nullopt;
  return static_cast<double>(m) * fz / d;
}

class Locator {
 public:
  Locator(const AnalyticFn& f, double scale, const LocateOptions& options)
      : f_(f), scale_(scale), options_(options) {}

  std::vector<Zero> run(const Cell& root, long count) {
    subdivide(root, count);
    return std::move(found_);
  }

  long cell_count(const Cell& c) const {
    const CountResult r =
        count_zeros_rectangle(f_, c.xmin, c.xmax, c.ymin, c.ymax, options_.count);
    if (!r.reliable) {
      throw LocatorError(LocatorErrorKind::NonConvergent, "unreliable winding on a cell");
    }
    return r.count;
  }

 private:
  std::optional<cplx> polish(const Cell& cell, long multiplicity) const {
    cplx z = cell.center();
    bool converged = false;
    for (int it = 0; it < options_.max_newton_steps; ++it) {
      const std::optional<cplx> next = newton_step(f_, z, multiplicity);
      if (!next) return std::nullopt;
      const cplx step = *next;
      if (step == cplx(0.0, 0.0)) {
        converged = true;
        break;
      }
      z -= step;
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
      if (std::abs(step) <= options_.newton_tolerance * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged || !cell.contains(z, 1e-3 * cell.half_size())) return std::nullopt;
    if (multiplicity > 1) {
      const double check_radius = std::max(std::min(cell.half_size(), 1e-6 * scale_),
                                           1e-12 * std::max(1.0, std::abs(z)));
      try {
        if (circle_count(f_, z, check_radius, options_.count).count != multiplicity) {
          return std::nullopt;
        }
      } catch (const LocatorError&) {
        return std::nullopt;
      }
    }
    return z;
  }

  void subdivide(const Cell& cell, long count) {
    if (count <= 0) return;
    const double half = cell.half_size();
    if (count == 1 || half < options_.cluster_cell * scale_) {
      if (auto z = polish(cell, count)) {
        found_.push_back({*z, static_cast<int>(count)});
        return;
      }
    }
    if (half < options_.subdivision_floor * scale_) {
      throw LocatorError(LocatorErrorKind::UnresolvedCluster,
                         "subdivision floor reached with " + std::to_string(count) +
                             " zeros in one cell");
    }
    static constexpr double kSplits[] = {0.5, 0.4731, 0.5269, 0.4417, 0.5583, 0.4109};
    for (const double t : kSplits) {
      const double xm = cell.xmin + t * (cell.xmax - cell.xmin);
      const double ym = cell.ymin + t * (cell.ymax - cell.ymin);
      const Cell children[4] = {{cell.xmin, xm, cell.ymin, ym},
                                {xm, cell.xmax, cell.ymin, ym},
                                {cell.xmin, xm, ym, cell.ymax},
                                {xm, cell.xmax, ym, cell.ymax}};
      long counts[4];
      try {
        for (int i = 0; i < 4; ++i) counts[i] = cell_count(children[i]);
      } catch (const LocatorError& e) {
        if (e.kind() == LocatorErrorKind::ZeroOnContour) continue;
        throw;
      }
      if (counts[0] + counts[1] + counts[2] + counts[3] != count) continue;
      for (int i = 0; i < 4; ++i) subdivide(children[i], counts[i]);
      return;
    }
    throw LocatorError(LocatorErrorKind::UnresolvedCluster,
                       "could not split a cell holding " + std::to_string(count) + " zeros");
  }

  const AnalyticFn& f_;
  double scale_;
  const LocateOptions& options_;
  std::vector<Zero> found_;
};

}  // namespace

CountResult count_zeros_exact_radius(const AnalyticFn& f, cplx center, double radius,
                                     const CountOptions& options) {
  return circle_count(f, center, radius, options);
}

CountResult count_zeros(const AnalyticFn& f, cplx center, double radius,
                        const CountOptions& options) {
  const double nudge = 1.0 + std::ldexp(1.0, -20);
  double r = radius;
  for (int attempt = 0; attempt <= options.max_nudges; ++attempt) {
    try {
      return circle_count(f, center, r, options);
    } catch (const LocatorError& e) {
      if (e.kind() != LocatorErrorKind::ZeroOnContour) throw;
    }
    r *= nudge;
  }
  throw LocatorError(LocatorErrorKind::ZeroOnContour,
                     "zero on contour persisted through radius nudges");
}

CountResult count_zeros_rectangle(const AnalyticFn& f, double xmin, double xmax, double ymin,
                                  double ymax, const CountOptions& options) {
  if (!(xmax > xmin) || !(ymax > ymin)) throw std::invalid_argument("degenerate rectangle");
  const cplx corners[4] = {{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}};
  auto path = [corners](double s) {
    const double u = 4.0 * (s - std::floor(s));
    const int side = std::min(3, static_cast<int>(u));
    const double t = u - side;
    return corners[side] + t * (corners[(side + 1) % 4] - corners[side]);
  };
  const double size = std::max(xmax - xmin, ymax - ymin);
  const double perimeter = 2.0 * ((xmax - xmin) + (ymax - ymin));
  // One side spans a quarter of the parameter range.
  const double floor_s = options.contour_floor * 0.5 * size / perimeter;
  PhaseTracker tracker(f, path, floor_s, options.max_evaluations);
  const std::size_t initial = 4 * std::max<std::size_t>(4, options.initial_samples / 4);
  const double turns = tracker.turns(initial);
  return finish(turns, tracker.evaluations(), 0.5 * size);
}

ZeroSet locate_zeros(const AnalyticFn& f, cplx center, double radius,
                     const LocateOptions& options) {
  if (std::abs(center) + radius > f.validity_radius) {
    throw std::invalid_argument("locate disk exceeds the function's validity radius");
  }
  const CountResult outer = count_zeros(f, center, radius, options.count);
  if (!outer.reliable) {
    throw LocatorError(LocatorErrorKind::NonConvergent, "unreliable winding on the outer disk");
  }
  if (outer.count == 0) return {};
  const double r = outer.radius_used;

  Locator locator(f, r, options);
  std::vector<Zero> found;
  bool done = false;
  for (int attempt = 0; attempt < 8 && !done; ++attempt) {
    const double half = r * (1.0 + 1e-3 * (1 + attempt));
    const Cell root{center.real() - half, center.real() + half, center.imag() - half,
                    center.imag() + half};
    long root_count = 0;
    try {
      root_count = locator.cell_count(root);
    } catch (const LocatorError& e) {
      if (e.kind() == LocatorErrorKind::ZeroOnContour) continue;
      throw;
    }
    found = locator.run(root, root_count);
    done = true;
  }
  if (!done) {
    throw LocatorError(LocatorErrorKind::ZeroOnContour, "could not place the root cell");
  }

  std::vector<Zero> inside;
  long total = 0;
  for (const Zero& z : found) {
    if (std::abs(z.location - center) < r) {
      inside.push_back(z);
      total += z.multiplicity;
    }
  }
  if (total != outer.count) {
    throw LocatorError(LocatorErrorKind::UnresolvedCluster,
                       "located " + std::to_string(total) + " zeros but the disk winds " +
                           std::to_string(outer.count) + " times");
  }
  return ZeroSet(std::move(inside));
}

JensenResult jensen_check(const AnalyticFn& f, double r, std::size_t initial_points) {
  auto log_abs = [&f](cplx z) {
    return f.log_value ? f.log_value(z).real() : std::log(std::abs(f(z)));
  };
  const double log_f0 = log_abs(cplx(0.0, 0.0));
  if (log_f0 == -std::numeric_limits<double>::infinity()) {
    throw LocatorError(LocatorErrorKind::ZeroAtOrigin, "Jensen check needs f(0) != 0");
  }
  try {
    count_zeros_exact_radius(f, 0.0, r);
  } catch (const LocatorError& e) {
    if (e.kind() == LocatorErrorKind::ZeroOnContour) {
      throw LocatorError(LocatorErrorKind::ZeroOnCircle, "zero on the Jensen circle");
    }
    throw;
  }

  auto log_mod = [&](std::size_t i, std::size_t n) {
    const double theta = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    return log_abs(std::polar(r, theta));
  };
  std::size_t n = std::max<std::size_t>(initial_points, 8);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += log_mod(i, n);
  double mean = sum / static_cast<double>(n);
  constexpr std::size_t kMaxPoints = std::size_t{1} << 22;
  while (true) {
    // Doubling reuses the previous nodes; only the new midpoints are evaluated.
    double added = 0.0;
    for (std::size_t i = 0; i < n; ++i) added += log_mod(2 * i + 1, 2 * n);
    sum += added;
    n *= 2;
    const double next = sum / static_cast<double>(n);
    const bool converged = std::abs(next - mean) <= 1e-10 * (1.0 + std::abs(next));
    mean = next;
    if (converged) break;
    if (n >= kMaxPoints) {
      throw LocatorError(LocatorErrorKind::NonConvergent, "Jensen quadrature did not converge");
    }
  }

  JensenResult out;
  out.quadrature_points = n;
  out.lhs = mean - log_f0;
  out.zeros = locate_zeros(f, 0.0, r);
  double rhs = 0.0;
  for (const Zero& z : out.zeros.entries()) {
    rhs += z.multiplicity * std::log(r / std::abs(z.location));
  }
  out.rhs = rhs;
  return out;
}

VerificationReport count_bound_check(const AnalyticFn& f, const ClassParams& params, double r) {
  VerificationReport rep;
  rep.check = "count_bound";
  const double r1 = constants::threshold_r1(params);
  rep.bound = constants::count_bound(params, r);
  rep.require("r >= r1", r >= r1, r1, r);
  rep.measure("r", r);
  if (r < r1) {
    rep.observed = std::numeric_limits<double>::quiet_NaN();
    rep.notes.push_back("radius below r1: count bound not asserted");
  } else {
    const CountResult count = count_zeros(f, 0.0, r);
    rep.observed = static_cast<double>(count.count);
    rep.samples = count.samples;
    rep.measure("winding_residual", count.winding_residual);
    rep.require("winding reliable", count.reliable, 0.25, count.winding_residual);
  }
  rep.finalize();
  return rep;
}

}  // namespace ratiolab::zeros
