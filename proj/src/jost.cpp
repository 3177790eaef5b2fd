#include "ratiolab/jost.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ratiolab/kernels.hpp"
#include "ratiolab/summation.hpp"

namespace ratiolab::jost {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const cplx kI{0.0, 1.0};

// Below this |z| h the closed form of a piece switches to its power series.
constexpr double kSeriesThreshold = 1.0;

// Log-integrand drop (relative to max(1, peak)) at which the quadrature
// range is cut; e^-45 ~ 3e-20.
constexpr double kTailDrop = 45.0;

double poly_at(const std::vector<double>& c, double s) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * s + c[i];
  return v;
}

// int_0^h P(s) e^{ws} ds for P(s) = sum c_i s^i.
cplx piece_integral(const std::vector<double>& c, double h, cplx w) {
  if (std::abs(w) * h <= kSeriesThreshold) {
    // sum_i c_i sum_n w^n / n! h^{n+i+1} / (n+i+1)
    CompensatedSum<cplx> total;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0.0) continue;
      cplx term = std::pow(h, static_cast<double>(i + 1));  // w^n h^{n+i+1} / n!
      CompensatedSum<cplx> s;
      for (int n = 0; n < 60; ++n) {
        const cplx add = term / static_cast<double>(n + static_cast<int>(i) + 1);
        s.add(add);
        if (std::abs(add) <= 1e-18 * std::abs(s.value())) break;
        term *= w * h / static_cast<double>(n + 1);
      }
      total.add(c[i] * s.value());
    }
    return total.value();
  }
  // Repeated integration by parts; exact for polynomials.
  std::vector<double> d = c;
  const cplx ewh = std::exp(w * h);
  cplx total = 0.0;
  cplx wpow = w;
  double sign = 1.0;
  while (!d.empty()) {
    total += sign * (poly_at(d, h) * ewh - d[0]) / wpow;
    std::vector<double> next;
    for (std::size_t i = 1; i < d.size(); ++i) next.push_back(static_cast<double>(i) * d[i]);
    d = std::move(next);
    wpow *= w;
    sign = -sign;
  }
  return total;
}

// Gauss-Kronrod 7/15 nodes and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  cplx value;
  double error;
  double abs_value;
};

template <typename F>
Panel gk15(const F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  std::array<cplx, 15> fv;
  fv[7] = f(mid);
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(mid - half * kXgk[i]);
    fv[14 - i] = f(mid + half * kXgk[i]);
  }
  cplx kron = kWgk[7] * fv[7];
  cplx gauss = kWg[3] * fv[7];
  double resabs = kWgk[7] * std::abs(fv[7]);
  for (int i = 0; i < 7; ++i) {
    kron += kWgk[i] * (fv[i] + fv[14 - i]);
    resabs += kWgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
  }
  const cplx mean = 0.5 * kron;
  double resasc = kWgk[7] * std::abs(fv[7] - mean);
  for (int i = 0; i < 7; ++i) {
    resasc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
  }
  double err = std::abs((kron - gauss) * half);
  resasc *= std::abs(half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {kron * half, err, resabs * std::abs(half)};
}

template <typename F>
cplx refine(const F& f, double a, double b, const Panel& panel, double tol, int depth) {
  // Stop at round-off level as well: halving cannot push the error below it.
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * panel.abs_value;
  if (panel.error <= std::max(tol, roundoff) || depth >= 24) return panel.value;
  const double m = 0.5 * (a + b);
  const Panel left = gk15(f, a, m);
  const Panel right = gk15(f, m, b);
  return refine(f, a, m, left, 0.5 * tol, depth + 1) +
         refine(f, m, b, right, 0.5 * tol, depth + 1);
}

// Integral of f over [a, b]: panels narrow enough for the oscillation
// frequency, then adaptive bisection to an absolute tolerance.
template <typename F>
cplx integrate(const F& f, const std::vector<double>& breaks, double frequency, double rel_tol) {
  struct Item {
    double a, b;
    Panel panel;
  };
  std::vector<Item> items;
  double abs_total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k];
    const double hi = breaks[k + 1];
    if (!(hi > lo)) continue;
    const double n_raw = std::ceil((hi - lo) * std::max(frequency, 1.0));
    const auto n = static_cast<std::size_t>(std::clamp(n_raw, 1.0, 2.0e5));
    for (std::size_t i = 0; i < n; ++i) {
      const double a = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
      const double b = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(n);
      Panel p = gk15(f, a, b);
      abs_total += p.abs_value;
      items.push_back({a, b, p});
    }
  }
  if (!std::isfinite(abs_total)) throw std::overflow_error("kernel integral overflows binary64");
  const double span = breaks.back() - breaks.front();
  const double abs_tol = rel_tol * std::max(1.0, abs_total);
  CompensatedSum<cplx> total;
  for (const Item& it : items) {
    total.add(refine(f, it.a, it.b, it.panel, abs_tol * (it.b - it.a) / span, 0));
  }
  return total.value();
}

// Smallest t >= t_from at which the decreasing function L drops to `level`.
template <typename L>
double first_below(const L& log_bound, double t_from, double level) {
  double lo = t_from;
  double hi = std::max(1.0, 2.0 * t_from);
  while (log_bound(hi) > level) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::domain_error("kernel integral does not decay");
  }
  for (int i = 0; i < 100 && hi - lo > 1e-12 * hi; ++i) {
    const double m = 0.5 * (lo + hi);
    (log_bound(m) > level ? lo : hi) = m;
  }
  return hi;
}

double golden_minimize(const std::function<double(double)>& f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 80 && b - a > 1e-10; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct LinearFit {
  double a = 0.0, b = 0.0, s = 0.0;  // y ~ a + b x1 + s x2
  double ssr = kInf;
};

// Least squares for y ~ a + b x1 + s x2 via normal equations on scaled columns.
LinearFit fit3(const std::vector<double>& x1, const std::vector<double>& x2,
               const std::vector<double>& y) {
  const std::size_t n = y.size();
  double scale[3] = {1.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    scale[1] = std::max(scale[1], std::abs(x1[i]));
    scale[2] = std::max(scale[2], std::abs(x2[i]));
  }
  if (scale[1] == 0.0) scale[1] = 1.0;
  if (scale[2] == 0.0) scale[2] = 1.0;
  double A[3][4] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const double row[3] = {1.0, x1[i] / scale[1], x2[i] / scale[2]};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) A[r][c] += row[r] * row[c];
      A[r][3] += row[r] * y[i];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    }
    std::swap(A[col], A[piv]);
    if (A[col][col] == 0.0) return {};
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double m = A[r][col] / A[col][col];
      for (int c = col; c < 4; ++c) A[r][c] -= m * A[col][c];
    }
  }
  LinearFit out;
  out.a = A[0][3] / A[0][0];
  out.b = A[1][3] / A[1][1] / scale[1];
  out.s = A[2][3] / A[2][2] / scale[2];
  out.ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (out.a + out.b * x1[i] + out.s * x2[i]);
    out.ssr += e * e;
  }
  return out;
}

}  // namespace

// --- Kernel ---------------------------------------------------------------

void Kernel::validate() const {
  switch (kind) {
    case KernelKind::PiecewisePolynomial:
      if (knots.size() < 2) throw std::invalid_argument("piecewise kernel needs two knots");
      if (coeffs.size() != knots.size() - 1) {
        throw std::invalid_argument("piecewise kernel needs one coefficient list per piece");
      }
      if (!(knots.front() >= 0.0)) throw std::invalid_argument("kernel knots must be >= 0");
      for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (!(knots[i + 1] > knots[i]) || !std::isfinite(knots[i + 1])) {
          throw std::invalid_argument("kernel knots must be finite and strictly increasing");
        }
      }
      for (const auto& c : coeffs) {
        if (c.empty()) throw std::invalid_argument("empty coefficient list");
        for (double v : c) {
          if (!std::isfinite(v)) throw std::invalid_argument("non-finite kernel coefficient");
        }
      }
      break;
    case KernelKind::SuperExponential:
      if (!(gamma > 1.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("super-exponential kernel needs gamma > 1");
      }
      if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("kernel needs C > 0");
      break;
    case KernelKind::Exponential:
      if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("exponential kernel needs beta > 0");
      }
      if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("kernel needs C > 0");
      if (T && !(*T > 0.0 && std::isfinite(*T))) {
        throw std::invalid_argument("kernel truncation must be positive");
      }
      break;
  }
}

double Kernel::operator()(double t) const {
  if (t < 0.0) return 0.0;
  switch (kind) {
    case KernelKind::PiecewisePolynomial: {
      if (t < knots.front() || t >= knots.back()) return 0.0;
      const auto it = std::upper_bound(knots.begin(), knots.end(), t);
      const auto j = static_cast<std::size_t>(it - knots.begin()) - 1;
      return poly_at(coeffs[j], t - knots[j]);
    }
    case KernelKind::SuperExponential:
      return C * std::exp(-std::pow(0.5 * t, gamma));
    case KernelKind::Exponential:
      if (T && t >= *T) return 0.0;
      return C * std::exp(-beta * t);
  }
  return 0.0;
}

double Kernel::at_zero() const { return (*this)(0.0); }

double Kernel::support_end() const {
  switch (kind) {
    case KernelKind::PiecewisePolynomial:
      return knots.back();
    case KernelKind::SuperExponential:
      return kInf;
    case KernelKind::Exponential:
      return T ? *T : kInf;
  }
  return kInf;
}

bool Kernel::compact() const { return std::isfinite(support_end()); }

double Kernel::convergence_margin() const {
  if (compact() || kind == KernelKind::SuperExponential) return kInf;
  return beta;
}

Kernel Kernel::constant(double value, double length) {
  return piecewise({0.0, length}, {{value}});
}

Kernel Kernel::piecewise(std::vector<double> knots, std::vector<std::vector<double>> coeffs) {
  Kernel k;
  k.kind = KernelKind::PiecewisePolynomial;
  k.knots = std::move(knots);
  k.coeffs = std::move(coeffs);
  k.validate();
  return k;
}

Kernel Kernel::super_exponential(double C, double gamma) {
  Kernel k;
  k.kind = KernelKind::SuperExponential;
  k.C = C;
  k.gamma = gamma;
  k.validate();
  return k;
}

Kernel Kernel::exponential(double C, double beta, std::optional<double> T) {
  Kernel k;
  k.kind = KernelKind::Exponential;
  k.C = C;
  k.beta = beta;
  k.T = T;
  k.validate();
  return k;
}

// --- JostFunction -----------------------------------------------------------

JostFunction::JostFunction(Kernel kernel, std::optional<Method> method, double tolerance)
    : kernel_(std::move(kernel)), tolerance_(tolerance) {
  kernel_.validate();
  const bool piecewise = kernel_.kind == KernelKind::PiecewisePolynomial;
  method_ = method.value_or(piecewise ? Method::ClosedForm : Method::Quadrature);
  if (method_ == Method::ClosedForm && !piecewise) {
    throw std::invalid_argument("closed form needs a piecewise-polynomial kernel");
  }
  if (!(tolerance_ > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
}

cplx JostFunction::deviation(cplx z) const {
  if (!(z.imag() > -kernel_.convergence_margin())) {
    throw std::domain_error("kernel integral diverges for Im z <= -beta");
  }
  return method_ == Method::ClosedForm ? closed_form(z) : quadrature(z);
}

cplx JostFunction::closed_form(cplx z) const {
  const cplx w = kI * z;
  CompensatedSum<cplx> sum;
  for (std::size_t j = 0; j + 1 < kernel_.knots.size(); ++j) {
    const double a = kernel_.knots[j];
    const double h = kernel_.knots[j + 1] - a;
    sum.add(std::exp(w * a) * piece_integral(kernel_.coeffs[j], h, w));
  }
  return sum.value();
}

cplx JostFunction::quadrature(cplx z) const {
  const Kernel& k = kernel_;
  const double y = z.imag();
  // Kernel and oscillating factor are combined in one exponent so that
  // e^{-Im z t} cannot overflow on its own.
  std::function<cplx(double)> integrand;
  if (k.kind == KernelKind::SuperExponential) {
    const double lnC = std::log(k.C);
    integrand = [&, lnC](double t) { return std::exp(lnC - std::pow(0.5 * t, k.gamma) + kI * z * t); };
  } else if (k.kind == KernelKind::Exponential) {
    const double lnC = std::log(k.C);
    integrand = [&, lnC](double t) { return std::exp(lnC + (kI * z - k.beta) * t); };
  } else {
    integrand = [&](double t) { return k(t) * std::exp(kI * z * t); };
  }

  std::vector<double> breaks;
  if (k.kind == KernelKind::PiecewisePolynomial) {
    breaks = k.knots;
  } else {
    const double lnC = std::log(k.C);
    double t_peak = 0.0;
    std::function<double(double)> log_bound;
    if (k.kind == KernelKind::SuperExponential) {
      const double g = k.gamma;
      log_bound = [=](double t) { return lnC - std::pow(0.5 * t, g) - y * t; };
      if (y < 0.0) t_peak = 2.0 * std::pow(-2.0 * y / g, 1.0 / (g - 1.0));
    } else {
      const double rate = k.beta + y;
      log_bound = [=](double t) { return lnC - rate * t; };
      if (rate <= 0.0) t_peak = k.T.value_or(kInf);
    }
    const double level = std::max(0.0, log_bound(t_peak)) - kTailDrop;
    double t_end = k.support_end();
    if (t_peak < t_end) t_end = std::min(t_end, first_below(log_bound, t_peak, level));
    breaks = {0.0};
    if (t_peak > 0.0 && t_peak < t_end) breaks.push_back(t_peak);
    breaks.push_back(t_end);
  }
  return integrate(integrand, breaks, std::abs(z), tolerance_);
}

zeros::AnalyticFn JostFunction::as_analytic() const {
  zeros::AnalyticFn f;
  const JostFunction self = *this;
  f.value = [self](cplx z) { return self(z); };
  f.validity_radius = kernel_.convergence_margin();
  return f;
}

// --- fits -------------------------------------------------------------------

RayFit ray_decay_fit(const Deviation& deviation, double angle, std::size_t samples, double rmin,
                     double rmax) {
  if (samples < 2 || !(rmin > 0.0) || !(rmax > rmin)) {
    throw std::invalid_argument("ray fit needs samples >= 2 and 0 < rmin < rmax");
  }
  std::vector<double> r(samples), d(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
    r[i] = rmin * std::pow(rmax / rmin, t);
    d[i] = std::abs(deviation(std::polar(r[i], angle)));
  }
  RayFit fit;
  fit.samples = samples;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < samples; ++i) {
    if (d[i] > 0.0) {
      lx.push_back(std::log(r[i]));
      ly.push_back(std::log(d[i]));
    }
  }
  if (lx.empty()) {
    fit.degenerate = true;
    fit.mu = kInf;
    fit.mu_raw = kInf;
    fit.C1 = 0.0;
    return fit;
  }
  if (lx.size() < 2) throw std::runtime_error("no decay: too few nonzero samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(lx.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.mu_raw = -sxy / sxx;
  fit.mu = 0.05 * std::floor(fit.mu_raw / 0.05 + 0.02);
  if (!(fit.mu > 0.0)) throw std::runtime_error("no decay: |psi - 1| does not decrease along the ray");
  for (std::size_t i = 0; i < samples; ++i) {
    fit.C1 = std::max(fit.C1, d[i] * std::pow(r[i], fit.mu));
  }
  return fit;
}

RayFit ray_decay_fit(const JostFunction& jost, double angle, std::size_t samples, double rmin,
                     double rmax) {
  return ray_decay_fit([&](cplx z) { return jost.deviation(z); }, angle, samples, rmin, rmax);
}

double max_modulus(const std::function<cplx(cplx)>& f, double r) {
  constexpr std::size_t n = 1024;
  std::vector<cplx> points(n);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) points[i] = std::polar(r, step * static_cast<double>(i));
  const kernels::SupResult coarse =
      kernels::sampled_sup(points, [&](cplx z) { return std::abs(f(z)); });
  // Golden-section refinement of the angle around the best node.
  const double theta0 = step * static_cast<double>(coarse.argmax);
  const double theta = golden_minimize(
      [&](double t) { return -std::abs(f(std::polar(r, t))); }, theta0 - step, theta0 + step);
  return std::max(coarse.value, std::abs(f(std::polar(r, theta))));
}

GrowthFit growth_fit(const std::function<cplx(cplx)>& f, const std::vector<double>& radii) {
  if (radii.size() < 4) throw std::invalid_argument("growth fit needs at least four radii");
  GrowthFit out;
  out.radii = radii;
  std::vector<double> lnM, lnr;
  bool trivial = true;
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("growth fit radii must be positive");
    const double M = max_modulus(f, r);
    out.max_modulus.push_back(M);
    lnM.push_back(std::log(M));
    lnr.push_back(std::log(r));
    trivial = trivial && std::abs(std::log(M)) < 1e-12;
  }
  if (trivial) {
    out.degenerate = true;
    out.C0 = *std::max_element(out.max_modulus.begin(), out.max_modulus.end());
    return out;
  }
  auto fit_at = [&](double rho) {
    std::vector<double> x2(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) x2[i] = std::pow(radii[i], rho);
    return fit3(lnr, x2, lnM);
  };
  double best_rho = 0.25;
  double best_ssr = kInf;
  for (int i = 0; i <= 75; ++i) {
    const double rho = 0.25 + 0.05 * i;
    const double ssr = fit_at(rho).ssr;
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best_rho = rho;
    }
  }
  const double rho = golden_minimize([&](double x) { return fit_at(x).ssr; },
                                     std::max(0.25, best_rho - 0.05), std::min(4.0, best_rho + 0.05));
  const LinearFit lf = fit_at(rho);
  out.rho = rho;
  out.sigma = lf.s;
  out.log_coefficient = lf.b;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    out.C0 = std::max(out.C0, out.max_modulus[i] * std::exp(-out.sigma * std::pow(radii[i], rho)));
  }
  return out;
}

GrowthFit growth_fit(const JostFunction& jost, const std::vector<double>& radii) {
  return growth_fit([&](cplx z) { return jost(z); }, radii);
}

Deviation remark6_deviation(const JostFunction& jost) {
  const double k0 = jost.kernel().at_zero();
  return [jost, k0](cplx z) {
    if (z == cplx(0.0, 0.0)) throw std::domain_error("transform undefined at the origin");
    return jost.deviation(z) + k0 / (kI * z);
  };
}

zeros::AnalyticFn remark6_transform(const JostFunction& jost) {
  zeros::AnalyticFn f;
  const Deviation dev = remark6_deviation(jost);
  f.value = [dev](cplx z) { return 1.0 + dev(z); };
  f.validity_radius = jost.kernel().convergence_margin();
  return f;
}

}  // namespace ratiolab::jost
