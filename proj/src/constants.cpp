#include "ratiolab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ratiolab/summation.hpp"

namespace ratiolab::constants {

namespace {

constexpr double kE = std::numbers::e;

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
}

void check_genus(int p) {
  if (p < 1 || p > kMaxGenus) {
    throw std::out_of_range("genus p=" + std::to_string(p) +
                            " outside supported range [1, " +
                            std::to_string(kMaxGenus) + "]");
  }
}

using Matrix = std::vector<std::vector<BigInt>>;

Matrix vandermonde_matrix(int n) {
  Matrix m(n, std::vector<BigInt>(n));
  for (int k = 0; k < n; ++k) {
    BigInt power = 1;
    for (int j = 0; j < n; ++j) {
      m[k][j] = power;
      power *= (k + 1);
    }
  }
  return m;
}

// Bareiss elimination; every division is exact.
BigInt bareiss_determinant(Matrix m) {
  const int n = static_cast<int>(m.size());
  BigInt prev_pivot = 1;
  int sign = 1;
  for (int i = 0; i < n - 1; ++i) {
    if (m[i][i] == 0) {
      int swap_row = -1;
      for (int r = i + 1; r < n; ++r) {
        if (m[r][i] != 0) {
          swap_row = r;
          break;
        }
      }
      if (swap_row < 0) return 0;
      std::swap(m[i], m[swap_row]);
      sign = -sign;
    }
    for (int r = i + 1; r < n; ++r) {
      for (int c = i + 1; c < n; ++c) {
        m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) / prev_pivot;
      }
    }
    prev_pivot = m[i][i];
  }
  return sign * m[n - 1][n - 1];
}

// floor(v^{1/n}) for v >= 0.
BigInt integer_root(const BigInt& v, int n) {
  if (v < 2) return v;
  const unsigned bits = boost::multiprecision::msb(v) + 1;
  BigInt x = BigInt(1) << ((bits + n - 1) / n + 1);  // over-estimate
  while (true) {
    BigInt y = ((n - 1) * x + v / boost::multiprecision::pow(x, n - 1)) / n;
    if (y >= x) break;
    x = y;
  }
  while (boost::multiprecision::pow(x, n) > v) --x;
  while (boost::multiprecision::pow(x + 1, n) <= v) ++x;
  return x;
}

BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

}  // namespace

int select_p(double rho, double mu, double delta) {
  if (!(rho > 0.0) || !(mu > 0.0)) {
    throw std::invalid_argument("rho and mu must be positive");
  }
  check_delta(delta);
  const double x = (mu + rho) / delta;
  const double nearest = std::round(x);
  const double snapped =
      std::abs(x - nearest) <= 1e-12 * std::max(1.0, std::abs(x)) ? nearest : x;
  const double p_plus_1 = std::ceil(snapped);
  int p = static_cast<int>(p_plus_1) - 1;
  p = std::max({p, static_cast<int>(std::floor(rho)), 1});
  return p;
}

double tail_exponent(int p, double rho, double delta) {
  return delta * (p + 1) - rho;
}

double threshold_c(const ClassParams& params) {
  params.validate();
  return std::max(params.r0, std::pow(2.0 * params.C1, 1.0 / params.mu));
}

double threshold_r1(const ClassParams& params) {
  const double c = threshold_c(params);
  const double log_term = std::log(2.0 * params.C0);
  const double growth_term =
      log_term > 0.0
          ? std::pow(log_term / params.sigma, 1.0 / params.rho) / (2.0 * kE)
          : 0.0;
  return std::max(c, growth_term);
}

double count_bound(const ClassParams& params, double r) {
  return 2.0 * params.sigma * std::pow(2.0 * kE, params.rho) *
         std::pow(r, params.rho);
}

double constant_C2(int p, double sigma, double rho) {
  if (p + 1 <= rho) {
    throw std::domain_error("constant C2 needs p+1 > rho (genus too small)");
  }
  return 2.0 * sigma * (p + 1) * std::pow(2.0 * kE, rho) / (p + 1 - rho);
}

double threshold_r2(double a, int p, double delta, const ClassParams& params) {
  if (!(a > 0.0)) throw std::invalid_argument("disk scale a must be positive");
  if (p < 1) throw std::invalid_argument("genus p must be >= 1");
  check_delta(delta);
  const double r1 = threshold_r1(params);
  const double c2 = constant_C2(p, params.sigma, params.rho);
  const double guard = std::pow(a * (p + 1) / p, 1.0 / delta);
  const double small_w =
      std::pow(c2 * std::pow(a, p + 1) / std::numbers::ln2, 1.0 / params.mu);
  return std::max({r1, guard, small_w});
}

LateThresholds thresholds_r3_r4_r5(int p, double delta, const ClassParams& params,
                                   std::optional<double> a) {
  const double scale = a.value_or(p + 1.0);
  const double r2 = threshold_r2(scale, p, delta, params);
  const double c2 = constant_C2(p, params.sigma, params.rho);
  const double pp = std::pow(p + 1.0, p + 1.0);
  const double mu = params.mu;

  LateThresholds out;
  out.C3 = 2.0 * c2 * pp;
  out.r3 = std::max(r2, std::pow(6.0 * c2 * pp, 1.0 / mu));
  out.r4 = std::pow(36.0 * params.C1 * constant_Ap(p, mu), 1.0 / (mu * (1.0 - delta)));
  out.r5 = std::pow(2.0 * pp * c2 / params.C1, 1.0 / (mu * delta));
  return out;
}

CofactorTable::CofactorTable(int size, std::vector<BigInt> entries, BigInt determinant)
    : size_(size), entries_(std::move(entries)), determinant_(std::move(determinant)) {
  if (static_cast<int>(entries_.size()) != size_ * size_) {
    throw std::invalid_argument("cofactor table has wrong number of entries");
  }
}

const BigInt& CofactorTable::at(int k, int j) const {
  if (k < 1 || k > size_ || j < 1 || j > size_) {
    throw std::out_of_range("cofactor index out of range");
  }
  return entries_[static_cast<std::size_t>((k - 1) * size_ + (j - 1))];
}

double CofactorTable::abs_ratio(int k, int j) const {
  const Rational ratio(abs_big(at(k, j)), determinant_);
  return ratio.convert_to<double>();
}

BigInt vandermonde_determinant(int p) {
  check_genus(p);
  return bareiss_determinant(vandermonde_matrix(p + 1));
}

BigInt superfactorial(int p) {
  BigInt product = 1;
  BigInt factorial = 1;
  for (int k = 1; k <= p; ++k) {
    factorial *= k;
    product *= factorial;
  }
  return product;
}

CofactorTable vandermonde_cofactors(int p) {
  check_genus(p);
  const int n = p + 1;
  const Matrix v = vandermonde_matrix(n);
  const BigInt det = bareiss_determinant(v);

  // Exact Gauss-Jordan inverse over the rationals; cofactor(k, j) = W (V^{-1})_{jk}.
  std::vector<std::vector<Rational>> aug(n, std::vector<Rational>(2 * n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug[r][c] = Rational(v[r][c]);
    aug[r][n + r] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (aug[pivot][col] == 0) ++pivot;
    std::swap(aug[col], aug[pivot]);
    const Rational inv = 1 / aug[col][col];
    for (auto& x : aug[col]) x *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || aug[r][col] == 0) continue;
      const Rational factor = aug[r][col];
      for (int c = col; c < 2 * n; ++c) aug[r][c] -= factor * aug[col][c];
    }
  }

  std::vector<BigInt> entries(static_cast<std::size_t>(n * n));
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const Rational value = Rational(det) * aug[j][n + k];
      if (boost::multiprecision::denominator(value) != 1) {
        throw std::logic_error("non-integral Vandermonde cofactor");
      }
      entries[static_cast<std::size_t>(k * n + j)] = boost::multiprecision::numerator(value);
    }
  }
  return CofactorTable(n, std::move(entries), det);
}

double constant_Ap(const CofactorTable& table, double mu) {
  const int n = table.size();
  CompensatedSum<double> sum;
  for (int j = 1; j <= n; ++j) {
    const double weight = std::pow(static_cast<double>(j), -mu);
    for (int k = 1; k <= n; ++k) sum.add(table.abs_ratio(k, j) * weight);
  }
  return sum.value();
}

double constant_Ap(int p, double mu) { return constant_Ap(vandermonde_cofactors(p), mu); }

double cramer_weight(const CofactorTable& table, int j, double mu) {
  CompensatedSum<double> sum;
  for (int k = 1; k <= table.size(); ++k) {
    sum.add(table.abs_ratio(k, j) * std::pow(static_cast<double>(k), -mu));
  }
  return sum.value();
}

double cramer_sum(const CofactorTable& table, double mu) {
  CompensatedSum<double> sum;
  for (int j = 1; j <= table.size(); ++j) sum.add(cramer_weight(table, j, mu));
  return sum.value();
}

RationalInterval Ap_interval(int p, long mu_num, long mu_den, int digits) {
  if (mu_num <= 0 || mu_den <= 0) {
    throw std::invalid_argument("Ap_interval needs a positive rational mu");
  }
  const CofactorTable table = vandermonde_cofactors(p);
  const int n = table.size();
  const BigInt scale = boost::multiprecision::pow(BigInt(10), digits);

  RationalInterval out{0, 0};
  for (int j = 1; j <= n; ++j) {
    // j^{-mu} = 1 / (j^{mu_num})^{1/mu_den}
    const BigInt base = boost::multiprecision::pow(BigInt(j), static_cast<unsigned>(mu_num));
    Rational w_lo;
    Rational w_hi;
    if (mu_den == 1) {
      w_lo = w_hi = Rational(1, base);
    } else {
      const BigInt scaled = base * boost::multiprecision::pow(scale, static_cast<unsigned>(mu_den));
      const BigInt root = integer_root(scaled, static_cast<int>(mu_den));
      if (boost::multiprecision::pow(root, static_cast<unsigned>(mu_den)) == scaled) {
        w_lo = w_hi = Rational(scale, root);
      } else {
        w_lo = Rational(scale, root + 1);
        w_hi = Rational(scale, root);
      }
    }
    BigInt column = 0;
    for (int k = 1; k <= n; ++k) column += abs_big(table.at(k, j));
    const Rational column_ratio(column, table.determinant());
    out.lo += column_ratio * w_lo;
    out.hi += column_ratio * w_hi;
  }
  return out;
}

Rational ratio_exponent(const Rational& mu, const Rational& delta) {
  return mu * (Rational(1) - delta);
}

double ThresholdSet::max_r() const { return std::max({r1, r2, r3, r4, r5}); }

ThresholdSet thresholds_at(const ClassParams& params, double delta, std::optional<int> p,
                           std::optional<double> a) {
  params.validate();
  check_delta(delta);
  ThresholdSet t;
  t.p = p.value_or(select_p(params.rho, params.mu, delta));
  check_genus(t.p);
  t.a = a.value_or(t.p + 1.0);
  t.delta = delta;
  t.alpha = tail_exponent(t.p, params.rho, delta);
  t.c = threshold_c(params);
  t.r1 = threshold_r1(params);
  t.r2 = threshold_r2(t.a, t.p, delta, params);
  const LateThresholds late = thresholds_r3_r4_r5(t.p, delta, params, t.a);
  t.r3 = late.r3;
  t.r4 = late.r4;
  t.r5 = late.r5;
  t.C3 = late.C3;
  t.C2 = constant_C2(t.p, params.sigma, params.rho);
  const CofactorTable table = vandermonde_cofactors(t.p);
  t.Ap = constant_Ap(table, params.mu);
  t.W = table.determinant();
  return t;
}

R0Report threshold_R0(double eps, double delta, const ClassParams& params,
                      std::optional<int> p_override, std::optional<double> a) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("eps must be positive");
  }
  check_delta(delta);
  R0Report rep;
  rep.delta1 = delta / 2.0;
  rep.outer = thresholds_at(params, delta, p_override, a);
  rep.inner = thresholds_at(params, rep.delta1);
  rep.C_tilde = 20.0 * rep.inner.Ap * params.C1;
  rep.inner_max = rep.inner.max_r();
  rep.eps_term =
      std::pow(rep.C_tilde / eps, 1.0 / (params.mu * (delta - rep.delta1)));
  rep.Rprime = std::max(rep.inner_max, rep.eps_term);
  rep.R0 = std::max(rep.outer.max_r(), rep.Rprime);
  return rep;
}

DerivedConstants derive_constants(const ClassParams& params, double delta, double eps,
                                  std::optional<double> a, std::optional<int> p_override) {
  DerivedConstants d;
  d.params = params;
  d.delta = delta;
  d.eps = eps;
  d.stages = threshold_R0(eps, delta, params, p_override, a);
  const ThresholdSet& t = d.stages.outer;
  d.p = t.p;
  d.a = t.a;
  d.alpha = t.alpha;
  d.c = t.c;
  d.r1 = t.r1;
  d.r2 = t.r2;
  d.r3 = t.r3;
  d.r4 = t.r4;
  d.r5 = t.r5;
  d.C2 = t.C2;
  d.C3 = t.C3;
  d.W = t.W;
  d.Ap = t.Ap;
  d.Rprime = d.stages.Rprime;
  d.R0 = d.stages.R0;
  d.ratio_exponent = params.mu * (1.0 - delta);

  if (p_override) {
    const int strict = select_p(params.rho, params.mu, delta);
    if (*p_override != strict) {
      d.warnings.push_back("p overridden to " + std::to_string(*p_override) +
                           " (strict rule gives " + std::to_string(strict) + ")");
    }
    if (d.alpha < params.mu) {
      const bool relaxed = d.alpha >= params.mu * (1.0 - delta);
      d.warnings.push_back(std::string("alpha = delta(p+1) - rho is below mu") +
                           (relaxed ? "; relaxed condition alpha >= mu(1-delta) holds"
                                    : "; relaxed condition alpha >= mu(1-delta) also fails"));
    }
  }
  const std::pair<const char*, double> named[] = {
      {"c", d.c},   {"r1", d.r1}, {"r2", d.r2},         {"r3", d.r3},
      {"r4", d.r4}, {"r5", d.r5}, {"Rprime", d.Rprime}, {"R0", d.R0},
      {"C2", d.C2}, {"C3", d.C3}, {"Ap", d.Ap}};
  for (const auto& [name, value] : named) {
    if (!std::isfinite(value)) {
      d.warnings.push_back(std::string("threshold exceeds representable range: ") + name);
    }
  }
  return d;
}

}  // namespace ratiolab::constants
