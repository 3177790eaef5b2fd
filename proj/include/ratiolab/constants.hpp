#pragma once

// Explicit constants of the ratio-stability estimate.
//
// Everything here is a pure function of ClassParams and the exponents
// (delta, eps). Vandermonde determinants and cofactors are exact integers;
// floating point enters only at the k^-mu weighting and in the thresholds.

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ratiolab/class_params.hpp"

namespace ratiolab::constants {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Largest genus the engine accepts. Beyond this the thresholds leave the
/// binary64 range for any realistic parameters.
inline constexpr int kMaxGenus = 20;

/// Smallest p with (mu+rho)/delta <= p+1, raised to max(p, floor(rho), 1).
/// Values of (mu+rho)/delta within 1e-12 (relative) of an integer are
/// snapped onto it, so delta = 2/3 behaves like the exact fraction.
int select_p(double rho, double mu, double delta);

/// alpha = delta (p+1) - rho, the decay exponent of the tail product.
double tail_exponent(int p, double rho, double delta);

double threshold_c(const ClassParams& params);
double threshold_r1(const ClassParams& params);

/// 2 sigma (2e)^rho r^rho: the zero-count bound valid for r >= r1.
double count_bound(const ClassParams& params, double r);

/// 2 sigma (p+1) (2e)^rho / (p+1-rho). Throws std::domain_error if p+1 <= rho.
double constant_C2(int p, double sigma, double rho);

/// max(r1, (a(p+1)/p)^{1/delta}, (C2 a^{p+1} / ln 2)^{1/mu}).
double threshold_r2(double a, int p, double delta, const ClassParams& params);

struct LateThresholds {
  double r3 = 0.0;
  double r4 = 0.0;
  double r5 = 0.0;
  double C3 = 0.0;  // 2 C2 (p+1)^{p+1}
};

/// r3, r4, r5 and C3. `a` defaults to p+1 (the disk scale used by r2 inside r3).
LateThresholds thresholds_r3_r4_r5(int p, double delta, const ClassParams& params,
                                   std::optional<double> a = std::nullopt);

// Cofactors of the (p+1)x(p+1) Vandermonde matrix c_kj = k^{j-1}, k, j = 1..p+1.
class CofactorTable {
 public:
  CofactorTable(int size, std::vector<BigInt> entries, BigInt determinant);

  int size() const { return size_; }
  int genus() const { return size_ - 1; }
  /// Cofactor of row k, column j (both 1-based).
  const BigInt& at(int k, int j) const;
  const BigInt& determinant() const { return determinant_; }

  /// |W_kj| / W rounded to binary64.
  double abs_ratio(int k, int j) const;

 private:
  int size_;
  std::vector<BigInt> entries_;  // row-major
  BigInt determinant_;
};

/// Exact Vandermonde determinant on nodes 1..p+1 via Bareiss fraction-free
/// elimination. Throws std::out_of_range outside 1 <= p <= kMaxGenus.
BigInt vandermonde_determinant(int p);

/// 1! 2! ... p!
BigInt superfactorial(int p);

/// Exact cofactor table. Throws std::out_of_range outside 1 <= p <= kMaxGenus.
CofactorTable vandermonde_cofactors(int p);

/// A_p = (1/W) sum_k sum_j |W_kj| j^{-mu}: the column index carries the weight.
double constant_Ap(const CofactorTable& table, double mu);
double constant_Ap(int p, double mu);

/// (1/W) sum_k |W_kj| k^{-mu}: Cramer bound factor for coefficient a_{j-1}.
double cramer_weight(const CofactorTable& table, int j, double mu);

/// sum_j cramer_weight(j): the row-weighted counterpart of A_p.
double cramer_sum(const CofactorTable& table, double mu);

struct RationalInterval {
  Rational lo;
  Rational hi;
};

/// Rigorous enclosure of A_p for rational mu = mu_num / mu_den. Exact when
/// mu_den == 1; otherwise k^{-mu} is bracketed with integer roots at
/// `digits` decimal digits.
RationalInterval Ap_interval(int p, long mu_num, long mu_den, int digits = 30);

/// Exact mu (1 - delta), the exponent of R in the final ratio bound.
Rational ratio_exponent(const Rational& mu, const Rational& delta);

// Thresholds at one delta with a fixed disk scale.
struct ThresholdSet {
  int p = 0;
  double a = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  double c = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double r4 = 0.0;
  double r5 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double Ap = 0.0;
  BigInt W;

  double max_r() const;
};

/// Thresholds at `delta` with genus `p` (defaults to select_p) and a = p+1
/// unless given.
ThresholdSet thresholds_at(const ClassParams& params, double delta,
                           std::optional<int> p = std::nullopt,
                           std::optional<double> a = std::nullopt);

// Two-stage threshold: the eps-dependent stage runs at delta1 = delta/2.
struct R0Report {
  double delta1 = 0.0;
  ThresholdSet outer;       // at delta
  ThresholdSet inner;       // at delta1, a = p(delta1)+1
  double C_tilde = 0.0;     // 20 A_{p(delta1)} C1
  double inner_max = 0.0;   // max(r1..r5) at delta1
  double eps_term = 0.0;    // (C_tilde/eps)^{1/(mu (delta - delta1))}
  double Rprime = 0.0;
  double R0 = 0.0;
};

R0Report threshold_R0(double eps, double delta, const ClassParams& params,
                      std::optional<int> p_override = std::nullopt,
                      std::optional<double> a = std::nullopt);

// Everything the `constants` subcommand reports.
struct DerivedConstants {
  ClassParams params;
  double delta = 0.0;
  double eps = 0.0;
  int p = 0;
  double a = 0.0;
  double alpha = 0.0;
  double c = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double r4 = 0.0;
  double r5 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  BigInt W;
  double Ap = 0.0;
  double Rprime = 0.0;
  double R0 = 0.0;
  double ratio_exponent = 0.0;  // mu (1 - delta)
  R0Report stages;
  std::vector<std::string> warnings;
};

DerivedConstants derive_constants(const ClassParams& params, double delta, double eps,
                                  std::optional<double> a = std::nullopt,
                                  std::optional<int> p_override = std::nullopt);

}  // namespace ratiolab::constants
