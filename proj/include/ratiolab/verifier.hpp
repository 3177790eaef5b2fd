#pragma once

// Pairs psi1, psi2 whose zeros coincide in B(0, R), and sampled checks of
// every inequality in the ratio estimate.

#include <cstdint>
#include <optional>
#include <vector>

#include "ratiolab/class_params.hpp"
#include "ratiolab/disk_grid.hpp"
#include "ratiolab/entire_model.hpp"
#include "ratiolab/report.hpp"
#include "ratiolab/zero_set.hpp"

namespace ratiolab::verify {

struct PairSpec {
  ZeroSet shared;   // all moduli < R
  ZeroSet outer_a;  // zeros of psi1 outside: moduli >= R
  ZeroSet outer_b;  // zeros of psi2 outside
  double R = 0.0;
  double delta = 0.5;
  ClassParams params;
  double ray_angle = 0.0;
  std::optional<int> p;  // genus; select_p(rho, mu, delta) when absent
  std::vector<cplx> g1;
  std::vector<cplx> g2;

  /// Throws std::invalid_argument when a zero sits on the wrong side of R
  /// or the numeric fields are out of range.
  void validate() const;
  int genus() const;
};

// Largest n(r) / bound(r) over r >= r_from for a zero multiset.
struct CountProfile {
  bool satisfied = true;
  double worst_ratio = 0.0;  // max n(r) / (2 sigma (2e)^rho r^rho)
  double worst_radius = 0.0;
};

/// n(r) <= 2 sigma (2e)^rho r^rho for every r >= r_from. n is piecewise
/// constant, so only r_from and the zero moduli need checking.
CountProfile count_profile(const ZeroSet& zeros, const ClassParams& params, double r_from);

// sup over the ray window of |psi - 1| |z|^mu, i.e. the smallest C1 for
// which the decay bound holds at the samples.
struct RayWindow {
  double t0 = 0.0;
  double t1 = 0.0;
  double C1_measured = 0.0;
  std::optional<double> mu_fit;  // ray_decay_fit over the window, if it found decay
  std::optional<double> C1_fit;
};

RayWindow measure_ray_window(const model::EntireModel& f, double angle, double t0, double t1,
                             double mu, std::size_t samples = 1024);

struct Pair {
  PairSpec spec;
  int p = 0;
  model::EntireModel psi1;
  model::EntireModel psi2;
  RayWindow ray1;  // measured on Delta = [R^{1-delta}, (p+1) R^{1-delta}]
  RayWindow ray2;
  CountProfile count1;  // for r >= r1
  CountProfile count2;
};

/// psi1 = canonical product over shared+outer_a, psi2 over shared+outer_b.
/// Throws std::runtime_error("count bound violated at r = ...") when either
/// zero set breaks n(r) <= 2 sigma (2e)^rho r^rho for some r >= r1.
Pair build_pair(const PairSpec& spec);

/// Small-constant preset: C0 = 1, C1 = 1e-3, rho = 1, sigma = 1e-3, mu = 2,
/// r0 = 1, delta = 0.9, genus 3. Two shared zeros with moduli in [120, 127]
/// and [185, 199]; outer zeros at moduli (k/kappa)(1 + 0.3 U) with random
/// arguments, k = 3..(outer_count+2), kappa = 2 sigma (2e)^rho.
PairSpec engineered_spec(std::uint64_t seed, double R = 200.0, std::size_t outer_count = 200);
ClassParams engineered_params();
inline constexpr double kEngineeredDelta = 0.9;

/// A generic random pair for identity tests: genus 1..3, shared zeros
/// anywhere in B(0, R), random small polynomial parts.
PairSpec random_spec(std::uint64_t seed);

/// Random degree-<=p polynomial whose segment bound |e^g - 1| <= C1 |z|^-mu
/// on [r, (p+1) r] holds by a random margin (rescaled from a random draw;
/// the check still measures it).
std::vector<cplx> random_admissible_polynomial(std::uint64_t seed, int p, double r, double C1,
                                               double mu, double angle = 0.0);

VerificationReport check_lemma2(const ZeroSet& outer, double a, int p, double delta,
                                const ClassParams& params, double R, const grid::GridSpec& grid);

VerificationReport check_lemma3(const std::vector<cplx>& g, double r, double C1, double mu,
                                int p, const grid::GridSpec& grid, double angle = 0.0);

VerificationReport check_decomposition(const Pair& pair, const grid::GridSpec& grid);

/// Reports for (B), (Pi), (C), the segment bound 9 eta and the disk bound (D).
std::vector<VerificationReport> check_step5_bounds(const Pair& pair, const grid::GridSpec& grid);

/// Ratio bound 20 A_p C1 R^{-mu(1-delta)} on B(0, R^{1-delta}), with the eps
/// form eps R^{-mu(1-delta)} (hypothesis R >= R0) as a subcheck.
VerificationReport check_theorem(const Pair& pair, double eps, const grid::GridSpec& grid);

/// |psi2 - psi1| on the real segment [-R^{1-delta}, R^{1-delta}].
VerificationReport check_remark5(const Pair& pair, double eps, std::size_t samples = 4097);

// (r, bound, observed) rows: the ratio check repeated on nested disks.
struct PlotRow {
  double r;
  double bound;
  double observed;
};
std::vector<PlotRow> theorem_profile(const Pair& pair, const grid::GridSpec& grid,
                                     int steps = 16);

}  // namespace ratiolab::verify
