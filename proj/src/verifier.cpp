#include "ratiolab/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ratiolab/constants.hpp"
#include "ratiolab/kernels.hpp"
#include "ratiolab/primary_factors.hpp"

namespace ratiolab::verify {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

kernels::SupResult sup_over(const std::vector<cplx>& points, const kernels::PointFunction& f) {
  return kernels::sampled_sup(points, f);
}

void record_sup(VerificationReport& rep, const kernels::SupResult& s) {
  rep.observed = s.evaluated > 0 ? s.value : kNaN;
  rep.samples = s.evaluated;
  rep.excluded = s.excluded;
}

// psi2/psi1 - 1 from the difference of log branches (imaginary part reduced
// mod 2 pi), so it stays accurate where psi1, psi2 under- or overflow.
cplx ratio_minus_one(const Pair& pair, cplx z) {
  cplx d = pair.psi2.log_value(z) - pair.psi1.log_value(z);
  d.imag(std::remainder(d.imag(), 2.0 * std::numbers::pi));
  return factors::expm1(d);
}

// Pi1/Pi2 - 1 at z.
cplx product_ratio_minus_one(const Pair& pair, cplx z) {
  const cplx m1 = pair.psi1.tail_product_minus_one(pair.spec.R, z);
  const cplx m2 = pair.psi2.tail_product_minus_one(pair.spec.R, z);
  return (m1 - m2) / (1.0 + m2);
}

bool near_shared_zero(const Pair& pair, cplx z) {
  for (const Zero& s : pair.spec.shared.entries()) {
    if (std::abs(z - s.location) < 1e-4 * std::abs(s.location)) return true;
  }
  return false;
}

double finite_or_nan(double v) { return std::isfinite(v) ? v : kNaN; }

// Hypotheses shared by every Step-5/6 bound: measured ray decay of both
// functions on Delta and the zero-count bound beyond r1.
void require_class_measurements(VerificationReport& rep, const Pair& pair) {
  const double C1 = pair.spec.params.C1;
  rep.require("psi1 ray decay on Delta", pair.ray1.C1_measured <= C1, C1, pair.ray1.C1_measured);
  rep.require("psi2 ray decay on Delta", pair.ray2.C1_measured <= C1, C1, pair.ray2.C1_measured);
  rep.require("psi1 zero count for r >= r1", pair.count1.satisfied, 1.0, pair.count1.worst_ratio);
  rep.require("psi2 zero count for r >= r1", pair.count2.satisfied, 1.0, pair.count2.worst_ratio);
}

struct Step5Scalars {
  constants::ThresholdSet ts;
  double r = 0.0;      // R^{1-delta}
  double eta = 0.0;    // C1 / R^{mu(1-delta)}
  double eta2 = 0.0;   // C3 / R^mu
};

Step5Scalars step5_scalars(const Pair& pair) {
  const PairSpec& s = pair.spec;
  Step5Scalars out;
  out.ts = constants::thresholds_at(s.params, s.delta, pair.p);
  out.r = std::pow(s.R, 1.0 - s.delta);
  out.eta = s.params.C1 / std::pow(s.R, s.params.mu * (1.0 - s.delta));
  out.eta2 = out.ts.C3 / std::pow(s.R, s.params.mu);
  return out;
}

}  // namespace

VerificationReport check_lemma2(const ZeroSet& outer, double a, int p, double delta,
                                const ClassParams& params, double R, const grid::GridSpec& grid) {
  VerificationReport rep;
  rep.check = "lemma2";
  const constants::ThresholdSet ts = constants::thresholds_at(params, delta, p, a);
  rep.bound = 2.0 * ts.C2 * std::pow(a, p + 1) * std::pow(R, -params.mu);
  const double min_modulus = outer.min_modulus();
  const CountProfile count = count_profile(outer, params, R);
  rep.require("R >= r2", R >= ts.r2, ts.r2, R);
  rep.require("zeros outside B(0, R)", min_modulus >= R, R, min_modulus);
  rep.require("zero count for r >= R", count.satisfied, 1.0, count.worst_ratio);

  const double radius = a * std::pow(R, 1.0 - delta);
  rep.measure("disk_radius", radius);
  rep.measure("largest |z/z_n|", outer.empty() ? 0.0 : radius / min_modulus);
  rep.measure("guard_radius", factors::guard_radius(p));
  const auto points = grid::disk_points(radius, grid);
  record_sup(rep, sup_over(points, [&](cplx z) {
               return finite_or_nan(std::abs(model::product_minus_one(outer, p, z)));
             }));

  VerificationReport power;
  power.check = "lemma2.power_sum";
  power.bound = ts.C2 * std::pow(R, params.rho - p - 1);
  power.require("R >= r1", R >= ts.r1, ts.r1, R);
  power.require("zeros outside B(0, R)", min_modulus >= R, R, min_modulus);
  power.require("zero count for r >= R", count.satisfied, 1.0, count.worst_ratio);
  power.observed = min_modulus >= R ? factors::tail_power_sum(outer, p, R) : kNaN;
  power.samples = outer.size();
  rep.subchecks.push_back(std::move(power));
  rep.finalize();
  return rep;
}

VerificationReport check_lemma3(const std::vector<cplx>& g, double r, double C1, double mu,
                                int p, const grid::GridSpec& grid, double angle) {
  if (g.size() > static_cast<std::size_t>(p) + 1) {
    throw std::invalid_argument("polynomial degree exceeds p");
  }
  VerificationReport rep;
  rep.check = "lemma3";
  const constants::CofactorTable table = constants::vandermonde_cofactors(p);
  const double Ap = constants::constant_Ap(table, mu);
  const double eps = C1 * std::pow(r, -mu);
  rep.bound = 2.0 * eps * Ap;

  const auto segment = grid::segment_points(r, (p + 1) * r, angle, 2049);
  const kernels::SupResult seg = sup_over(segment, [&](cplx z) {
    return std::abs(factors::expm1(model::polyval(g, z))) * std::pow(std::abs(z), mu);
  });
  rep.require("segment decay |e^g - 1| <= C1 |z|^-mu", seg.value <= C1, C1, seg.value);
  rep.require("eps <= 1/2", eps <= 0.5, 0.5, eps);
  rep.require("eps A_p <= 1/4", eps * Ap <= 0.25, 0.25, eps * Ap);
  rep.measure("eps", eps);
  rep.measure("A_p", Ap);

  const auto points = grid::disk_points(r, grid);
  record_sup(rep, sup_over(points, [&](cplx z) {
               return finite_or_nan(std::abs(factors::expm1(model::polyval(g, z))));
             }));

  // Coefficients back from the node values: zeta_k is the principal log of
  // e^{g(k r e^{i angle})}, and b = V^{-1} zeta with V_kj = k^{j-1}.
  const int n = p + 1;
  std::vector<cplx> zeta(static_cast<std::size_t>(n));
  const cplx dir = std::polar(1.0, angle);
  for (int k = 1; k <= n; ++k) {
    const cplx v = model::polyval(g, static_cast<double>(k) * r * dir);
    zeta[static_cast<std::size_t>(k - 1)] = {v.real(), std::remainder(v.imag(), 2.0 * std::numbers::pi)};
  }
  const double W = table.determinant().convert_to<double>();
  for (int j = 1; j <= n; ++j) {
    cplx b = 0.0;
    for (int k = 1; k <= n; ++k) b += table.at(k, j).convert_to<double>() / W * zeta[static_cast<std::size_t>(k - 1)];
    const cplx a = b / std::pow(r * dir, j - 1);
    VerificationReport cramer;
    cramer.check = "lemma3.cramer.a" + std::to_string(j - 1);
    cramer.bound = eps * (1.0 + eps) * std::pow(r, 1 - j) * constants::cramer_weight(table, j, mu);
    cramer.observed = std::abs(a);
    cramer.samples = static_cast<std::size_t>(n);
    cramer.require("segment decay |e^g - 1| <= C1 |z|^-mu", seg.value <= C1, C1, seg.value);
    cramer.require("eps <= 1/2", eps <= 0.5, 0.5, eps);
    const cplx given = static_cast<std::size_t>(j - 1) < g.size() ? g[static_cast<std::size_t>(j - 1)] : cplx(0.0);
    cramer.measure("reconstruction_error", std::abs(a - given));
    rep.subchecks.push_back(std::move(cramer));
  }
  rep.finalize();
  return rep;
}

VerificationReport check_decomposition(const Pair& pair, const grid::GridSpec& grid) {
  VerificationReport rep;
  rep.check = "decomposition";
  rep.bound = 1e-10;
  const double radius = (pair.p + 1) * std::pow(pair.spec.R, 1.0 - pair.spec.delta);
  rep.measure("disk_radius", radius);
  const auto points = grid::disk_points(radius, grid);
  record_sup(rep, sup_over(points, [&](cplx z) {
               if (near_shared_zero(pair, z)) return kNaN;
               const cplx pi1 = pair.psi1.tail_product(pair.spec.R, z);
               const cplx pi2 = pair.psi2.tail_product(pair.spec.R, z);
               if (std::abs(pi2) == 0.0) return kNaN;
               const cplx lhs = factors::expm1(pair.psi2.exponent(z) - pair.psi1.exponent(z));
               const cplx q = pi1 / pi2;
               const cplx t1 = ratio_minus_one(pair, z) * q;
               const cplx t2 = q - 1.0;
               const double scale = 1.0 + std::abs(lhs) + std::abs(t1) + std::abs(t2);
               return finite_or_nan(std::abs(lhs - (t1 + t2)) / scale);
             }));
  rep.notes.push_back("discrepancy normalised by 1 + |lhs| + |terms|");
  rep.finalize();
  return rep;
}

std::vector<VerificationReport> check_step5_bounds(const Pair& pair, const grid::GridSpec& grid) {
  const Step5Scalars s = step5_scalars(pair);
  const PairSpec& spec = pair.spec;
  const double R = spec.R;
  const int p = pair.p;
  const auto segment = grid::segment_points(s.r, (p + 1) * s.r, spec.ray_angle, 2049);
  const auto big_disk = grid::disk_points((p + 1) * s.r, grid);
  const auto small_disk = grid::disk_points(s.r, grid);
  auto g_diff = [&](cplx z) {
    return factors::expm1(pair.psi2.exponent(z) - pair.psi1.exponent(z));
  };
  std::vector<VerificationReport> out;

  VerificationReport b;
  b.check = "step5.B";
  b.bound = (2.0 + 3.0 * s.eta) * s.eta;
  require_class_measurements(b, pair);
  b.require("eta <= 1/3", s.eta <= 1.0 / 3.0, 1.0 / 3.0, s.eta);
  record_sup(b, sup_over(segment, [&](cplx z) { return finite_or_nan(std::abs(ratio_minus_one(pair, z))); }));
  out.push_back(std::move(b));

  const kernels::SupResult pi_sup = sup_over(big_disk, [&](cplx z) {
    return finite_or_nan(std::abs(1.0 + product_ratio_minus_one(pair, z)));
  });
  const kernels::SupResult c_sup = sup_over(big_disk, [&](cplx z) {
    return finite_or_nan(std::abs(product_ratio_minus_one(pair, z)));
  });
  for (int which = 0; which < 2; ++which) {
    VerificationReport rep;
    rep.check = which == 0 ? "step5.Pi" : "step5.C";
    rep.bound = which == 0 ? 1.0 + 3.0 * s.eta2 : 3.0 * s.eta2;
    rep.require("R >= r3", R >= s.ts.r3, s.ts.r3, R);
    rep.require("eta2 <= 1/3", s.eta2 <= 1.0 / 3.0, 1.0 / 3.0, s.eta2);
    rep.require("psi1 zero count for r >= r1", pair.count1.satisfied, 1.0, pair.count1.worst_ratio);
    rep.require("psi2 zero count for r >= r1", pair.count2.satisfied, 1.0, pair.count2.worst_ratio);
    rep.measure("eta2", s.eta2);
    record_sup(rep, which == 0 ? pi_sup : c_sup);
    out.push_back(std::move(rep));
  }

  VerificationReport dseg;
  dseg.check = "step5.D.segment";
  dseg.bound = 9.0 * s.eta;
  require_class_measurements(dseg, pair);
  dseg.require("eta <= 1/3", s.eta <= 1.0 / 3.0, 1.0 / 3.0, s.eta);
  dseg.require("R >= r3", R >= s.ts.r3, s.ts.r3, R);
  dseg.require("eta2 <= eta (R >= r5)", s.eta2 <= s.eta, s.eta, s.eta2);
  record_sup(dseg, sup_over(segment, [&](cplx z) { return finite_or_nan(std::abs(g_diff(z))); }));
  out.push_back(dseg);

  VerificationReport ddisk;
  ddisk.check = "step5.D.disk";
  ddisk.bound = 18.0 * s.ts.Ap * s.eta;
  ddisk.preconditions = dseg.preconditions;
  ddisk.require("9 A_p eta <= 1/4 (R >= r4)", 9.0 * s.ts.Ap * s.eta <= 0.25, 0.25,
                9.0 * s.ts.Ap * s.eta);
  ddisk.measure("disk_radius", s.r);
  record_sup(ddisk, sup_over(small_disk, [&](cplx z) { return finite_or_nan(std::abs(g_diff(z))); }));
  out.push_back(std::move(ddisk));

  for (auto& rep : out) {
    rep.measure("eta", s.eta);
    rep.finalize();
  }
  return out;
}

VerificationReport check_theorem(const Pair& pair, double eps, const grid::GridSpec& grid) {
  const Step5Scalars s = step5_scalars(pair);
  const PairSpec& spec = pair.spec;
  const double exponent = spec.params.mu * (1.0 - spec.delta);
  const double decay = std::pow(spec.R, -exponent);

  auto ratio = [&](cplx z) {
    if (near_shared_zero(pair, z)) return kNaN;
    return finite_or_nan(std::abs(ratio_minus_one(pair, z)));
  };
  const kernels::SupResult coarse = sup_over(grid::disk_points(s.r, grid), ratio);
  const kernels::SupResult fine = sup_over(grid::disk_points(s.r, grid.refined()), ratio);
  const double hi = std::max(coarse.value, fine.value);
  const double change = hi > 0.0 ? std::abs(fine.value - coarse.value) / hi : 0.0;

  VerificationReport rep;
  rep.check = "theorem";
  rep.bound = 20.0 * s.ts.Ap * spec.params.C1 * decay;
  rep.observed = coarse.evaluated + fine.evaluated > 0 ? hi : kNaN;
  rep.samples = coarse.evaluated + fine.evaluated;
  rep.excluded = coarse.excluded + fine.excluded;
  const double rmax = s.ts.max_r();
  rep.require("R >= max(r1..r5)", spec.R >= rmax, rmax, spec.R);
  require_class_measurements(rep, pair);
  rep.require("grid refinement change < 1%", change < 0.01, 0.01, change);
  rep.measure("exponent mu(1-delta)", exponent);
  rep.measure("disk_radius", s.r);
  rep.measure("sup_coarse", coarse.value);
  rep.measure("sup_refined", fine.value);
  rep.notes.push_back("grid " + grid::to_string(grid) + " refined to " + grid::to_string(grid.refined()));

  VerificationReport eps_form;
  eps_form.check = "theorem.eps";
  eps_form.bound = eps * decay;
  eps_form.observed = rep.observed;
  eps_form.samples = rep.samples;
  eps_form.excluded = rep.excluded;
  const constants::R0Report r0 = constants::threshold_R0(eps, spec.delta, spec.params, spec.p);
  eps_form.require("R >= R0(eps)", spec.R >= r0.R0, r0.R0, spec.R);
  require_class_measurements(eps_form, pair);
  eps_form.require("grid refinement change < 1%", change < 0.01, 0.01, change);
  eps_form.measure("eps", eps);
  rep.subchecks.push_back(std::move(eps_form));
  rep.finalize();
  return rep;
}

VerificationReport check_remark5(const Pair& pair, double eps, std::size_t samples) {
  const Step5Scalars s = step5_scalars(pair);
  const PairSpec& spec = pair.spec;
  const double decay = std::pow(spec.R, -spec.params.mu * (1.0 - spec.delta));
  const auto segment = grid::segment_points(-s.r, s.r, 0.0, samples);
  const kernels::SupResult psi1_sup =
      sup_over(segment, [&](cplx z) { return finite_or_nan(std::abs(pair.psi1(z))); });
  const kernels::SupResult diff = sup_over(segment, [&](cplx z) {
    return finite_or_nan(std::abs(pair.psi2.minus_one(z) - pair.psi1.minus_one(z)));
  });

  VerificationReport rep;
  rep.check = "remark5";
  rep.bound = 20.0 * s.ts.Ap * spec.params.C1 * decay * psi1_sup.value;
  record_sup(rep, diff);
  const double rmax = s.ts.max_r();
  rep.require("R >= max(r1..r5)", spec.R >= rmax, rmax, spec.R);
  require_class_measurements(rep, pair);
  rep.require("psi1 bounded on the segment", std::isfinite(psi1_sup.value),
              std::numeric_limits<double>::max(), psi1_sup.value);
  rep.measure("sup |psi1| on segment", psi1_sup.value);

  VerificationReport eps_form;
  eps_form.check = "remark5.eps";
  eps_form.bound = eps * decay * psi1_sup.value;
  record_sup(eps_form, diff);
  const constants::R0Report r0 = constants::threshold_R0(eps, spec.delta, spec.params, spec.p);
  eps_form.require("R >= R0(eps)", spec.R >= r0.R0, r0.R0, spec.R);
  require_class_measurements(eps_form, pair);
  eps_form.require("psi1 bounded on the segment", std::isfinite(psi1_sup.value),
                   std::numeric_limits<double>::max(), psi1_sup.value);
  rep.subchecks.push_back(std::move(eps_form));
  rep.finalize();
  return rep;
}

std::vector<PlotRow> theorem_profile(const Pair& pair, const grid::GridSpec& grid, int steps) {
  const Step5Scalars s = step5_scalars(pair);
  const double bound = 20.0 * s.ts.Ap * pair.spec.params.C1 *
                       std::pow(pair.spec.R, -pair.spec.params.mu * (1.0 - pair.spec.delta));
  std::vector<PlotRow> rows;
  for (int i = 1; i <= steps; ++i) {
    const double r = s.r * i / steps;
    const kernels::SupResult sup = sup_over(grid::disk_points(r, grid), [&](cplx z) {
      if (near_shared_zero(pair, z)) return kNaN;
      return finite_or_nan(std::abs(ratio_minus_one(pair, z)));
    });
    rows.push_back({r, bound, sup.value});
  }
  return rows;
}

}  // namespace ratiolab::verify
