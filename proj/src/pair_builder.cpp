#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "ratiolab/constants.hpp"
#include "ratiolab/jost.hpp"
#include "ratiolab/verifier.hpp"

namespace ratiolab::verify {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

cplx random_direction(std::mt19937_64& rng) {
  return std::polar(1.0, 2.0 * std::numbers::pi * unit(rng));
}

cplx random_in_unit_disk(std::mt19937_64& rng) {
  const double r = std::sqrt(unit(rng));
  return r * random_direction(rng);
}

}  // namespace

void PairSpec::validate() const {
  params.validate();
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("R must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  for (const Zero& z : shared.entries()) {
    if (!(std::abs(z.location) < R)) {
      throw std::invalid_argument("shared zero outside B(0, R)");
    }
  }
  if (outer_a.min_modulus() < R || outer_b.min_modulus() < R) {
    throw std::invalid_argument("outer zero inside B(0, R)");
  }
  if (p && (*p < 1 || *p > constants::kMaxGenus)) throw std::invalid_argument("genus out of range");
  const auto deg_limit = static_cast<std::size_t>(genus()) + 1;
  if (g1.size() > deg_limit || g2.size() > deg_limit) {
    throw std::invalid_argument("polynomial part has degree above the genus");
  }
}

int PairSpec::genus() const {
  return p.value_or(constants::select_p(params.rho, params.mu, delta));
}

CountProfile count_profile(const ZeroSet& zeros, const ClassParams& params, double r_from) {
  CountProfile out;
  auto consider = [&](double r, long n) {
    const double ratio = static_cast<double>(n) / constants::count_bound(params, r);
    if (ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      out.worst_radius = r;
    }
  };
  consider(r_from, zeros.count_below(r_from));
  long seen = 0;
  const auto entries = zeros.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    seen += entries[i].multiplicity;
    const double m = std::abs(entries[i].location);
    const bool last_at_modulus = i + 1 == entries.size() || std::abs(entries[i + 1].location) > m;
    // Just above m the count includes every zero of modulus <= m.
    if (last_at_modulus && m >= r_from) consider(m, seen);
  }
  out.satisfied = out.worst_ratio <= 1.0;
  return out;
}

RayWindow measure_ray_window(const model::EntireModel& f, double angle, double t0, double t1,
                             double mu, std::size_t samples) {
  RayWindow w;
  w.t0 = t0;
  w.t1 = t1;
  const cplx dir = std::polar(1.0, angle);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(samples - 1);
    w.C1_measured = std::max(w.C1_measured, std::abs(f.minus_one(t * dir)) * std::pow(t, mu));
  }
  try {
    const jost::RayFit fit =
        jost::ray_decay_fit([&](cplx z) { return f.minus_one(z); }, angle, 64, t0, t1);
    if (!fit.degenerate) {
      w.mu_fit = fit.mu;
      w.C1_fit = fit.C1;
    }
  } catch (const std::runtime_error&) {
    // |psi - 1| grows across the window: no fitted exponent to report.
  }
  return w;
}

Pair build_pair(const PairSpec& spec) {
  spec.validate();
  Pair pair;
  pair.spec = spec;
  pair.p = spec.genus();
  const ZeroSet zeros1 = spec.shared.merged(spec.outer_a);
  const ZeroSet zeros2 = spec.shared.merged(spec.outer_b);

  const double r1 = constants::threshold_r1(spec.params);
  pair.count1 = count_profile(zeros1, spec.params, r1);
  pair.count2 = count_profile(zeros2, spec.params, r1);
  for (const CountProfile* c : {&pair.count1, &pair.count2}) {
    if (!c->satisfied) {
      throw std::runtime_error("count bound violated at r = " + std::to_string(c->worst_radius));
    }
  }

  pair.psi1 = model::EntireModel(zeros1, pair.p, spec.g1);
  pair.psi2 = model::EntireModel(zeros2, pair.p, spec.g2);
  const double t0 = std::pow(spec.R, 1.0 - spec.delta);
  const double t1 = (pair.p + 1) * t0;
  pair.ray1 = measure_ray_window(pair.psi1, spec.ray_angle, t0, t1, spec.params.mu);
  pair.ray2 = measure_ray_window(pair.psi2, spec.ray_angle, t0, t1, spec.params.mu);
  return pair;
}

ClassParams engineered_params() {
  ClassParams params;
  params.C0 = 1.0;
  params.C1 = 1e-3;
  params.rho = 1.0;
  params.sigma = 1e-3;
  params.mu = 2.0;
  params.r0 = 1.0;
  return params;
}

PairSpec engineered_spec(std::uint64_t seed, double R, std::size_t outer_count) {
  PairSpec spec;
  spec.params = engineered_params();
  spec.delta = kEngineeredDelta;
  spec.R = R;
  spec.ray_angle = 0.0;
  spec.p = constants::select_p(spec.params.rho, spec.params.mu, spec.delta);

  std::mt19937_64 rng(seed);
  const double kappa = constants::count_bound(spec.params, 1.0);
  std::vector<Zero> shared, a, b;
  // Zero k (1-based) never sits below k / kappa, which keeps n(r) <= kappa r
  // for every r. The first two slots are the shared zeros.
  const double slot1 = 120.0 + 7.0 * unit(rng);
  const double slot2 = 185.0 + 14.0 * unit(rng);
  for (double m : {slot1, slot2}) {
    const cplx z = m * random_direction(rng);
    if (m < R) {
      shared.push_back({z, 1});
    } else {
      a.push_back({z, 1});
      b.push_back({z, 1});
    }
  }
  for (std::size_t k = 3; k < outer_count + 3; ++k) {
    const double base = static_cast<double>(k) / kappa;
    const double ma = std::max(R, base * (1.0 + 0.3 * unit(rng)));
    const double mb = std::max(R, base * (1.0 + 0.3 * unit(rng)));
    a.push_back({ma * random_direction(rng), 1});
    b.push_back({mb * random_direction(rng), 1});
  }
  spec.shared = ZeroSet(std::move(shared));
  spec.outer_a = ZeroSet(std::move(a));
  spec.outer_b = ZeroSet(std::move(b));
  return spec;
}

PairSpec random_spec(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  PairSpec spec;
  spec.params = ClassParams{};
  spec.params.sigma = 2.0;
  spec.delta = 0.5 + 0.4 * unit(rng);
  spec.R = 5.0 + 45.0 * unit(rng);
  spec.p = 1 + static_cast<int>(rng() % 3);
  spec.ray_angle = 2.0 * std::numbers::pi * unit(rng);

  std::vector<Zero> shared, a, b;
  const auto n_shared = static_cast<std::size_t>(rng() % 11);
  for (std::size_t i = 0; i < n_shared; ++i) {
    shared.push_back({spec.R * (0.05 + 0.9 * unit(rng)) * random_direction(rng),
                      1 + static_cast<int>(rng() % 2)});
  }
  const auto n_a = 5 + static_cast<std::size_t>(rng() % 56);
  const auto n_b = 5 + static_cast<std::size_t>(rng() % 56);
  for (std::size_t i = 0; i < n_a; ++i) {
    a.push_back({spec.R * (1.0 + 3.0 * unit(rng)) * random_direction(rng), 1});
  }
  for (std::size_t i = 0; i < n_b; ++i) {
    b.push_back({spec.R * (1.0 + 3.0 * unit(rng)) * random_direction(rng), 1});
  }
  spec.shared = ZeroSet(std::move(shared));
  spec.outer_a = ZeroSet(std::move(a));
  spec.outer_b = ZeroSet(std::move(b));

  const double scale = (*spec.p + 1) * std::pow(spec.R, 1.0 - spec.delta);
  for (auto* g : {&spec.g1, &spec.g2}) {
    for (int j = 0; j <= *spec.p; ++j) {
      g->push_back(0.3 / (j + 1) * random_in_unit_disk(rng) / std::pow(scale, j));
    }
  }
  return spec;
}

std::vector<cplx> random_admissible_polynomial(std::uint64_t seed, int p, double r, double C1,
                                               double mu, double angle) {
  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
  std::vector<cplx> b(static_cast<std::size_t>(p) + 1);
  for (auto& c : b) c = random_in_unit_disk(rng);
  // b are coefficients in the variable z / (r e^{i angle}).
  double worst = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double t = 1.0 + p * i / 256.0;
    worst = std::max(worst, std::abs(model::polyval(b, t)) * std::pow(t * r, mu) / C1);
  }
  const double target = 0.05 + 0.85 * unit(rng);
  const double s = worst > 0.0 ? target / worst : 0.0;
  std::vector<cplx> g(b.size());
  const cplx base = r * std::polar(1.0, angle);
  for (std::size_t j = 0; j < b.size(); ++j) g[j] = s * b[j] / std::pow(base, static_cast<int>(j));
  return g;
}

}  // namespace ratiolab::verify
