#include "ratiolab/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <numbers>
#include <vector>

#include "ratiolab/primary_factors.hpp"
#include "ratiolab/summation.hpp"

namespace ratiolab::kernels {

namespace {

// Below this many zeros a single block is used and no threads are spawned.
constexpr std::size_t kParallelThreshold = 4 * kBlockSize;

std::size_t block_count(std::size_t n) { return (n + kBlockSize - 1) / kBlockSize; }

bool go_parallel(std::size_t n) { return n >= kParallelThreshold && !omp_in_parallel(); }

cplx log_sum_range(std::span<const Zero> zeros, int p, cplx z) {
  CompensatedSum<cplx> sum;
  for (const Zero& zero : zeros) {
    sum.add(static_cast<double>(zero.multiplicity) *
            factors::log_primary_factor(z / zero.location, p));
  }
  return sum.value();
}

// Outside the guard radius only the linear factor (1 - xi) is multiplied
// directly; its exponential part goes into the log sum, so large |xi| cannot
// overflow the running product.
FactorAccumulation accumulate_range(std::span<const Zero> zeros, int p, cplx z) {
  const double guard = factors::guard_radius(p);
  CompensatedSum<cplx> sum;
  cplx direct{1.0, 0.0};
  for (const Zero& zero : zeros) {
    const cplx xi = z / zero.location;
    const auto m = static_cast<double>(zero.multiplicity);
    if (p >= 1 && std::abs(xi) <= guard) {
      sum.add(m * factors::log_primary_factor(xi, p));
    } else {
      cplx poly{0.0, 0.0}, power{1.0, 0.0};
      for (int k = 1; k <= p; ++k) {
        power *= xi;
        poly += power / static_cast<double>(k);
      }
      if (p >= 1) sum.add(m * poly);
      for (int j = 0; j < zero.multiplicity; ++j) direct *= 1.0 - xi;
      const double size = std::abs(direct);
      if (size > 1e100 || (size < 1e-100 && size > 0.0)) {
        sum.add(std::log(direct));
        direct = 1.0;
      }
    }
  }
  return {sum.value(), direct};
}

// Runs `body(block)` for every block, in parallel when worthwhile, and
// rethrows the first exception (by block index) on the calling thread.
template <typename Body>
void for_each_block(std::size_t n, bool parallel, Body body) {
  const auto blocks = static_cast<long>(block_count(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static) if (parallel && go_parallel(n))
  for (long b = 0; b < blocks; ++b) {
    try {
      body(static_cast<std::size_t>(b));
    } catch (...) {
      errors[static_cast<std::size_t>(b)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::span<const Zero> block_span(std::span<const Zero> zeros, std::size_t b) {
  const std::size_t begin = b * kBlockSize;
  const std::size_t len = std::min(kBlockSize, zeros.size() - begin);
  return zeros.subspan(begin, len);
}

cplx blocked_log_sum(std::span<const Zero> zeros, int p, cplx z, bool parallel) {
  if (zeros.size() <= kBlockSize) return log_sum_range(zeros, p, z);
  std::vector<cplx> partial(block_count(zeros.size()));
  for_each_block(zeros.size(), parallel, [&](std::size_t b) {
    partial[b] = log_sum_range(block_span(zeros, b), p, z);
  });
  CompensatedSum<cplx> total;
  for (const cplx& v : partial) total.add(v);
  return total.value();
}

FactorAccumulation blocked_accumulate(std::span<const Zero> zeros, int p, cplx z, bool parallel) {
  if (zeros.size() <= kBlockSize) return accumulate_range(zeros, p, z);
  std::vector<FactorAccumulation> partial(block_count(zeros.size()));
  for_each_block(zeros.size(), parallel, [&](std::size_t b) {
    partial[b] = accumulate_range(block_span(zeros, b), p, z);
  });
  CompensatedSum<cplx> total;
  cplx direct{1.0, 0.0};
  for (const auto& part : partial) {
    total.add(part.log_sum);
    direct *= part.direct;
  }
  return {total.value(), direct};
}

SupResult merge(const SupResult& a, const SupResult& b) {
  SupResult out;
  out.evaluated = a.evaluated + b.evaluated;
  out.excluded = a.excluded + b.excluded;
  if (a.evaluated == 0) {
    out.value = b.value;
    out.argmax = b.argmax;
  } else if (b.evaluated == 0) {
    out.value = a.value;
    out.argmax = a.argmax;
  } else if (b.value > a.value || (b.value == a.value && b.argmax < a.argmax)) {
    out.value = b.value;
    out.argmax = b.argmax;
  } else {
    out.value = a.value;
    out.argmax = a.argmax;
  }
  return out;
}

SupResult sup_range(std::span<const cplx> points, std::size_t offset, const PointFunction& f) {
  SupResult r;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double v = f(points[i]);
    if (std::isnan(v)) {
      ++r.excluded;
      continue;
    }
    if (r.evaluated == 0 || v > r.value) {
      r.value = v;
      r.argmax = offset + i;
    }
    ++r.evaluated;
  }
  return r;
}

}  // namespace

void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

cplx log_factor_sum_serial(std::span<const Zero> zeros, int p, cplx z) {
  return blocked_log_sum(zeros, p, z, false);
}

cplx log_factor_sum(std::span<const Zero> zeros, int p, cplx z) {
  return blocked_log_sum(zeros, p, z, true);
}

cplx FactorAccumulation::value() const { return std::exp(log_sum) * direct; }

cplx FactorAccumulation::log_value() const { return log_sum + std::log(direct); }

FactorAccumulation accumulate_factors_serial(std::span<const Zero> zeros, int p, cplx z) {
  return blocked_accumulate(zeros, p, z, false);
}

FactorAccumulation accumulate_factors(std::span<const Zero> zeros, int p, cplx z) {
  return blocked_accumulate(zeros, p, z, true);
}

SupResult sampled_sup_serial(std::span<const cplx> points, const PointFunction& f) {
  return sup_range(points, 0, f);
}

SupResult sampled_sup(std::span<const cplx> points, const PointFunction& f) {
  if (omp_in_parallel() || points.size() < 64) return sup_range(points, 0, f);
  const int threads = omp_get_max_threads();
  std::vector<SupResult> partial(static_cast<std::size_t>(threads));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  const std::size_t n = points.size();
#pragma omp parallel num_threads(threads)
  {
    const auto t = static_cast<std::size_t>(omp_get_thread_num());
    const auto nt = static_cast<std::size_t>(omp_get_num_threads());
    const std::size_t begin = n * t / nt;
    const std::size_t end = n * (t + 1) / nt;
    try {
      partial[t] = sup_range(points.subspan(begin, end - begin), begin, f);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  SupResult out;
  for (const auto& part : partial) out = merge(out, part);
  return out;
}

double circle_max_modulus_serial(const std::function<cplx(cplx)>& f, cplx center,
                                 double radius, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    best = std::max(best, std::abs(f(center + std::polar(radius, theta))));
  }
  return best;
}

double circle_max_modulus(const std::function<cplx(cplx)>& f, cplx center, double radius,
                          std::size_t n) {
  std::vector<cplx> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    points[i] = center + std::polar(radius, theta);
  }
  return sampled_sup(points, [&](cplx z) { return std::abs(f(z)); }).value;
}

}  // namespace ratiolab::kernels
