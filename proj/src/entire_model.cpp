#include "ratiolab/entire_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ratiolab/kernels.hpp"
#include "ratiolab/primary_factors.hpp"

namespace ratiolab::model {

namespace {

bool inside_guard(std::span<const Zero> zeros, int p, cplx z) {
  if (p < 1) return false;
  const double limit = factors::guard_radius(p);
  for (const Zero& zero : zeros) {
    if (std::abs(z / zero.location) > limit) return false;
  }
  return true;
}

}  // namespace

cplx polyval(const std::vector<cplx>& coeffs, cplx z) {
  cplx v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * z + coeffs[i];
  return v;
}

cplx polyval_derivative(const std::vector<cplx>& coeffs, cplx z) {
  cplx v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) v = v * z + static_cast<double>(i) * coeffs[i];
  return v;
}

cplx product_minus_one(const ZeroSet& zeros, int p, cplx z) {
  if (inside_guard(zeros.entries(), p, z)) {
    return factors::expm1(kernels::log_factor_sum(zeros.entries(), p, z));
  }
  return kernels::accumulate_factors(zeros.entries(), p, z).value() - 1.0;
}

EntireModel::EntireModel(ZeroSet zeros, int genus, std::vector<cplx> g, int origin_order,
                         std::optional<TailBound> tail)
    : zeros_(std::move(zeros)),
      genus_(genus),
      g_(std::move(g)),
      origin_order_(origin_order),
      tail_(tail) {
  if (genus_ < 0) throw std::invalid_argument("genus must be nonnegative");
  if (origin_order_ < 0) throw std::invalid_argument("origin order must be nonnegative");
  if (g_.size() > static_cast<std::size_t>(genus_) + 1) {
    throw std::invalid_argument("exponent polynomial degree exceeds the genus");
  }
  if (tail_ && (!(tail_->cutoff > 0.0) || tail_->power_sum < 0.0)) {
    throw std::invalid_argument("tail bound needs cutoff > 0 and power_sum >= 0");
  }
}

cplx EntireModel::exponent(cplx z) const { return polyval(g_, z); }

cplx EntireModel::operator()(cplx z) const {
  const kernels::FactorAccumulation acc = kernels::accumulate_factors(zeros_.entries(), genus_, z);
  cplx v = std::exp(acc.log_sum + exponent(z)) * acc.direct;
  for (int i = 0; i < origin_order_; ++i) v *= z;
  return v;
}

cplx EntireModel::minus_one(cplx z) const {
  if (origin_order_ == 0 && inside_guard(zeros_.entries(), genus_, z)) {
    return factors::expm1(kernels::log_factor_sum(zeros_.entries(), genus_, z) + exponent(z));
  }
  return (*this)(z) - 1.0;
}

cplx EntireModel::tail_product(double R, cplx z) const { return tail_product_minus_one(R, z) + 1.0; }

cplx EntireModel::tail_product_minus_one(double R, cplx z) const {
  return product_minus_one(zeros_.outer(R), genus_, z);
}

double EntireModel::error_budget(cplx z) const {
  if (!tail_) return 0.0;
  const double r = std::abs(z);
  if (genus_ < 1 || r > factors::guard_radius(genus_) * tail_->cutoff) {
    return std::numeric_limits<double>::infinity();
  }
  return std::pow(r, genus_ + 1) * tail_->power_sum;
}

cplx EntireModel::log_value(cplx z) const {
  const kernels::FactorAccumulation acc = kernels::accumulate_factors(zeros_.entries(), genus_, z);
  cplx l = acc.log_value() + exponent(z);
  if (origin_order_ > 0) l += static_cast<double>(origin_order_) * std::log(z);
  return l;
}

cplx EntireModel::log_derivative(cplx z) const {
  cplx d = polyval_derivative(g_, z);
  if (origin_order_ > 0) d += static_cast<double>(origin_order_) / z;
  for (const Zero& zero : zeros_.entries()) {
    const cplx a = zero.location;
    if (z == a) return {std::numeric_limits<double>::infinity(), 0.0};
    // d/dz ln E_p(z/a) = 1/(z - a) + sum_{k=1}^p z^{k-1} / a^k
    cplx term = 1.0 / (z - a);
    cplx power = 1.0 / a;
    for (int k = 1; k <= genus_; ++k) {
      term += power;
      power *= z / a;
    }
    d += static_cast<double>(zero.multiplicity) * term;
  }
  return d;
}

zeros::ProxySample EntireModel::winding_proxy(cplx z) const {
  zeros::ProxySample out{1.0, 0.0};
  auto include = [&](cplx factor, cplx root, int m) {
    const double size = std::abs(factor);
    if (size == 0.0) return false;
    for (int i = 0; i < m; ++i) out.value *= factor / size;
    out.log_derivative += static_cast<double>(m) / (z - root);
    return true;
  };
  for (const Zero& zero : zeros_.entries()) {
    if (!include(1.0 - z / zero.location, zero.location, zero.multiplicity)) return {0.0, 0.0};
  }
  if (origin_order_ > 0 && !include(z, 0.0, origin_order_)) return {0.0, 0.0};
  return out;
}

zeros::AnalyticFn EntireModel::as_analytic() const {
  zeros::AnalyticFn f;
  const EntireModel self = *this;
  f.value = [self](cplx z) { return self(z); };
  f.log_value = [self](cplx z) { return self.log_value(z); };
  f.log_derivative = [self](cplx z) { return self.log_derivative(z); };
  f.winding_proxy = [self](cplx z) { return self.winding_proxy(z); };
  return f;
}

}  // namespace ratiolab::model
