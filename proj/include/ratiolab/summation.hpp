#pragma once

#include <complex>

namespace ratiolab {

// Neumaier's variant of Kahan summation.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if (magnitude(sum_) >= magnitude(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static auto magnitude(T v) {
    if constexpr (std::is_floating_point_v<T>) {
      return v < T(0) ? -v : v;
    } else {
      return std::abs(v);
    }
  }
  T sum_{};
  T comp_{};
};

// Complex numbers are compensated componentwise so that the real and
// imaginary parts each get their own correction term.
template <typename T>
class CompensatedSum<std::complex<T>> {
 public:
  void add(std::complex<T> x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  std::complex<T> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<T> re_;
  CompensatedSum<T> im_;
};

}  // namespace ratiolab
