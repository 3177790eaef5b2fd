#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace ratiolab {

using cplx = std::complex<double>;

struct Zero {
  cplx location;
  int multiplicity = 1;

  bool operator==(const Zero&) const = default;
};

// Finite multiset of nonzero complex zeros, kept sorted by modulus.
// The order of a zero at the origin is tracked by the model, never here.
class ZeroSet {
 public:
  ZeroSet() = default;
  /// Throws std::invalid_argument for a zero at the origin, a non-finite
  /// location or a multiplicity below 1.
  explicit ZeroSet(std::vector<Zero> zeros);

  std::span<const Zero> entries() const { return zeros_; }
  std::size_t size() const { return zeros_.size(); }
  bool empty() const { return zeros_.empty(); }

  /// Sum of multiplicities.
  long total_count() const;
  /// Zeros with |z| < r, counted with multiplicity.
  long count_below(double r) const;

  /// Zeros with |z| < r and with |z| >= r respectively.
  ZeroSet inner(double r) const;
  ZeroSet outer(double r) const;

  double min_modulus() const;

  /// Multiset union.
  ZeroSet merged(const ZeroSet& other) const;
  /// Every location multiplied by `factor`.
  ZeroSet scaled(double factor) const;

  bool operator==(const ZeroSet&) const = default;

 private:
  std::vector<Zero> zeros_;
};

// CSV with header `re,im,mult`, one zero per row.
ZeroSet read_zero_csv(std::istream& in);
ZeroSet read_zero_csv(const std::filesystem::path& path);
void write_zero_csv(std::ostream& out, const ZeroSet& zeros);

}  // namespace ratiolab
