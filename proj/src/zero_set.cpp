#include "ratiolab/zero_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ratiolab {

ZeroSet::ZeroSet(std::vector<Zero> zeros) : zeros_(std::move(zeros)) {
  for (const Zero& z : zeros_) {
    if (!std::isfinite(z.location.real()) || !std::isfinite(z.location.imag())) {
      throw std::invalid_argument("zero location must be finite");
    }
    if (z.location == cplx(0.0, 0.0)) {
      throw std::invalid_argument("zero set must exclude the origin");
    }
    if (z.multiplicity < 1) throw std::invalid_argument("multiplicity must be >= 1");
  }
  // Stable on ties so identical inputs always give identical order.
  std::stable_sort(zeros_.begin(), zeros_.end(), [](const Zero& a, const Zero& b) {
    return std::abs(a.location) < std::abs(b.location);
  });
}

long ZeroSet::total_count() const {
  long n = 0;
  for (const Zero& z : zeros_) n += z.multiplicity;
  return n;
}

long ZeroSet::count_below(double r) const {
  long n = 0;
  for (const Zero& z : zeros_) {
    if (std::abs(z.location) < r) n += z.multiplicity;
  }
  return n;
}

ZeroSet ZeroSet::inner(double r) const {
  std::vector<Zero> out;
  for (const Zero& z : zeros_) {
    if (std::abs(z.location) < r) out.push_back(z);
  }
  return ZeroSet(std::move(out));
}

ZeroSet ZeroSet::outer(double r) const {
  std::vector<Zero> out;
  for (const Zero& z : zeros_) {
    if (std::abs(z.location) >= r) out.push_back(z);
  }
  return ZeroSet(std::move(out));
}

double ZeroSet::min_modulus() const {
  return zeros_.empty() ? std::numeric_limits<double>::infinity()
                        : std::abs(zeros_.front().location);
}

ZeroSet ZeroSet::merged(const ZeroSet& other) const {
  std::vector<Zero> all(zeros_);
  all.insert(all.end(), other.zeros_.begin(), other.zeros_.end());
  return ZeroSet(std::move(all));
}

ZeroSet ZeroSet::scaled(double factor) const {
  std::vector<Zero> out(zeros_);
  for (Zero& z : out) z.location *= factor;
  return ZeroSet(std::move(out));
}

ZeroSet read_zero_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("zero CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "re,im,mult") {
    throw std::runtime_error("zero CSV: expected header 're,im,mult', got '" + line + "'");
  }
  std::vector<Zero> zeros;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string re_s, im_s, mult_s;
    if (!std::getline(row, re_s, ',') || !std::getline(row, im_s, ',') ||
        !std::getline(row, mult_s)) {
      throw std::runtime_error("zero CSV: malformed row " + std::to_string(line_no));
    }
    try {
      std::size_t used = 0;
      const int mult = std::stoi(mult_s, &used);
      if (used != mult_s.size()) throw std::invalid_argument("trailing characters");
      zeros.push_back({cplx(std::stod(re_s), std::stod(im_s)), mult});
    } catch (const std::exception&) {
      throw std::runtime_error("zero CSV: malformed row " + std::to_string(line_no));
    }
  }
  return ZeroSet(std::move(zeros));
}

ZeroSet read_zero_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open zero file " + path.string());
  return read_zero_csv(in);
}

void write_zero_csv(std::ostream& out, const ZeroSet& zeros) {
  char buf[128];
  out << "re,im,mult\n";
  for (const Zero& z : zeros.entries()) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", z.location.real(), z.location.imag(),
                  z.multiplicity);
    out << buf;
  }
}

}  // namespace ratiolab
