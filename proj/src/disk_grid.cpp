#include "ratiolab/disk_grid.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ratiolab::grid {

namespace {

double halton(std::size_t index, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

// Top 53 bits of a 64-bit draw, so the value does not depend on the
// standard library's distribution implementation.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

GridSpec GridSpec::refined() const {
  GridSpec out = *this;
  out.n_r *= 2;
  out.n_theta *= 2;
  out.interior *= 2;
  return out;
}

std::size_t GridSpec::size() const {
  return 1 + static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_theta) + interior;
}

GridSpec parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw std::invalid_argument("grid must look like NRxNT");
  GridSpec spec;
  try {
    std::size_t used_r = 0, used_t = 0;
    spec.n_r = std::stoi(text.substr(0, x), &used_r);
    spec.n_theta = std::stoi(text.substr(x + 1), &used_t);
    if (used_r != x || used_t != text.size() - x - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must look like NRxNT");
  }
  if (spec.n_r < 1 || spec.n_theta < 1) throw std::invalid_argument("grid sizes must be positive");
  return spec;
}

std::string to_string(const GridSpec& spec) {
  return std::to_string(spec.n_r) + "x" + std::to_string(spec.n_theta);
}

std::vector<cplx> disk_points(double radius, const GridSpec& spec) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
  std::mt19937_64 rng(spec.seed);
  const double offset = unit(rng);
  const double shift_u = unit(rng);
  const double shift_v = unit(rng);

  std::vector<cplx> points;
  points.reserve(spec.size());
  points.emplace_back(0.0, 0.0);
  const double dtheta = 2.0 * std::numbers::pi / spec.n_theta;
  for (int i = 1; i <= spec.n_r; ++i) {
    const double r = radius * i / spec.n_r;
    for (int j = 0; j < spec.n_theta; ++j) points.push_back(std::polar(r, dtheta * (j + offset)));
  }
  for (std::size_t k = 1; k <= spec.interior; ++k) {
    const double u = std::fmod(halton(k, 2) + shift_u, 1.0);
    const double v = std::fmod(halton(k, 3) + shift_v, 1.0);
    points.push_back(std::polar(radius * std::sqrt(u), 2.0 * std::numbers::pi * v));
  }
  return points;
}

std::vector<cplx> segment_points(double t0, double t1, double angle, std::size_t n) {
  if (n < 2) throw std::invalid_argument("segment needs at least two points");
  std::vector<cplx> points(n);
  const cplx dir = std::polar(1.0, angle);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    points[i] = t * dir;
  }
  return points;
}

}  // namespace ratiolab::grid
