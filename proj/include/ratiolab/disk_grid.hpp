#pragma once

// Sample points for sampled suprema over disks and segments.

#include <cstdint>
#include <string>
#include <vector>

#include "ratiolab/zero_set.hpp"

namespace ratiolab::grid {

struct GridSpec {
  int n_r = 64;
  int n_theta = 256;
  std::size_t interior = 1000;  // low-discrepancy interior points
  std::uint64_t seed = 0;

  /// n_r, n_theta and interior all doubled.
  GridSpec refined() const;
  std::size_t size() const;

  bool operator==(const GridSpec&) const = default;
};

/// Parses "NRxNT", e.g. "64x256". Throws std::invalid_argument.
GridSpec parse_grid(const std::string& text);
std::string to_string(const GridSpec& spec);

/// Centre, n_r circles of radii radius*i/n_r (i = 1..n_r, so the boundary
/// is included) with n_theta angles each, then `interior` Halton points
/// (bases 2, 3) mapped area-uniformly onto the disk. The angular offset and
/// the Cranley-Patterson shift of the Halton points derive from the seed.
std::vector<cplx> disk_points(double radius, const GridSpec& spec);

/// n points equally spaced on {t e^{i angle} : t in [t0, t1]}, endpoints included.
std::vector<cplx> segment_points(double t0, double t1, double angle, std::size_t n);

}  // namespace ratiolab::grid
