#pragma once

#include <string>

namespace ratiolab {

// Parameters of the class M(C0, C1, rho, sigma, mu, r0):
//   |psi(z)| <= C0 exp(sigma |z|^rho)   for |z| >= r0,
//   |psi(z) - 1| <= C1 / |z|^mu         on one ray, |z| >= r0.
struct ClassParams {
  double C0 = 1.0;
  double C1 = 1.0;
  double rho = 1.0;
  double sigma = 1.0;
  double mu = 1.0;
  double r0 = 1.0;

  /// Throws std::invalid_argument unless every field is finite and positive
  /// and r0 >= 1.
  void validate() const;

  bool operator==(const ClassParams&) const = default;
};

std::string to_string(const ClassParams& params);

}  // namespace ratiolab
