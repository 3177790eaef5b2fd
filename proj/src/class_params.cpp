#include "ratiolab/class_params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ratiolab {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::invalid_argument(std::string("class parameter ") + name +
                                " must be finite and positive");
  }
}

}  // namespace

void ClassParams::validate() const {
  require_positive(C0, "C0");
  require_positive(C1, "C1");
  require_positive(rho, "rho");
  require_positive(sigma, "sigma");
  require_positive(mu, "mu");
  require_positive(r0, "r0");
  if (r0 < 1.0) throw std::invalid_argument("class parameter r0 must be >= 1");
}

std::string to_string(const ClassParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "M(C0=" << p.C0 << ", C1=" << p.C1 << ", rho=" << p.rho
     << ", sigma=" << p.sigma << ", mu=" << p.mu << ", r0=" << p.r0 << ")";
  return os.str();
}

}  // namespace ratiolab
