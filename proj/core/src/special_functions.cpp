#include "funnel/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "funnel/errors.hpp"

namespace funnel {

ModulusPair modulus_from_k1(double k1) {
  if (!std::isfinite(k1)) throw DomainError("modulus_from_k1: k1 must be finite");
  return {k1, std::abs(k1) / std::sqrt(1.0 + k1 * k1)};
}

double k1_from_k2(double k2) {
  if (!(k2 >= 0.0 && k2 < 1.0)) {
    throw DomainError("k1_from_k2: k2 must lie in [0, 1), got " + std::to_string(k2));
  }
  return k2 / std::sqrt((1.0 - k2) * (1.0 + k2));
}

namespace {

// K = pi / (2 AGM(1, k')), k' supplied directly to avoid cancellation in 1 - k^2.
double elliptic_k_from_complement(double kc) {
  double a = 1.0;
  double b = kc;
  for (int i = 0; i < 40; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    a = an;
    b = bn;
    if (std::abs(a - b) < 1e-15 * a) break;
  }
  return std::numbers::pi / (a + b);
}

}  // namespace

double elliptic_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw DomainError("elliptic_k: modulus must lie in [0, 1), got " + std::to_string(k));
  }
  return elliptic_k_from_complement(std::sqrt((1.0 - k) * (1.0 + k)));
}

double elliptic_k_imag(double k1) {
  if (!std::isfinite(k1)) throw DomainError("elliptic_k_imag: k1 must be finite");
  const double q = std::sqrt(1.0 + k1 * k1);
  // K(k2) with complementary modulus k2' = 1/sqrt(1 + k1^2), exact for large |k1|.
  return elliptic_k_from_complement(1.0 / q) / q;
}

}  // namespace funnel
