#pragma once

namespace funnel {

// Moduli linked by k2^2 = k1^2/(1 + k1^2); k1 may be negative.
struct ModulusPair {
  double k1 = 0.0;
  double k2 = 0.0;
};

// Builds the pair from k1; k2 = |k1|/sqrt(1 + k1^2) in [0, 1).
ModulusPair modulus_from_k1(double k1);

// |k1| = k2/sqrt(1 - k2^2). Throws DomainError unless 0 <= k2 < 1.
double k1_from_k2(double k2);

// Complete elliptic integral of the first kind by the arithmetic-geometric mean.
// Throws DomainError unless 0 <= k < 1.
double elliptic_k(double k);

// K(i k1) = K(k2)/sqrt(1 + k1^2); even in k1. Throws DomainError for non-finite k1.
double elliptic_k_imag(double k1);

}  // namespace funnel
