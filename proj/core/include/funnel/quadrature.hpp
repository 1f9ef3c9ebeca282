#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace funnel {

// Node counts, truncation radius and tolerance of the angle x radial product rule.
struct QuadSpec {
  int n_phi = 128;           // periodic angle nodes, even, >= 16
  int n_rho = 96;            // radial Gauss-Legendre nodes, >= 16
  double u_max = 6.0;        // truncation of u = rho * rho_bar / sigma_r, >= 4
  double target_tol = 1e-8;  // relative tolerance, in (0, 1e-2]

  // Throws ConfigError when an invariant is violated.
  void validate() const;
  bool operator==(const QuadSpec& o) const = default;
};

struct QuadResult {
  double value = 0.0;
  double imag_residual = 0.0;  // |Im| of the discarded imaginary part
  double est_error = 0.0;      // |I(n) - I(n/2)|, or |I(2n) - I(n)| after refinement
};

// Quadrature rule: nodes x and weights w.
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre rule with n nodes on [-1, 1] (Newton iteration on P_n).
Rule gauss_legendre(int n);

// Gauss-Legendre rule with n nodes on [a, b].
Rule gauss_legendre(int n, double a, double b);

// Cubic grading clusters nodes toward one end of the interval.
enum class Grading { None, TowardLower, TowardUpper };

// Gauss-Legendre on [a, b] composed with t -> t^3 grading toward the chosen end.
Rule graded_gauss_legendre(int n, double a, double b, Grading g);

// Angle map psi -> psi - sin(2 psi)/2 applied `stages` times, with its derivative.
// Fixes 0, pi/2, pi, 3pi/2 and clusters nodes at 0 and pi.
std::pair<double, double> sine_map(double psi, int stages);

// Equispaced trapezoid on [0, 2 pi) pulled back through sine_map; weights include
// the map derivative. stages = 0 gives the plain trapezoid.
Rule periodic_rule(int n, int stages);

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// Integrand over (angle in [0, 2 pi), u in [0, u_max]); the caller supplies any weight.
using ProductIntegrand = std::function<std::complex<double>(double angle, double u)>;

// Tensor trapezoid x Gauss-Legendre rule against d(angle) du.
// The estimate compares n against n/2 nodes per direction; when it exceeds
// target_tol * |value| (or the rounding floor) the counts are doubled once.
// Throws AccuracyError if the doubled rule still misses, NonFiniteError on NaN/inf.
QuadResult integrate_product(const ProductIntegrand& f, const QuadSpec& spec);

// Rounding floor below which an error estimate carries no information.
double rounding_floor(double l1_norm, std::size_t n_terms);

}  // namespace funnel
