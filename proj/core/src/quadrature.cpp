#include "funnel/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "funnel/errors.hpp"

namespace funnel {

void QuadSpec::validate() const {
  if (n_phi < 16 || n_phi % 2 != 0) {
    throw ConfigError("QuadSpec: n_phi must be even and >= 16, got " + std::to_string(n_phi));
  }
  if (n_rho < 16) throw ConfigError("QuadSpec: n_rho must be >= 16, got " + std::to_string(n_rho));
  if (!std::isfinite(u_max) || u_max < 4.0) {
    throw ConfigError("QuadSpec: u_max must be >= 4, got " + std::to_string(u_max));
  }
  if (!(target_tol > 0.0 && target_tol <= 1e-2)) {
    throw ConfigError("QuadSpec: target_tol must lie in (0, 1e-2], got " +
                      std::to_string(target_tol));
  }
}

Rule gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: n must be >= 1");
  Rule r;
  r.x.assign(n, 0.0);
  r.w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.w[i] = w;
    r.x[n - 1 - i] = x;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

Rule gauss_legendre(int n, double a, double b) {
  Rule r = gauss_legendre(n);
  const double h = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.x[i] = a + h * (r.x[i] + 1.0);
    r.w[i] *= h;
  }
  return r;
}

Rule graded_gauss_legendre(int n, double a, double b, Grading g) {
  Rule r = gauss_legendre(n, 0.0, 1.0);
  const double len = b - a;
  for (int i = 0; i < n; ++i) {
    const double t = r.x[i];
    double y = t;
    double dy = 1.0;
    if (g == Grading::TowardLower) {
      y = t * t * t;
      dy = 3.0 * t * t;
    } else if (g == Grading::TowardUpper) {
      const double s = 1.0 - t;
      y = 1.0 - s * s * s;
      dy = 3.0 * s * s;
    }
    r.x[i] = a + len * y;
    r.w[i] *= len * dy;
  }
  return r;
}

std::pair<double, double> sine_map(double psi, int stages) {
  double phi = psi;
  double d = 1.0;
  for (int s = 0; s < stages; ++s) {
    d *= 1.0 - std::cos(2.0 * phi);
    phi -= 0.5 * std::sin(2.0 * phi);
  }
  return {phi, d};
}

Rule periodic_rule(int n, int stages) {
  if (n < 1) throw ConfigError("periodic_rule: n must be >= 1");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const double h = 2.0 * std::numbers::pi / n;
  for (int j = 0; j < n; ++j) {
    // Offset by half a step so no node sits on a fixed point of the map.
    const auto [phi, d] = sine_map((j + 0.5) * h, stages);
    r.x[j] = phi;
    r.w[j] = h * d;
  }
  return r;
}

double rounding_floor(double l1_norm, std::size_t n_terms) {
  return 16.0 * std::numeric_limits<double>::epsilon() * l1_norm *
         std::sqrt(static_cast<double>(n_terms) + 1.0);
}

namespace {

struct TensorSum {
  std::complex<double> value;
  double l1 = 0.0;
  std::size_t terms = 0;
};

TensorSum tensor_sum(const ProductIntegrand& f, int n_phi, int n_rho, double u_max) {
  const Rule ang = periodic_rule(n_phi, 0);
  const Rule rad = gauss_legendre(n_rho, 0.0, u_max);
  CompensatedComplexSum acc;
  CompensatedSum l1;
  for (int k = 0; k < n_rho; ++k) {
    for (int j = 0; j < n_phi; ++j) {
      const std::complex<double> v = f(ang.x[j], rad.x[k]);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NonFiniteError("integrate_product: integrand is not finite at angle " +
                             std::to_string(ang.x[j]) + ", u " + std::to_string(rad.x[k]));
      }
      const double w = ang.w[j] * rad.w[k];
      acc.add(w * v);
      l1.add(w * std::abs(v));
    }
  }
  return {acc.value(), l1.value(), static_cast<std::size_t>(n_phi) * n_rho};
}

}  // namespace

QuadResult integrate_product(const ProductIntegrand& f, const QuadSpec& spec) {
  spec.validate();
  const TensorSum coarse = tensor_sum(f, spec.n_phi / 2, spec.n_rho / 2, spec.u_max);
  TensorSum fine = tensor_sum(f, spec.n_phi, spec.n_rho, spec.u_max);
  double est = std::abs(fine.value.real() - coarse.value.real());
  auto accepted = [&](const TensorSum& s, double e) {
    return e <= std::max(spec.target_tol * std::abs(s.value.real()), rounding_floor(s.l1, s.terms));
  };
  if (!accepted(fine, est)) {
    const TensorSum refined = tensor_sum(f, 2 * spec.n_phi, 2 * spec.n_rho, spec.u_max);
    est = std::abs(refined.value.real() - fine.value.real());
    fine = refined;
    if (!accepted(fine, est)) {
      throw AccuracyError("integrate_product: estimated error " + std::to_string(est) +
                          " exceeds tolerance after one refinement");
    }
  }
  return {fine.value.real(), std::abs(fine.value.imag()), est};
}

}  // namespace funnel
