#pragma once

#include <optional>

namespace funnel {

// Physical constants of the funnel system. Immutable after construction.
class PhysConfig {
 public:
  // Throws ConfigError unless all three constants are finite and positive.
  PhysConfig(double hbar, double mass, double sigma_r);

  double hbar() const { return hbar_; }
  double mass() const { return mass_; }
  double sigma_r() const { return sigma_r_; }

  // First Bohr orbit radius r0 with sigma_r^2 = (3/2) r0^2, when annotated.
  std::optional<double> bohr_radius() const { return bohr_radius_; }
  PhysConfig with_bohr_radius(double r0) const;

  bool operator==(const PhysConfig& o) const = default;

 private:
  double hbar_;
  double mass_;
  double sigma_r_;
  std::optional<double> bohr_radius_;
};

// hbar = mass = sigma_r = 1.
PhysConfig reduced_defaults();

// E = 3 hbar^2 / (4 m sigma_r^2).
double energy(const PhysConfig& cfg);

// Reduced config annotated with r0 = sigma_r * sqrt(2/3), so E = hbar^2 / (2 m r0^2).
PhysConfig bohr_scenario();

}  // namespace funnel
