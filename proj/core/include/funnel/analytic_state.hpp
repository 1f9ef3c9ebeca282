#pragma once

#include "funnel/phys_config.hpp"
#include "funnel/potential.hpp"

namespace funnel {

// Cylindrical velocity components of the stationary flow.
struct Velocity {
  double v_rho = 0.0;
  double v_phi = 0.0;
  double v_z = 0.0;
};

// Wavefunction in polar form; phase wrapped to [0, 2 pi).
struct WaveValue {
  double magnitude = 0.0;
  double phase = 0.0;
};

// Closed-form ground-state quantities at one point.
struct StateEval {
  double density = 0.0;
  double v_phi = 0.0;
  double psi_mag = 0.0;
  double psi_phase = 0.0;
};

// f1 = (2 pi)^(-3/2) sigma^-3 exp(-(rho^2 + z^2)/(2 sigma^2)).
double density_f1(const CylPoint& p, const PhysConfig& cfg);

// <v>_1 = hbar/(m rho) e_phi. Throws DomainError for rho < kRhoMin.
Velocity velocity_field(const CylPoint& p, const PhysConfig& cfg);

// |Psi| = (2 pi)^(-3/4) sigma^(-3/2) exp(-(rho^2+z^2)/(4 sigma^2)), arg Psi = phi - E t/hbar.
WaveValue wavefunction(const CylPoint& p, double t, const PhysConfig& cfg);

// All of the above at once; requires rho >= kRhoMin for the velocity.
StateEval evaluate_state(const CylPoint& p, double t, const PhysConfig& cfg);

// Wraps an angle to [0, 2 pi).
double wrap_angle(double a);

}  // namespace funnel
