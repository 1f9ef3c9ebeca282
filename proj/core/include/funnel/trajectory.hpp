#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "funnel/moyal_accel.hpp"
#include "funnel/phys_config.hpp"
#include "funnel/quadrature.hpp"

namespace funnel {

// Planar phase-space state.
struct TrajState {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double px = 0.0;
  double py = 0.0;
};

enum class PolePolicy { Halt, Clamp };

struct TrajConfig {
  VariantId variant = VariantId::Classical;
  double dt = 1e-3;
  double t_max = 20.0;
  PolePolicy pole_policy = PolePolicy::Halt;
  QuadSpec spec;
  int sample_stride = 1;

  // Throws ConfigError unless dt > 0, t_max > dt, sample_stride >= 1 and spec is valid.
  void validate() const;
};

// RhoMinBreach: rho below kRhoMin, or a step longer than the distance to the axis.
enum class EventKind { PoleEncounter, RhoMinBreach, Completed };
std::string_view to_string(EventKind k);

// Quadrature failures (accuracy or non-finite sums) end a run as PoleEncounter:
// they arise where W cancels to near zero.
struct TrajEvent {
  double t = 0.0;
  EventKind kind = EventKind::Completed;
  std::string detail;
};

struct Trajectory {
  std::vector<TrajState> samples;
  std::vector<TrajEvent> events;      // clamp mode may log PoleEncounter before the terminal event
  std::vector<double> energy_series;  // Classical variant only
  bool non_physical = false;          // set when the clamp policy altered a step
};

// Fixed-step classic RK4 on (x, y, px, py) with x' = p/m, p' = m a(variant).
// Physics failures become events; throws ConfigError for an invalid TrajConfig.
Trajectory integrate(const TrajState& init, const TrajConfig& tc, const PhysConfig& cfg);

// (px^2 + py^2)/(2m) + U(rho, 0). Throws DomainError for rho < kRhoMin.
double classical_energy(const TrajState& s, const PhysConfig& cfg);

// L = x py - y px.
double angular_momentum(const TrajState& s);

// First common sample time where the positions differ by more than threshold.
// Compares the common prefix of the two sample lists; throws GridMismatchError
// when sample times disagree.
std::optional<double> divergence_time(const Trajectory& a, const Trajectory& b, double threshold);

// Time between the first two outward crossings of rho = rho0. When rho0 is a turning
// point of the orbit (within 1e-6 relative), successive radial maxima are used instead.
std::optional<double> radial_period(const Trajectory& tr, double rho0);

// Preset initial states: fig3, fig4_micro, fig4_mid, fig4_macro. Throws UnknownScenario.
TrajState scenario(std::string_view name, const PhysConfig& cfg);
std::vector<std::string> scenario_names();

// Runs independent trajectories on up to `workers` threads; results keep input order.
struct TrajJob {
  TrajState init;
  TrajConfig tc;
};
std::vector<Trajectory> integrate_batch(const std::vector<TrajJob>& jobs, const PhysConfig& cfg,
                                        int workers);

// Worker count from FUNNEL_WORKERS when set and positive, else hardware concurrency.
int default_workers();

}  // namespace funnel
