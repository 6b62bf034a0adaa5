// Time-domain Schrodinger evolution along smooth cyclic schedules, and the
// crossing-versus-following survey over the sweep duration tau (hbar = 1).

#pragma once

#include "holo/spectral_flow.hpp"

namespace holo {

enum class ScheduleShape { SmoothSine, SmoothCubic };

// theta(t) = period * s(t/tau) with s(0)=0, s(1)=1, s'(0)=s'(1)=0.
struct Schedule {
  double tau = 200.0;
  ScheduleShape shape = ScheduleShape::SmoothSine;

  double s(double u) const;
  double theta(double t, double period) const { return period * s(t / tau); }
};

struct AdiabaticRun {
  ModelSpec spec;
  double eps = 0.0;
  Schedule schedule;
  std::vector<CVec> final_states;                // per initial branch
  std::vector<std::vector<double>> fidelities;   // [n][m] = |<fresh_m(0)|psi_n(tau)>|
  std::vector<double> dynamical_phases;          // arg against the matched final level
  long steps_used = 0;
  double norm_drift = 0.0;
};

// Integrates every initial eigenstate of H(theta(0)) + eps C under
// i d/dt psi = (H(theta(t)) + eps C) psi with a fixed-step RK4.  Doubles the
// step count (up to 4 times) when the norm drift exceeds 1e-5, then fails.
AdiabaticRun evolve(const ModelSpec& spec, double eps, const Schedule& schedule,
                    long steps);

struct LandauZenerRow {
  double tau = 0.0;
  double delta = 0.0;  // minimum gap of the crossing pair near theta = pi
  double dgap = 0.0;   // separation scale from the rest of the spectrum
  double exchange_fidelity = 0.0;  // |<fresh_2(0)|psi_1(tau)>|
  std::vector<double> exchange_per_state;
};

// Crossing survey: for each tau, evolve and report the exchange fidelity
// together with the measured gaps Delta and D.
std::vector<LandauZenerRow> landau_zener_window(const ModelSpec& spec, double eps,
                                                const std::vector<double>& taus,
                                                int jobs = 1);

// step-count heuristic keeping the RK4 norm drift comfortably below 1e-5
long default_steps_for(double tau);

}  // namespace holo
