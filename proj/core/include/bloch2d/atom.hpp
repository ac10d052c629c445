#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bloch2d/radial.hpp"

namespace bloch2d {

// compactly supported radial effective core potential; when of the form
// -eta * shape the strength is kept explicit for threshold scans
struct PseudoPotential {
  double eta = 0.0;
  double support = 1.0;
  std::function<double(double)> shape;  // nonnegative, bounded, zero past support

  double operator()(double r) const {
    return (shape && r < support) ? -eta * shape(r) : 0.0;
  }
};

// smooth reference bump (1 + cos(pi r / support)) / 2 on r < support
PseudoPotential bump_pseudopotential(double eta, double support = 1.0);

// converged mean-field ground state of -Delta - 1/r + Vpp + |v|^2 * 1/|.|
struct AtomSolution {
  double mu = 0.0;               // -mu is the lowest mean-field eigenvalue
  double lambda1 = 0.0;          // second eigenvalue of the converged operator
  double gap = 0.0;              // min(lambda1, 0) - lambda0 > 0
  double energy = 0.0;           // total energy I(1) of the converged orbital
  double energy_dual = 0.0;      // lambda0 - D/2, equal to I(1) at the fixed point
  double m1 = 0.0;               // second moment int |x|^2 |v|^2
  double residual = 0.0;         // final L1 density residual
  double eig_residual = 0.0;     // eigenpair residual of the last solve
  int iterations = 0;
  std::vector<double> v;         // orbital samples, positive, int 2 pi r v^2 = 1
  std::vector<double> vmf;       // mean-field potential samples
  std::vector<double> vext;      // -1/r + Vpp samples
  std::vector<double> energy_trace;
  RadialGrid grid;
};

// fixed point of v -> ground state of -Delta + Vext + rho * 1/|.| with linear
// density mixing; nullopt when the operator loses its bound state, throws
// std::runtime_error when max_iter is exhausted
std::optional<AtomSolution> scf_atom(const PseudoPotential& pp, const RadialGrid& g,
                                     double mixing = 0.5, double tol = 1e-9,
                                     int max_iter = 400);

// two-sided decay envelope check: rho(r) = v(r)(1+sqrt r)e^{sqrt(mu) r} on
// [2, 0.7 rmax] must have bounded spread; the tail slope of -log v recovers
// sqrt(mu)
struct DecayReport {
  double spread = 0.0;       // max/min of the compensated ratio
  double slope = 0.0;        // least-squares slope of -log v
  double slope_rel = 0.0;    // relative deviation from sqrt(mu)
  double slope_corrected = 0.0;  // slope of -log[v (1+sqrt r)]
  bool pass = false;         // spread <= 50 and window usable
  bool slope_ok = false;     // slope_rel <= 0.05
};
DecayReport decay_check(const AtomSolution& sol);

// bisection for the bound-state onset of the eta-indexed family; requires a
// bracketing pair (unbound at eta_lo, bound at eta_hi)
struct IonizationReport {
  double lo = 0.0, hi = 0.0;
  int legs = 0;
};
IonizationReport ionization_check(const std::function<PseudoPotential(double)>& family,
                                  const RadialGrid& g, double eta_lo, double eta_hi,
                                  double width = 1e-3);

// far-field detector: 4 r^3 V_MF(r) / m1 at r = rmax/2 sits in [0.9, 1.1]
// when V_MF decays like the dipole-free multipole tail m1 / (4 r^3)
struct FarFieldReport {
  double m1 = 0.0;
  double r_probe = 0.0;
  double ratio = 0.0;
  bool pass = false;
};
FarFieldReport vmf_far_field(const AtomSolution& sol);

}  // namespace bloch2d
