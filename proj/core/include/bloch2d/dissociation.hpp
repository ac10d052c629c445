#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "bloch2d/atom.hpp"
#include "bloch2d/lattice.hpp"
#include "bloch2d/scf.hpp"
#include "bloch2d/tightbinding.hpp"

namespace bloch2d {

// Machinery for the strong-dilation regime, where the crystal decouples into
// weakly coupled atomic wells. A radial cutoff isolates one well, its ground
// state provides the localized orbital, and overlaps and effective hoppings
// between neighboring orbitals are extracted by quadrature. The resulting
// two-parameter nearest-neighbor model (on-site level, one hopping per edge
// class) is then compared against the plane-wave bands at the same scale.

// Radial cutoff: identically one out to (1+delta)/2 d0 and zero past
// (1/2+delta) d0, with d0 the nearest-neighbor distance of the unit lattice.
// Built as chi = 1 - (1-eta)^2 where eta is a quintic smoothstep ramp, so
// sqrt(1-chi) = 1-eta stays C^1 across both seams by construction.
struct CutoffProfile {
  double delta = 0.0;
  double d0 = 0.0;
  double r_inner = 0.0;  // chi == 1 inside
  double r_outer = 0.0;  // chi == 0 outside

  double operator()(double s) const;  // chi(s)
  double ramp(double s) const;        // eta(s) = sqrt(1 - chi), C^1
};
// requires delta in (0, 1/2) and d0 > 0
CutoffProfile make_cutoff(double delta, double d0);

// periodic mean-field potential evaluated at physical coordinates
using PotentialField = std::function<double(const Vec2&)>;

// Superposition of isolated-atom mean fields centered on the dilated vertex
// set: sites within `reach` times L of the evaluation point are summed, the
// radial table continued past its last node by the far tail m1 / (4 r^3).
PotentialField superposition_field(const AtomSolution& atom, const MotifLattice& m, double L,
                                   double reach = 12.0);

// Real-space synthesis of a converged self-consistent mean field. Unit-frame
// coefficients are divided by L^2 to give physical energies; requires a
// converged state with L > 0 and no external constant shift.
PotentialField synthesized_field(const SCFState& state);

// Ground state of one isolated well: the potential is cut off by chi around
// the chosen center, angularly averaged, and solved on a graded radial grid.
struct WellOrbital {
  double mu_L = 0.0;  // minus the lowest eigenvalue of the cut-off well
  double gap = 0.0;   // distance to the next radial level
  double L = 0.0;
  RadialGrid grid;
  std::vector<double> u;       // positive samples, sum mass u^2 = 1
  std::vector<double> v_well;  // chi-localized angular average of the field

  // log-linear interpolation between nodes, zero past the grid
  double value(double s) const;
};
// rmax = 0 or n = 0 pick defaults scaled to L (tail reach 8 d0 L); throws
// std::runtime_error when the cut-off well has no bound state
WellOrbital well_orbital(const PotentialField& field, const Vec2& center_phys, double L,
                         const CutoffProfile& chi, double rmax = 0.0, int n = 0);

// overlap of two copies of the radial orbital at center distance D, reduced
// to a 2D quadrature in elliptic coordinates (exact for D = 0)
double pair_overlap(const WellOrbital& orb, double D);
// brute-force Cartesian oracle for the same integral, step h
double pair_overlap_grid(const WellOrbital& orb, double D, double h);

struct ThetaEstimate {
  double theta = 0.0;
  double quad_error = 0.0;  // difference of the last two refinement levels
  double L = 0.0;
  double T_L = 0.0;  // tunneling scale e^{-sqrt(mu_reference) L}
};

// Effective hopping <v_r, chi_r V (1 - chi_r') v_r'> for a nearest-neighbor
// edge of the unit motif, by polar quadrature about the first center with one
// or two dyadic refinements. mu_reference sets the reported tunneling scale.
ThetaEstimate interaction_coefficient(const WellOrbital& orb, const PotentialField& field,
                                      const MotifLattice& m, double L, const Edge& pair,
                                      const CutoffProfile& chi, double mu_reference);

// Overlap matrix of the orbital family on all vertices within `radius` of the
// origin (unit frame), its inverse square root, and the residual after
// removing the identity and the nearest-neighbor part.
struct GramData {
  double radius = 0.0;
  std::vector<Vec2> vertices;  // unit frame
  Eigen::MatrixXd Q;
  Eigen::MatrixXd Qinv_sqrt;
  double zeta = 0.0;           // nearest-neighbor overlap
  double nn_residual = 0.0;    // ||Q - I - zeta J||_2
  double orth_residual = 0.0;  // max entry of Qinv_sqrt Q Qinv_sqrt - I
};
// requires radius >= 2 d0; throws std::runtime_error when the truncated
// matrix is not positive definite (truncation too aggressive at small L)
GramData gram_matrix(const WellOrbital& orb, const MotifLattice& m, double L, double radius);

// On-site level from the cut-off well and one hopping per edge orbit, on the
// dilated motif, so the assembled Bloch matrices take physical momenta.
TBModel tb_from_first_principles(const AtomSolution& atom, const PotentialField& field,
                                 const MotifLattice& m, double L, const CutoffProfile& chi);

// physical-frame plane-wave bands of a converged state along a unit-frame
// path (fiber eigenvalues divided by L^2); requires L > 0. The default basis
// is the state's own cutoff; that basis is smaller than the Fourier rectangle
// of the stored field, so eigenvalues carry a projection offset. Pass a
// larger ecut to resolve the bands of the stored field itself.
std::vector<std::vector<double>> physical_bands(const SCFState& state, const KPath& unit_path,
                                                int n_bands, double ecut = 0.0);

// Band-by-band comparison of the nearest-neighbor model with plane-wave bands
// on the same path (physical frame). The pointwise error statistics quantify
// how uniform the residual is along the path.
struct TheoremCheck {
  std::vector<double> sup_err;   // per band
  double sup_total = 0.0;
  double theta_scale = 0.0;      // max |hopping| of the model
  double ratio = 0.0;            // sup_total / theta_scale
  double max_over_median = 0.0;  // pointwise error spread along the path
};
TheoremCheck theorem_check(const TBModel& tb, const std::vector<std::vector<double>>& pw_bands,
                           const KPath& path);

// least squares on the log of |values| against L, with the 1-sigma slope
// error from the fit residuals
struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
};
DecayFit log_decay_fit(const std::vector<double>& L, const std::vector<double>& values);

}  // namespace bloch2d
