#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bloch2d/atom.hpp"
#include "bloch2d/kernel.hpp"
#include "bloch2d/lattice.hpp"
#include "bloch2d/planewave.hpp"
#include "bloch2d/vec2.hpp"

namespace bloch2d {

// Periodic restricted mean-field solver.
//
// Everything lives on the unit-cell frame: positions are measured in units of
// the lattice scale L, so the Hamiltonian picks up the factor L^2 that the
// substitution x = L y produces. One plane-wave cutoff then serves every L,
// the L -> 0 limit is literally the free Laplacian on the fixed lattice, and
// physical energies are recovered by dividing by L^2.
struct SCFConfig {
  MotifLattice motif = honeycomb();
  double L = 1.0;          // lattice scale; 0 switches the potential off
  double ecut = 200.0;     // plane-wave cutoff (unit frame)
  int kgrid = 12;          // Gamma-centered kgrid x kgrid; multiples of 3 hit K
  double sigma = 1e-2;     // Gaussian smearing width (unit-frame energy)
  double q = 2.0;          // spin factor in front of the Hartree term
  double electrons = 1.0;  // electrons per cell and spin channel, N/q
  double mixing = 0.5;     // linear density mixing weight
  int anderson = 0;        // Anderson history depth; < 2 keeps plain mixing
  double tol = 1e-8;       // Fourier density residual tolerance
  int max_iter = 200;
  int n_bands = 6;
  std::optional<PseudoPotential> pp;  // physical-frame core potential
  bool atomic_guess = true;  // start from superposed isolated-atom densities
  double external_constant = 0.0;  // constant added to V_ext (gauge handle)
  int path_samples = 40;           // per segment, for phase-scan band paths
};

struct SCFState {
  SCFConfig config;
  DensityField density;       // output density of the last fiber solve
  FourierMap density_in;      // density those fibers were assembled from
  FourierMap vext;            // external potential, plain coefficients
  FourierMap vmf;             // mean field of the last solve, plain coefficients
  FourierMap hartree_kernel;  // convolution multiplier: V_H = q * hk * rho_hat
  std::vector<Vec2> kpoints;
  double kweight = 0.0;
  std::vector<FiberSpectrum> spectra;  // one per k-grid point
  std::vector<std::vector<double>> occ;
  double fermi = 0.0;
  double energy = std::numeric_limits<double>::quiet_NaN();       // functional route
  double energy_band = std::numeric_limits<double>::quiet_NaN();  // band-sum route
  std::vector<double> residual_log;
  int iterations = 0;
  bool converged = false;
};

enum class Phase { metal, dirac_semimetal, insulator_like };
enum class BandPlacement { bands_1_2, bands_2_3 };
std::string to_string(Phase p);
std::string to_string(BandPlacement p);

struct PhaseReport {
  double L = 0.0;
  Phase phase = Phase::insulator_like;
  double lambda = 0.0;      // cone energy: mean of bands 1,2 at K
  double fermi = 0.0;
  double vertex_gap = 0.0;  // band-2 minus band-1 splitting at K
  double min_gap = 0.0;     // minimal direct gap 1 -> 2 along the path
  double overlap = 0.0;     // min band 2 - max band 1 away from vertices
  bool scf_converged = false;
  int iterations = 0;
};

struct WeakContrastReport {
  double c11 = 0.0;  // mean-field coefficient on v1+v2, physical normalization
  BandPlacement placement = BandPlacement::bands_1_2;
  double gap_lower = 0.0;  // K-fiber spacing band 2 - band 1
  double gap_upper = 0.0;  // K-fiber spacing band 3 - band 2
};

// 2 pi int_0^support f(r) J0(s r) r dr, the planar radial Fourier transform
// of a compactly supported profile
double radial_fourier(const std::function<double(double)>& f, double support, double s);

// plain Fourier coefficients, on the requested dual indices, of the
// physical-frame external potential
//   -sum_r W_L(. - L r) + sum_r sum_u Vpp(. - L (u + r)),
// i.e. (-w(v) + FT[Vpp](|v|) / |Gamma_L|) S(v) with the motif structure
// factor S(v) = sum_r e^{-i v . L r}
FourierMap external_potential(const MotifLattice& m, double L, const PeriodicKernel& kern,
                              const std::optional<PseudoPotential>& pp,
                              const std::vector<IVec2>& indices);

// Gaussian-smearing occupations f = erfc((lambda - fermi) / sigma) / 2
std::vector<double> occupations(const std::vector<double>& eigenvalues, double fermi,
                                double sigma);

// bisection for sum_k w_k sum_n f(lambda_nk) = target with uniform weights
// w_k = 1 / #k; the top edge of the computed spectrum must stay empty
// (occupation < 1e-8 there), so no weight can hide in uncomputed bands
double fermi_level(const std::vector<std::vector<double>>& bands, double target,
                   double sigma);

// fixed-point iteration for V_MF = V_ext + q (rho * W_L) with linear density
// mixing; stops when the Fourier residual |drho|_2 |Gamma| / electrons drops
// below tol, returns converged = false when max_iter runs out
SCFState scf_loop(const SCFConfig& config);

// mean-field energy per cell of a converged state: kinetic + external +
// (q/2) D(rho, rho). Also evaluates the band-sum route
// sum w f lambda - (q/2) D - (mixing correction) and insists the two agree
// to 1e-6.
double rhf_energy(const SCFState& state, const SCFConfig& config);

// run the solver per L, compute bands along Gamma-K-M-Gamma, and classify:
// metal when bands 1, 2 overlap away from the zone vertices (and the Fermi
// level sits below the cone), Dirac semi-metal when they touch only at the
// vertices with the Fermi level pinned there within 3 sigma
std::vector<PhaseReport> phase_scan(const std::vector<double>& Ls, const SCFConfig& tmpl);

// first-shell coefficient of the converged mean field and which band pair
// hosts the K-point touching (spacing comparison within the K fiber)
WeakContrastReport weak_contrast_check(const SCFState& state);

}  // namespace bloch2d
