#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bloch2d/lattice.hpp"
#include "bloch2d/vec2.hpp"

namespace bloch2d {

// nearest-neighbor hopping model on a motif lattice: on-site level -mu_L plus
// one real hopping amplitude per edge orbit
struct TBModel {
  double mu_L = 0.0;
  std::vector<double> thetas;  // one entry per orbit
  EdgeOrbitSet orbit_set;
  MotifLattice motif;
};

// hopping scale exp(-sqrt(mu) L) of a dilated lattice with atomic level -mu
double tunneling_coefficient(double mu, double L);

// B(k)_{r,r'} = sum of e^{ik.u} over lattice shifts u with (r, u + r') in the orbit
Eigen::MatrixXcd bloch_matrix(const MotifLattice& m, const EdgeOrbitSet& orbits, int orbit_index,
                              const Vec2& k);

struct TBBands {
  KPath path;
  std::vector<std::vector<double>> bands;  // per path point, ascending
};

// eigenvalues of -mu_L I + sum_j theta_j B_j(k) along the path
TBBands tb_bands(const TBModel& model, const KPath& path);

// rows (segment_label, arc_length, kx, ky, band_1..band_N)
std::string band_csv(const TBBands& b);

// two-band dispersion of the unit hexagonal sheet, -+|1 + e^{ik.u1} + e^{ik.u2}|
std::pair<double, double> wallace_dispersion(const Vec2& k);

struct DiracReport {
  Vec2 vertex;
  double slope = 0.0;        // cone slope fitted on the half-splitting
  double cone_energy = 0.0;  // band center at the vertex
  double residual = 0.0;     // rms misfit of the through-origin fit
  double gap = 0.0;          // band splitting at the vertex itself
};

// Samples (minus, plus) band pairs on rings of sample directions around the
// vertex and fits the half-splitting, less half the vertex gap, against
// |kappa| through the origin. Throws when fewer than 8 directions or 2 radii
// are requested.
DiracReport dirac_report(const std::function<std::pair<double, double>(const Vec2&)>& bands,
                         const Vec2& vertex, double radius, int directions = 12, int radii = 3);

std::string to_json(const DiracReport& r);

}  // namespace bloch2d
