#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <vector>

#include "bloch2d/lattice.hpp"
#include "bloch2d/vec2.hpp"

namespace bloch2d {

// Fourier coefficients of a periodic potential, keyed by dual-lattice index;
// entries absent from the map are zero. The convention is fixed by the fiber
// assembly below: a constant potential c is the single entry {0, c/sqrt(area)}.
using FourierMap = std::map<IVec2, std::complex<double>>;

// truncated plane-wave basis of the Bloch fiber at quasi-momentum k:
// all dual vectors with |G+k|^2 <= 2 Ecut, ordered by kinetic energy with
// lexicographic index tie-break so the layout is reproducible
struct PWBasis {
  Vec2 k;
  double ecut = 0.0;
  BravaisLattice lattice;
  std::vector<IVec2> index;
  std::vector<Vec2> g;
  std::vector<double> kinetic;  // |g + k|^2

  int size() const { return (int)index.size(); }
  // index diameter per axis, the aliasing-relevant extent
  long extent1() const;
  long extent2() const;
};

PWBasis build_basis(const BravaisLattice& lat, const Vec2& k, double ecut);

// H_{GG'} = |G+k|^2 delta + Vhat(G-G') sqrt(area); validates the Hermitian
// symmetry Vhat(-v) = conj Vhat(v) of the supplied coefficients
Eigen::MatrixXcd assemble_fiber(const PWBasis& basis, const FourierMap& vhat);

struct FiberSpectrum {
  Vec2 k;
  std::vector<double> eigenvalues;  // ascending, n_bands entries
  Eigen::MatrixXcd vectors;         // column n = plane-wave coefficients of band n
  PWBasis basis;
};

// lowest n_bands eigenpairs of the assembled fiber (dense Hermitian solve)
FiberSpectrum diagonalize(const PWBasis& basis, const Eigen::MatrixXcd& H, int n_bands,
                          bool want_vectors = true);

// independent fiber solves along a k-path
std::vector<FiberSpectrum> band_structure(const BravaisLattice& lat, const FourierMap& vhat,
                                          const KPath& path, double ecut, int n_bands);

// lowest n_bands eigenpairs without assembling the fiber matrix: the kinetic
// term stays diagonal and the potential acts by FFT convolution on a grid
// padded past the aliasing bound, driven by a block LOBPCG iteration with
// kinetic-shift preconditioning. Same spectrum as `diagonalize` (the dense
// route stays as the cross-check oracle); intended for bases too large to
// assemble. Residual target: |H x - lambda x| <= tol (1 + |lambda|) per band.
FiberSpectrum diagonalize_iterative(const PWBasis& basis, const FourierMap& vhat, int n_bands,
                                    double tol = 1e-7, int max_iter = 500);

std::vector<FiberSpectrum> band_structure_iterative(const BravaisLattice& lat,
                                                    const FourierMap& vhat, const KPath& path,
                                                    double ecut, int n_bands, double tol = 1e-7);

// electron density on the periodic cell: Fourier coefficients on the FFT
// product grid plus real-space samples at x = (i1/n1) u1 + (i2/n2) u2
struct DensityField {
  int n1 = 0, n2 = 0;
  BravaisLattice lattice;
  std::vector<std::complex<double>> rho_hat;  // plain coefficients, FFT frequency layout
  std::vector<double> rho;                    // row-major real samples, i1 * n2 + i2
  double electrons = 0.0;

  double value(int i1, int i2) const { return rho[(std::size_t)i1 * n2 + i2]; }
  // coefficient of e^{i v.x} for dual index v; zero outside the grid's range
  std::complex<double> coefficient(const IVec2& v) const;
};

// rho(x) = sum_k w_k sum_n f_nk |psi_nk(x)|^2 via FFT synthesis; occupations
// must be in [0,1] and sum (with weights) to the electron count within 1e-8.
// Grid sizes of 0 pick the smallest even sizes free of product aliasing; an
// explicit grid below the aliasing bound is rejected.
DensityField density_from_states(const std::vector<FiberSpectrum>& states,
                                 const std::vector<std::vector<double>>& occupations,
                                 const std::vector<double>& kweights, double electrons,
                                 int n1 = 0, int n2 = 0);

}  // namespace bloch2d
