#include "bloch2d/planewave.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace bloch2d {

namespace {

// FFTW plan creation/destruction is not thread safe
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

std::complex<double> lookup(const FourierMap& vhat, const IVec2& v) {
  const auto it = vhat.find(v);
  return it == vhat.end() ? std::complex<double>(0.0, 0.0) : it->second;
}

bool same_lattice(const BravaisLattice& a, const BravaisLattice& b) {
  return a.u1.x == b.u1.x && a.u1.y == b.u1.y && a.u2.x == b.u2.x && a.u2.y == b.u2.y;
}

}  // namespace

long PWBasis::extent1() const {
  if (index.empty()) return 0;
  long lo = index[0].x, hi = index[0].x;
  for (const auto& m : index) {
    lo = std::min(lo, m.x);
    hi = std::max(hi, m.x);
  }
  return hi - lo;
}

long PWBasis::extent2() const {
  if (index.empty()) return 0;
  long lo = index[0].y, hi = index[0].y;
  for (const auto& m : index) {
    lo = std::min(lo, m.y);
    hi = std::max(hi, m.y);
  }
  return hi - lo;
}

PWBasis build_basis(const BravaisLattice& lat, const Vec2& k, double ecut) {
  PWBasis b;
  b.k = k;
  b.ecut = ecut;
  b.lattice = lat;
  const double r2 = 2.0 * ecut;
  if (r2 >= 0.0) {
    // |m1| = |u1.G| / 2 pi <= |u1| (sqrt(2 Ecut) + |k|) / 2 pi, same for m2
    const double reach = std::sqrt(r2) + k.norm();
    const long b1 = (long)std::floor(lat.u1.norm() * reach / (2 * M_PI)) + 1;
    const long b2 = (long)std::floor(lat.u2.norm() * reach / (2 * M_PI)) + 1;
    std::vector<std::tuple<double, long, long>> found;
    for (long m1 = -b1; m1 <= b1; ++m1)
      for (long m2 = -b2; m2 <= b2; ++m2) {
        const double kin = (lat.dual_point({m1, m2}) + k).norm2();
        if (kin <= r2) found.emplace_back(kin, m1, m2);
      }
    std::sort(found.begin(), found.end());
    b.index.reserve(found.size());
    b.g.reserve(found.size());
    b.kinetic.reserve(found.size());
    for (const auto& [kin, m1, m2] : found) {
      b.index.push_back({m1, m2});
      b.g.push_back(lat.dual_point({m1, m2}));
      b.kinetic.push_back(kin);
    }
  }
  if (b.index.empty()) throw std::invalid_argument("empty plane-wave basis: raise the cutoff");
  return b;
}

Eigen::MatrixXcd assemble_fiber(const PWBasis& basis, const FourierMap& vhat) {
  double cmax = 0.0;
  for (const auto& [v, c] : vhat) cmax = std::max(cmax, std::abs(c));
  for (const auto& [v, c] : vhat)
    if (std::abs(std::conj(lookup(vhat, -v)) - c) > 1e-12 * (1.0 + cmax))
      throw std::invalid_argument("potential coefficients must satisfy vhat(-v) = conj vhat(v)");

  const int n = basis.size();
  const double root_area = std::sqrt(basis.lattice.cell_area);
  Eigen::MatrixXcd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::complex<double> val = lookup(vhat, basis.index[i] - basis.index[j]) * root_area;
      if (i == j) val += basis.kinetic[i];
      h(i, j) = val;
    }
  return h;
}

FiberSpectrum diagonalize(const PWBasis& basis, const Eigen::MatrixXcd& h, int n_bands,
                          bool want_vectors) {
  const int n = basis.size();
  if (h.rows() != n || h.cols() != n)
    throw std::invalid_argument("fiber matrix does not match the basis");
  if (n_bands < 1 || n_bands > n)
    throw std::invalid_argument("n_bands must lie in [1, basis size]");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      h, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("fiber diagonalization failed");
  FiberSpectrum s;
  s.k = basis.k;
  s.basis = basis;
  s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n_bands);
  if (want_vectors) s.vectors = es.eigenvectors().leftCols(n_bands);
  return s;
}

std::vector<FiberSpectrum> band_structure(const BravaisLattice& lat, const FourierMap& vhat,
                                          const KPath& path, double ecut, int n_bands) {
  std::vector<FiberSpectrum> out;
  out.reserve(path.k.size());
  for (const Vec2& k : path.k) {
    const PWBasis basis = build_basis(lat, k, ecut);
    out.push_back(diagonalize(basis, assemble_fiber(basis, vhat), n_bands, false));
  }
  return out;
}

std::complex<double> DensityField::coefficient(const IVec2& v) const {
  if (rho_hat.empty() || 2 * std::labs(v.x) > n1 || 2 * std::labs(v.y) > n2) return {0.0, 0.0};
  const long s1 = ((v.x % n1) + n1) % n1;
  const long s2 = ((v.y % n2) + n2) % n2;
  return rho_hat[(std::size_t)s1 * n2 + s2];
}

DensityField density_from_states(const std::vector<FiberSpectrum>& states,
                                 const std::vector<std::vector<double>>& occupations,
                                 const std::vector<double>& kweights, double electrons, int n1,
                                 int n2) {
  if (states.empty()) throw std::invalid_argument("no states supplied");
  if (occupations.size() != states.size() || kweights.size() != states.size())
    throw std::invalid_argument("occupations and weights must match the state list");

  double total = 0.0;
  long d1 = 0, d2 = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const FiberSpectrum& st = states[i];
    if (!same_lattice(st.basis.lattice, states[0].basis.lattice))
      throw std::invalid_argument("states mix different lattices");
    if (kweights[i] <= 0.0) throw std::invalid_argument("k-point weights must be positive");
    if (st.vectors.rows() != st.basis.size())
      throw std::invalid_argument("states must carry eigenvectors");
    if ((int)occupations[i].size() > (int)st.vectors.cols())
      throw std::invalid_argument("occupation list exceeds the available bands");
    for (double f : occupations[i]) {
      if (f < -1e-12 || f > 1.0 + 1e-12)
        throw std::invalid_argument("occupations must lie in [0, 1]");
      total += kweights[i] * f;
    }
    d1 = std::max(d1, st.basis.extent1());
    d2 = std::max(d2, st.basis.extent2());
  }
  if (std::abs(total - electrons) > 1e-8 * std::max(1.0, std::abs(electrons)))
    throw std::invalid_argument("occupations do not sum to the electron count");

  // |psi|^2 carries index differences up to the basis diameter per axis
  if (n1 == 0) n1 = (int)(2 * d1 + 2);
  if (n2 == 0) n2 = (int)(2 * d2 + 2);
  if (n1 < 2 * d1 + 1 || n2 < 2 * d2 + 1)
    throw std::invalid_argument("fft grid too small: |psi|^2 products alias");

  DensityField out;
  out.n1 = n1;
  out.n2 = n2;
  out.lattice = states[0].basis.lattice;
  out.electrons = electrons;
  const std::size_t ngrid = (std::size_t)n1 * n2;
  out.rho.assign(ngrid, 0.0);

  fftw_complex* buf;
  fftw_complex* wave;
  fftw_plan back, fwd;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    buf = fftw_alloc_complex(ngrid);
    wave = fftw_alloc_complex(ngrid);
    back = fftw_plan_dft_2d(n1, n2, buf, wave, FFTW_BACKWARD, FFTW_ESTIMATE);
    fwd = fftw_plan_dft_2d(n1, n2, buf, wave, FFTW_FORWARD, FFTW_ESTIMATE);
  }

  const double area = out.lattice.cell_area;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const FiberSpectrum& st = states[i];
    for (std::size_t nb = 0; nb < occupations[i].size(); ++nb) {
      const double f = occupations[i][nb];
      if (f <= 0.0) continue;
      for (std::size_t j = 0; j < ngrid; ++j) buf[j][0] = buf[j][1] = 0.0;
      for (int t = 0; t < st.basis.size(); ++t) {
        const IVec2 m = st.basis.index[t];
        const long s1 = ((m.x % n1) + n1) % n1;
        const long s2 = ((m.y % n2) + n2) % n2;
        const std::complex<double> c = st.vectors(t, (Eigen::Index)nb);
        buf[(std::size_t)s1 * n2 + s2][0] += c.real();
        buf[(std::size_t)s1 * n2 + s2][1] += c.imag();
      }
      fftw_execute(back);
      const double scale = kweights[i] * f / area;
      for (std::size_t j = 0; j < ngrid; ++j)
        out.rho[j] += scale * (wave[j][0] * wave[j][0] + wave[j][1] * wave[j][1]);
    }
  }

  for (std::size_t j = 0; j < ngrid; ++j) {
    buf[j][0] = out.rho[j];
    buf[j][1] = 0.0;
  }
  fftw_execute(fwd);
  out.rho_hat.resize(ngrid);
  const double inv = 1.0 / double(ngrid);
  for (std::size_t j = 0; j < ngrid; ++j)
    out.rho_hat[j] = std::complex<double>(wave[j][0] * inv, wave[j][1] * inv);

  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(back);
    fftw_destroy_plan(fwd);
    fftw_free(buf);
    fftw_free(wave);
  }
  return out;
}

}  // namespace bloch2d
