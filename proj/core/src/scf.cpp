#include "bloch2d/scf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "bloch2d/quadrature.hpp"
#include "bloch2d/radial.hpp"

namespace bloch2d {

namespace {

const std::complex<double> I{0.0, 1.0};

double cell_area(const BravaisLattice& lat) { return std::abs(cross(lat.u1, lat.u2)); }

std::complex<double> lookup(const FourierMap& m, const IVec2& v) {
  auto it = m.find(v);
  return it == m.end() ? std::complex<double>(0.0) : it->second;
}

std::vector<IVec2> rect_indices(long d1, long d2) {
  std::vector<IVec2> out;
  out.reserve((std::size_t)(2 * d1 + 1) * (std::size_t)(2 * d2 + 1));
  for (long a = -d1; a <= d1; ++a)
    for (long b = -d2; b <= d2; ++b) out.push_back({a, b});
  return out;
}

FourierMap scaled_map(const FourierMap& m, double factor) {
  FourierMap out;
  for (const auto& kv : m) out[kv.first] = kv.second * factor;
  return out;
}

// superposition of isolated-atom densities, transformed per site; falls back
// to the uniform density when the atomic problem fails to bind or converge
FourierMap initial_density(const SCFConfig& cfg, const std::vector<IVec2>& rect,
                           double area) {
  FourierMap rho;
  for (const auto& v : rect) rho[v] = 0.0;
  rho[IVec2{0, 0}] = cfg.electrons / area;
  if (!cfg.atomic_guess || cfg.L <= 0.0) return rho;
  AtomSolution sol;
  try {
    PseudoPotential pp = cfg.pp ? *cfg.pp : PseudoPotential{};
    auto s = scf_atom(pp, make_radial_grid(800, 20.0));
    if (!s) return rho;
    sol = *s;
  } catch (const std::exception&) {
    return rho;
  }
  const auto& lat = cfg.motif.bravais;
  double per_site = cfg.electrons / (double)cfg.motif.shifts.size();
  for (const auto& v : rect) {
    if (v.x == 0 && v.y == 0) continue;
    Vec2 vp = lat.dual_point(v);
    double s = vp.norm() / cfg.L;
    if (s > 150.0) continue;  // transform negligible, quadrature unresolved
    double form = 0.0;
    for (int i = 0; i < sol.grid.n; ++i)
      form += sol.grid.mass[i] * sol.v[i] * sol.v[i] *
              std::cyl_bessel_j(0.0, s * sol.grid.r[i]);
    std::complex<double> S = 0.0;
    for (const auto& r : cfg.motif.shifts) S += std::exp(-I * vp.dot(r));
    rho[v] = per_site / area * S * form;
  }
  return rho;
}

// both energy routes of a solved state: the functional
// T + int V_ext rho + (q/2) D(rho, rho) and the band sum
// sum w f lambda - q H(rho_in, rho_out) + (q/2) D(rho_out, rho_out); they
// agree identically because each lambda carries the Hartree field of rho_in
std::pair<double, double> energy_routes(const SCFState& st, const SCFConfig& cfg) {
  double area = cell_area(cfg.motif.bravais);
  double kinetic = 0.0, band_sum = 0.0;
  for (std::size_t ik = 0; ik < st.spectra.size(); ++ik) {
    const auto& sp = st.spectra[ik];
    for (std::size_t n = 0; n < st.occ[ik].size(); ++n) {
      double wf = st.kweight * st.occ[ik][n];
      band_sum += wf * sp.eigenvalues[n];
      for (int g = 0; g < sp.basis.size(); ++g)
        kinetic += wf * sp.basis.kinetic[g] * std::norm(sp.vectors(g, (int)n));
    }
  }
  double ext = 0.0, dterm = 0.0, cross_term = 0.0;
  for (const auto& kv : st.vext) {
    const IVec2& v = kv.first;
    std::complex<double> out = st.density.coefficient(v);
    double hk = std::real(lookup(st.hartree_kernel, v));
    ext += std::real(kv.second * std::conj(out)) * area;
    dterm += hk * std::norm(out) * area;
    cross_term += hk * std::real(lookup(st.density_in, v) * std::conj(out)) * area;
  }
  double functional = kinetic + ext + 0.5 * cfg.q * dterm;
  double band = band_sum - cfg.q * cross_term + 0.5 * cfg.q * dterm;
  return {functional, band};
}

double vertex_distance(const BravaisLattice& lat, const Vec2& k) {
  Vec2 K = special_point(lat, "K");
  double d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 6; ++j) {
    Vec2 img = Mat2::rotation(j * M_PI / 3.0).apply(K);
    d = std::min(d, (k - img).norm());
  }
  return d;
}

PhaseReport classify(const SCFState& st) {
  const SCFConfig& cfg = st.config;
  const auto& lat = cfg.motif.bravais;
  double area = cell_area(lat);
  KPath path = k_path(lat, std::vector<std::string>{"G", "K", "M", "G"}, cfg.path_samples);
  FourierMap amap = scaled_map(st.vmf, 1.0 / std::sqrt(area));
  auto bands = band_structure(lat, amap, path, cfg.ecut, 3);

  PhaseReport rep;
  rep.L = cfg.L;
  rep.fermi = st.fermi;
  rep.scf_converged = st.converged;
  rep.iterations = st.iterations;

  std::size_t iK = path.waypoint_index[1];
  rep.lambda = 0.5 * (bands[iK].eigenvalues[0] + bands[iK].eigenvalues[1]);
  rep.vertex_gap = bands[iK].eigenvalues[1] - bands[iK].eigenvalues[0];

  double exclusion = 0.1 * special_point(lat, "K").norm();
  double min2 = std::numeric_limits<double>::infinity();
  double max1 = -std::numeric_limits<double>::infinity();
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.k.size(); ++i) {
    double e0 = bands[i].eigenvalues[0], e1 = bands[i].eigenvalues[1];
    min2 = std::min(min2, e1);
    rep.min_gap = std::min(rep.min_gap, e1 - e0);
    if (vertex_distance(lat, path.k[i]) > exclusion) max1 = std::max(max1, e0);
  }
  rep.overlap = min2 - max1;

  double tol = 3.0 * cfg.sigma;
  if (rep.overlap < 0.0 && rep.fermi < rep.lambda)
    rep.phase = Phase::metal;
  else if (rep.overlap >= 0.0 && rep.vertex_gap <= tol &&
           std::abs(rep.fermi - rep.lambda) <= tol)
    rep.phase = Phase::dirac_semimetal;
  else
    rep.phase = Phase::insulator_like;
  return rep;
}

}  // namespace

std::string to_string(Phase p) {
  switch (p) {
    case Phase::metal: return "metal";
    case Phase::dirac_semimetal: return "dirac-semi-metal";
    default: return "insulator-like";
  }
}

std::string to_string(BandPlacement p) {
  return p == BandPlacement::bands_1_2 ? "bands-1-2" : "bands-2-3";
}

double radial_fourier(const std::function<double(double)>& f, double support, double s) {
  if (!(support > 0.0)) throw std::invalid_argument("radial_fourier: support must be positive");
  if (!f) throw std::invalid_argument("radial_fourier: empty profile");
  s = std::abs(s);
  static const QuadRule rule = gauss_legendre(24);
  int panels = 4 + (int)std::min(2000.0, s * support / 2.0);
  auto g = [&](double r) { return f(r) * std::cyl_bessel_j(0.0, s * r) * r; };
  return 2.0 * M_PI * integrate(g, 0.0, support, panels, rule);
}

FourierMap external_potential(const MotifLattice& m, double L, const PeriodicKernel& kern,
                              const std::optional<PseudoPotential>& pp,
                              const std::vector<IVec2>& indices) {
  if (!(L > 0.0)) throw std::invalid_argument("external_potential: L must be positive");
  if (m.shifts.empty()) throw std::invalid_argument("external_potential: empty motif");
  double mismatch = (kern.lattice.u1 - m.bravais.u1 * L).norm() +
                    (kern.lattice.u2 - m.bravais.u2 * L).norm();
  if (mismatch > 1e-9 * L)
    throw std::invalid_argument("external_potential: kernel lattice mismatch");
  double area = cell_area(kern.lattice);
  bool have_pp = pp && pp->shape;
  FourierMap out;
  for (const auto& v : indices) {
    Vec2 vp = kern.lattice.dual_point(v);
    double w = kernel_coefficient_plain(kern, vp);
    double ft = have_pp
                    ? radial_fourier([&](double r) { return (*pp)(r); }, pp->support,
                                     vp.norm()) / area
                    : 0.0;
    std::complex<double> S = 0.0;
    for (const auto& r : m.shifts) S += std::exp(-I * vp.dot(r * L));
    out[v] = (-w + ft) * S;
  }
  return out;
}

std::vector<double> occupations(const std::vector<double>& eigenvalues, double fermi,
                                double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("occupations: smearing width must be positive");
  std::vector<double> f(eigenvalues.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = 0.5 * std::erfc((eigenvalues[i] - fermi) / sigma);
  return f;
}

double fermi_level(const std::vector<std::vector<double>>& bands, double target,
                   double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("fermi_level: smearing width must be positive");
  if (bands.empty()) throw std::invalid_argument("fermi_level: no band data");
  double w = 1.0 / (double)bands.size();
  double capacity = 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& row : bands) {
    if (row.empty()) throw std::invalid_argument("fermi_level: empty band row");
    capacity += w * (double)row.size();
    lo = std::min(lo, row.front());
    hi = std::max(hi, row.back());
  }
  if (!(target > 0.0) || !(target < capacity))
    throw std::invalid_argument("fermi_level: target outside the band capacity");

  auto count = [&](double e) {
    double n = 0.0;
    for (const auto& row : bands)
      for (double l : row) n += w * 0.5 * std::erfc((l - e) / sigma);
    return n;
  };

  double a = lo - 20.0 * sigma, b = hi + 20.0 * sigma;
  if (count(a) > target || count(b) < target)
    throw std::invalid_argument("fermi_level: initial interval does not bracket the target");
  double mid = 0.5 * (a + b);
  bool hit = false;
  for (int it = 0; it < 400; ++it) {
    mid = 0.5 * (a + b);
    double n = count(mid);
    if (std::abs(n - target) < 1e-10) {
      hit = true;
      break;
    }
    (n < target ? a : b) = mid;
  }
  if (!hit) throw std::runtime_error("fermi_level: bisection stalled before the target count");
  // headroom: states above the computed spectrum must be negligible; the
  // occupation at the top edge bounds anything higher, while a half-filled
  // touching point inside the computed bands stays legitimate
  if (0.5 * std::erfc((hi - mid) / sigma) >= 1e-8)
    throw std::runtime_error("fermi_level: insufficient bands, top band is occupied");
  return mid;
}

SCFState scf_loop(const SCFConfig& cfg) {
  if (!(cfg.sigma > 0.0)) throw std::invalid_argument("scf_loop: smearing width must be positive");
  if (cfg.kgrid < 3) throw std::invalid_argument("scf_loop: k-grid must be at least 3x3");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("scf_loop: tolerance must be positive");
  if (!(cfg.mixing > 0.0) || cfg.mixing > 1.0)
    throw std::invalid_argument("scf_loop: 0 < mixing <= 1");
  if (!(cfg.ecut > 0.0)) throw std::invalid_argument("scf_loop: cutoff must be positive");
  if (!(cfg.electrons > 0.0)) throw std::invalid_argument("scf_loop: electrons must be positive");
  if (!(cfg.q > 0.0)) throw std::invalid_argument("scf_loop: spin factor must be positive");
  if (cfg.L < 0.0) throw std::invalid_argument("scf_loop: L must be nonnegative");
  if (cfg.max_iter < 1) throw std::invalid_argument("scf_loop: max_iter must be at least 1");
  if (cfg.motif.shifts.empty()) throw std::invalid_argument("scf_loop: empty motif");

  const auto& lat = cfg.motif.bravais;
  double area = cell_area(lat);
  int n = cfg.kgrid;

  SCFState st;
  st.config = cfg;
  st.kweight = 1.0 / ((double)n * (double)n);
  std::vector<PWBasis> bases;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec2 k = lat.v1 * ((double)i / n) + lat.v2 * ((double)j / n);
      st.kpoints.push_back(k);
      bases.push_back(build_basis(lat, k, cfg.ecut));
    }

  long d1 = 0, d2 = 0;
  for (const auto& b : bases) {
    d1 = std::max(d1, b.extent1());
    d2 = std::max(d2, b.extent2());
  }
  std::vector<IVec2> rect = rect_indices(d1, d2);
  int n1g = (int)(2 * d1 + 2), n2g = (int)(2 * d2 + 2);

  bool have_pot = cfg.L > 0.0;
  if (have_pot) {
    PeriodicKernel kern_L = make_kernel(lat, cfg.L);
    // unit-frame coefficients: the substitution x = L y multiplies the
    // physical potential by L^2 and leaves integer dual indices in place
    st.vext = scaled_map(external_potential(cfg.motif, cfg.L, kern_L, cfg.pp, rect),
                         cfg.L * cfg.L);
    PeriodicKernel kern_1 = make_kernel(lat, 1.0);
    for (const auto& v : rect)
      st.hartree_kernel[v] =
          cfg.L * area * kernel_coefficient_plain(kern_1, lat.dual_point(v));
  } else {
    for (const auto& v : rect) st.vext[v] = 0.0;
  }
  st.vext[IVec2{0, 0}] += cfg.external_constant;

  FourierMap rho = initial_density(cfg, rect, area);
  std::vector<double> weights(bases.size(), st.kweight);
  std::vector<Eigen::VectorXcd> and_x, and_f;  // Anderson history, oldest first

  for (int it = 1; it <= cfg.max_iter; ++it) {
    st.density_in = rho;
    st.vmf = st.vext;
    if (have_pot)
      for (const auto& v : rect)
        st.vmf[v] += cfg.q * lookup(st.hartree_kernel, v) * rho[v];
    FourierMap amap = scaled_map(st.vmf, 1.0 / std::sqrt(area));

    st.spectra.clear();
    std::vector<std::vector<double>> table;
    for (const auto& b : bases) {
      st.spectra.push_back(diagonalize(b, assemble_fiber(b, amap), cfg.n_bands, true));
      table.push_back(st.spectra.back().eigenvalues);
    }
    st.fermi = fermi_level(table, cfg.electrons, cfg.sigma);
    st.occ.clear();
    for (const auto& row : table) st.occ.push_back(occupations(row, st.fermi, cfg.sigma));

    st.density = density_from_states(st.spectra, st.occ, weights, cfg.electrons, n1g, n2g);
    FourierMap rho_new;
    double res2 = 0.0;
    for (const auto& v : rect) {
      rho_new[v] = st.density.coefficient(v);
      res2 += std::norm(rho_new[v] - rho[v]);
    }
    double res = std::sqrt(res2) * area / cfg.electrons;
    st.residual_log.push_back(res);
    st.iterations = it;

    if (res < cfg.tol) {
      st.converged = true;
      break;
    }
    if (it == cfg.max_iter) break;
    if (cfg.anderson >= 2) {
      Eigen::VectorXcd x((Eigen::Index)rect.size()), f((Eigen::Index)rect.size());
      for (std::size_t i = 0; i < rect.size(); ++i) {
        x((Eigen::Index)i) = rho[rect[i]];
        f((Eigen::Index)i) = rho_new[rect[i]] - rho[rect[i]];
      }
      and_x.push_back(x);
      and_f.push_back(f);
      if ((int)and_x.size() > cfg.anderson) {
        and_x.erase(and_x.begin());
        and_f.erase(and_f.begin());
      }
      Eigen::VectorXcd next = x + cfg.mixing * f;
      const Eigen::Index p = (Eigen::Index)and_x.size() - 1;
      if (p >= 1) {
        Eigen::MatrixXcd dX(x.size(), p), dF(x.size(), p);
        for (Eigen::Index j = 0; j < p; ++j) {
          dX.col(j) = and_x[(std::size_t)j + 1] - and_x[(std::size_t)j];
          dF.col(j) = and_f[(std::size_t)j + 1] - and_f[(std::size_t)j];
        }
        Eigen::VectorXcd gamma = dF.completeOrthogonalDecomposition().solve(f);
        next -= (dX + cfg.mixing * dF) * gamma;
      }
      for (std::size_t i = 0; i < rect.size(); ++i) rho[rect[i]] = next((Eigen::Index)i);
    } else {
      for (const auto& v : rect)
        rho[v] = rho[v] * (1.0 - cfg.mixing) + rho_new[v] * cfg.mixing;
    }
  }

  if (st.converged) {
    auto routes = energy_routes(st, cfg);
    st.energy = routes.first;
    st.energy_band = routes.second;
    if (std::abs(routes.first - routes.second) > 1e-6 * (1.0 + std::abs(routes.first)))
      throw std::logic_error("scf_loop: energy routes disagree");
  }
  return st;
}

double rhf_energy(const SCFState& state, const SCFConfig& config) {
  if (!state.converged) throw std::invalid_argument("rhf_energy: state is not converged");
  auto routes = energy_routes(state, config);
  if (std::abs(routes.first - routes.second) > 1e-6 * (1.0 + std::abs(routes.first)))
    throw std::logic_error("rhf_energy: energy routes disagree");
  return routes.first;
}

std::vector<PhaseReport> phase_scan(const std::vector<double>& Ls, const SCFConfig& tmpl) {
  std::vector<PhaseReport> out;
  for (double L : Ls) {
    SCFConfig cfg = tmpl;
    cfg.L = L;
    out.push_back(classify(scf_loop(cfg)));
  }
  return out;
}

WeakContrastReport weak_contrast_check(const SCFState& state) {
  if (!state.converged)
    throw std::invalid_argument("weak_contrast_check: state is not converged");
  const auto& lat = state.config.motif.bravais;
  double area = cell_area(lat);
  WeakContrastReport rep;
  double L = state.config.L;
  rep.c11 = std::real(lookup(state.vmf, IVec2{1, 1})) / (L > 0.0 ? L : 1.0);
  PWBasis b = build_basis(lat, special_point(lat, "K"), state.config.ecut);
  FourierMap amap = scaled_map(state.vmf, 1.0 / std::sqrt(area));
  auto sp = diagonalize(b, assemble_fiber(b, amap), 3, false);
  rep.gap_lower = sp.eigenvalues[1] - sp.eigenvalues[0];
  rep.gap_upper = sp.eigenvalues[2] - sp.eigenvalues[1];
  rep.placement = rep.gap_lower <= rep.gap_upper ? BandPlacement::bands_1_2
                                                 : BandPlacement::bands_2_3;
  return rep;
}

}  // namespace bloch2d
