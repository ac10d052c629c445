#include "bloch2d/dissociation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

#include "bloch2d/quadrature.hpp"

namespace bloch2d {

namespace {

// quintic smoothstep: C^2, flat to second order at both ends
double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

// linear interpolation on a graded grid; left of the first node the potential
// is continued as -1/s plus the constant matching the first sample
double interp_potential(const std::vector<double>& r, const std::vector<double>& f, double s) {
  if (s <= r.front()) return -1.0 / s + (f.front() + 1.0 / r.front());
  auto it = std::upper_bound(r.begin(), r.end(), s);
  std::size_t j = (std::size_t)(it - r.begin());
  if (j >= r.size()) return f.back();
  double t = (s - r[j - 1]) / (r[j] - r[j - 1]);
  return f[j - 1] + t * (f[j] - f[j - 1]);
}

struct PolarRule {
  std::vector<double> s, ws;      // radial nodes and weights on [0, s_max]
  std::vector<double> phi, wphi;  // angular nodes and weights on [0, 2 pi)
};

PolarRule polar_rule(double s_max, double seam, int ns, int nphi, const QuadRule& gl) {
  PolarRule out;
  std::vector<double> breaks;
  for (int i = 0; i <= ns; ++i) breaks.push_back(s_max * i / ns);
  if (seam > 0.0 && seam < s_max) breaks.push_back(seam);
  std::sort(breaks.begin(), breaks.end());
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    double a = breaks[p], b = breaks[p + 1];
    if (b - a < 1e-14 * s_max) continue;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      out.s.push_back(0.5 * (a + b) + 0.5 * (b - a) * gl.x[i]);
      out.ws.push_back(0.5 * (b - a) * gl.w[i]);
    }
  }
  for (int p = 0; p < nphi; ++p) {
    double a = 2.0 * M_PI * p / nphi, b = 2.0 * M_PI * (p + 1) / nphi;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      out.phi.push_back(0.5 * (a + b) + 0.5 * (b - a) * gl.x[i]);
      out.wphi.push_back(0.5 * (b - a) * gl.w[i]);
    }
  }
  return out;
}

}  // namespace

double CutoffProfile::ramp(double s) const {
  if (s <= r_inner) return 1.0;
  if (s >= r_outer) return 0.0;
  return 1.0 - smoothstep((s - r_inner) / (r_outer - r_inner));
}

double CutoffProfile::operator()(double s) const {
  double eta = ramp(s);
  return 1.0 - (1.0 - eta) * (1.0 - eta);
}

CutoffProfile make_cutoff(double delta, double d0) {
  if (!(delta > 0.0) || !(delta < 0.5))
    throw std::invalid_argument("make_cutoff: delta must lie in (0, 1/2)");
  if (!(d0 > 0.0)) throw std::invalid_argument("make_cutoff: d0 must be positive");
  CutoffProfile chi;
  chi.delta = delta;
  chi.d0 = d0;
  chi.r_inner = 0.5 * (1.0 + delta) * d0;
  chi.r_outer = (0.5 + delta) * d0;
  return chi;
}

PotentialField superposition_field(const AtomSolution& atom, const MotifLattice& m, double L,
                                   double reach) {
  if (!(L > 0.0)) throw std::invalid_argument("superposition_field: L must be positive");
  if (!(reach >= 2.0)) throw std::invalid_argument("superposition_field: reach must be >= 2");
  if (atom.v.empty() || atom.grid.n <= 0)
    throw std::invalid_argument("superposition_field: empty atom solution");
  const std::vector<double> r = atom.grid.r;
  const std::vector<double> vmf = atom.vmf;
  const double rmax = atom.grid.rmax;
  const double m1 = atom.m1;
  const BravaisLattice lat = m.bravais;
  const std::vector<Vec2> shifts = m.shifts;
  // box half-width covering |y - p| <= reach in fractional coordinates
  const int w = (int)std::ceil(reach * 1.21) + 1;

  return [=](const Vec2& x) {
    Vec2 y = x * (1.0 / L);
    Vec2 f = lat.fractional(y);
    int a0 = (int)std::floor(f.x), b0 = (int)std::floor(f.y);
    double total = 0.0;
    for (int a = a0 - w; a <= a0 + w; ++a)
      for (int b = b0 - w; b <= b0 + w; ++b) {
        Vec2 base = lat.point({a, b});
        for (const Vec2& sh : shifts) {
          double d2 = (y - base - sh).norm2();
          if (d2 > reach * reach) continue;
          double d = L * std::sqrt(d2);
          total += (d > rmax) ? m1 / (4.0 * d * d * d) : interp_potential(r, vmf, d);
        }
      }
    return total;
  };
}

PotentialField synthesized_field(const SCFState& state) {
  if (!state.converged) throw std::invalid_argument("synthesized_field: state is not converged");
  const double L = state.config.L;
  if (!(L > 0.0)) throw std::invalid_argument("synthesized_field: L must be positive");
  if (state.config.external_constant != 0.0)
    throw std::invalid_argument("synthesized_field: remove the constant shift first");
  std::vector<Vec2> vs;
  std::vector<std::complex<double>> cs;
  for (const auto& [v, c] : state.vmf) {
    vs.push_back(state.config.motif.bravais.dual_point(v));
    cs.push_back(c);
  }
  return [=](const Vec2& x) {
    Vec2 y = x * (1.0 / L);
    double total = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      double ph = vs[i].dot(y);
      total += cs[i].real() * std::cos(ph) - cs[i].imag() * std::sin(ph);
    }
    return total / (L * L);
  };
}

double WellOrbital::value(double s) const {
  const auto& r = grid.r;
  if (s >= grid.rmax || u.empty()) return 0.0;
  if (s <= r.front()) return u.front();
  auto it = std::upper_bound(r.begin(), r.end(), s);
  std::size_t j = (std::size_t)(it - r.begin());
  if (j >= r.size()) return 0.0;
  if (u[j] <= 0.0 || u[j - 1] <= 0.0) return 0.0;
  double t = (s - r[j - 1]) / (r[j] - r[j - 1]);
  // log-linear keeps relative accuracy through the exponential tail
  return std::exp((1.0 - t) * std::log(u[j - 1]) + t * std::log(u[j]));
}

WellOrbital well_orbital(const PotentialField& field, const Vec2& center_phys, double L,
                         const CutoffProfile& chi, double rmax, int n) {
  if (!(L > 0.0)) throw std::invalid_argument("well_orbital: L must be positive");
  if (!field) throw std::invalid_argument("well_orbital: empty field");
  if (rmax <= 0.0) rmax = std::max(20.0, 8.0 * chi.d0 * L);
  if (n <= 0) n = std::max(1600, (int)std::lround(50.0 * rmax));

  WellOrbital out;
  out.L = L;
  out.grid = make_radial_grid(n, rmax);
  out.v_well.assign((std::size_t)n, 0.0);
  const double support = chi.r_outer * L;
  const int nphi = 48;
  for (int i = 0; i < n; ++i) {
    double s = out.grid.r[i];
    if (s >= support) break;
    double avg = 0.0;
    for (int p = 0; p < nphi; ++p) {
      double ph = 2.0 * M_PI * (p + 0.5) / nphi;
      avg += field(center_phys + Vec2{s * std::cos(ph), s * std::sin(ph)});
    }
    out.v_well[(std::size_t)i] = chi(s / L) * avg / nphi;
  }

  auto eig = radial_eigensolve(out.v_well, out.grid, 2);
  if (!(eig.lambda[0] < 0.0))
    throw std::runtime_error("well_orbital: the cut-off well has no bound state");
  out.mu_L = -eig.lambda[0];
  out.gap = eig.lambda[1] - eig.lambda[0];
  out.u = eig.ground;
  return out;
}

double pair_overlap(const WellOrbital& orb, double D) {
  const auto& g = orb.grid;
  if (D < 1e-12) {
    double s = 0.0;
    for (int i = 0; i < g.n; ++i) s += g.mass[(std::size_t)i] * orb.u[(std::size_t)i] * orb.u[(std::size_t)i];
    return s;
  }
  if (D >= 2.0 * g.rmax) return 0.0;
  // elliptic coordinates about the two centers: r1 + r2 = D cosh(sigma),
  // r1 - r2 = D cos(tau), area element (D/2)^2 (cosh^2 - cos^2)
  const double kappa = std::sqrt(std::max(orb.mu_L, 0.05));
  double coshmax = std::min(1.0 + 60.0 / (kappa * D), 2.0 * g.rmax / D);
  if (coshmax <= 1.0) return 0.0;
  const double smax = std::acosh(coshmax);
  static const QuadRule gl = gauss_legendre(12);
  const int nsig = 20, ntau = 12;
  double total = 0.0;
  for (int ps = 0; ps < nsig; ++ps) {
    double a = smax * ps / nsig, b = smax * (ps + 1) / nsig;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      double sig = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[i];
      double wsig = 0.5 * (b - a) * gl.w[i];
      double ch = std::cosh(sig);
      for (int pt = 0; pt < ntau; ++pt) {
        double c = M_PI * pt / ntau, d = M_PI * (pt + 1) / ntau;
        for (std::size_t j = 0; j < gl.x.size(); ++j) {
          double tau = 0.5 * (c + d) + 0.5 * (d - c) * gl.x[j];
          double wtau = 0.5 * (d - c) * gl.w[j];
          double co = std::cos(tau);
          double r1 = 0.5 * D * (ch + co), r2 = 0.5 * D * (ch - co);
          double f = orb.value(r1) * orb.value(r2);
          if (f != 0.0) total += wsig * wtau * (ch * ch - co * co) * f;
        }
      }
    }
  }
  return 2.0 * 0.25 * D * D * total;
}

double pair_overlap_grid(const WellOrbital& orb, double D, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("pair_overlap_grid: h must be positive");
  const double kappa = std::sqrt(std::max(orb.mu_L, 0.05));
  const double t = std::min(orb.grid.rmax, 0.5 * D + 30.0 / kappa);
  double total = 0.0;
  const int nx = (int)std::ceil((D + 2.0 * t) / h), ny = (int)std::ceil(t / h);
  for (int ix = 0; ix < nx; ++ix) {
    double x = -t + (ix + 0.5) * h;
    for (int iy = 0; iy < ny; ++iy) {
      double y = (iy + 0.5) * h;
      double f = orb.value(std::hypot(x, y)) * orb.value(std::hypot(x - D, y));
      total += f;
    }
  }
  return 2.0 * h * h * total;  // mirror symmetry in y
}

ThetaEstimate interaction_coefficient(const WellOrbital& orb, const PotentialField& field,
                                      const MotifLattice& m, double L, const Edge& pair,
                                      const CutoffProfile& chi, double mu_reference) {
  if (!(L > 0.0)) throw std::invalid_argument("interaction_coefficient: L must be positive");
  if (orb.u.empty()) throw std::invalid_argument("interaction_coefficient: empty orbital");
  const Vec2 p1 = m.shifts.at((std::size_t)pair.r);
  const Vec2 p2 = m.bravais.point(pair.u) + m.shifts.at((std::size_t)pair.rp);
  const double dist = (p1 - p2).norm();
  if (std::abs(dist - chi.d0) > 1e-9 * chi.d0)
    throw std::invalid_argument("interaction_coefficient: pair is not at nearest distance");

  const Vec2 c1 = p1 * L, c2 = p2 * L;
  const double s_max = chi.r_outer * L;
  const double seam = chi.r_inner * L;
  static const QuadRule gl = gauss_legendre(12);

  auto level = [&](int ns, int nphi) {
    PolarRule rule = polar_rule(s_max, seam, ns, nphi, gl);
    double total = 0.0;
    for (std::size_t i = 0; i < rule.s.size(); ++i) {
      double s = rule.s[i];
      double radial = rule.ws[i] * s * orb.value(s) * chi(s / L);
      if (radial == 0.0) continue;
      for (std::size_t j = 0; j < rule.phi.size(); ++j) {
        Vec2 x = c1 + Vec2{s * std::cos(rule.phi[j]), s * std::sin(rule.phi[j])};
        double d2 = (x - c2).norm();
        double tail = (1.0 - chi(d2 / L)) * orb.value(d2);
        if (tail == 0.0) continue;
        total += radial * rule.wphi[j] * field(x) * tail;
      }
    }
    return total;
  };

  double i1 = level(16, 12);
  double i2 = level(32, 24);
  double err = std::abs(i2 - i1);
  double result = i2;
  if (err > 1e-4 * std::abs(i2)) {
    double i3 = level(64, 48);
    err = std::abs(i3 - i2);
    result = i3;
  }
  ThetaEstimate out;
  out.theta = result;
  out.quad_error = err;
  out.L = L;
  out.T_L = tunneling_coefficient(mu_reference, L);
  return out;
}

GramData gram_matrix(const WellOrbital& orb, const MotifLattice& m, double L, double radius) {
  const double d0 = neighbor_shells(m).d0;
  if (!(radius >= 2.0 * d0 - 1e-12))
    throw std::invalid_argument("gram_matrix: radius must cover at least two neighbor shells");
  if (!(L > 0.0)) throw std::invalid_argument("gram_matrix: L must be positive");

  GramData out;
  out.radius = radius;
  const int w = (int)std::ceil(radius * 1.21) + 1;
  for (int a = -w; a <= w; ++a)
    for (int b = -w; b <= w; ++b)
      for (const Vec2& sh : m.shifts) {
        Vec2 p = m.bravais.point({a, b}) + sh;
        if (p.norm() <= radius + 1e-9) out.vertices.push_back(p);
      }
  std::sort(out.vertices.begin(), out.vertices.end(), [](const Vec2& a, const Vec2& b) {
    if (std::abs(a.x - b.x) > 1e-12) return a.x < b.x;
    return a.y < b.y;
  });

  const int nv = (int)out.vertices.size();
  std::map<long long, double> cache;
  auto entry = [&](double D) {
    long long key = std::llround(D * 1e9);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double val = pair_overlap(orb, D);
    cache.emplace(key, val);
    return val;
  };

  out.Q.resize(nv, nv);
  for (int i = 0; i < nv; ++i)
    for (int j = i; j < nv; ++j) {
      double val = (i == j) ? entry(0.0) : entry(L * (out.vertices[i] - out.vertices[j]).norm());
      out.Q(i, j) = out.Q(j, i) = val;
    }

  using MatLD = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  MatLD Qld = out.Q.cast<long double>();
  Eigen::SelfAdjointEigenSolver<MatLD> es(Qld);
  if (es.eigenvalues()(0) <= 0.0L)
    throw std::runtime_error("gram_matrix: overlap matrix is not positive definite");
  MatLD B = es.eigenvectors() *
            es.eigenvalues().array().rsqrt().matrix().asDiagonal() *
            es.eigenvectors().transpose();
  out.Qinv_sqrt = B.cast<double>();
  out.orth_residual = (double)(B * Qld * B - MatLD::Identity(nv, nv)).cwiseAbs().maxCoeff();
  if (out.orth_residual > 1e-8)
    throw std::runtime_error("gram_matrix: inverse square root lost accuracy");

  out.zeta = entry(L * d0);
  Eigen::MatrixXd R = out.Q - Eigen::MatrixXd::Identity(nv, nv);
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j)
      if (std::abs((out.vertices[i] - out.vertices[j]).norm() - d0) <= 1e-9)
        R(i, j) -= out.zeta;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rs(R);
  out.nn_residual = std::max(std::abs(rs.eigenvalues()(0)), std::abs(rs.eigenvalues()(nv - 1)));
  return out;
}

TBModel tb_from_first_principles(const AtomSolution& atom, const PotentialField& field,
                                 const MotifLattice& m, double L, const CutoffProfile& chi) {
  EdgeOrbitSet orbits = edge_orbits(m);
  if (std::abs(orbits.d0 - chi.d0) > 1e-9 * chi.d0)
    throw std::invalid_argument("tb_from_first_principles: cutoff does not match the lattice spacing");

  WellOrbital orb = well_orbital(field, m.shifts.at(0) * L, L, chi);
  TBModel model;
  model.mu_L = orb.mu_L;
  for (const auto& orbit : orbits.orbits)
    model.thetas.push_back(
        interaction_coefficient(orb, field, m, L, orbit.representative, chi, atom.mu).theta);
  model.orbit_set = orbits;
  model.motif.bravais = make_bravais(m.bravais.u1 * L, m.bravais.u2 * L);
  for (const Vec2& sh : m.shifts) model.motif.shifts.push_back(sh * L);
  for (const SymOp& g : m.group) model.motif.group.push_back({g.rot, g.trans * L});
  return model;
}

std::vector<std::vector<double>> physical_bands(const SCFState& state, const KPath& unit_path,
                                                int n_bands, double ecut) {
  if (!state.converged) throw std::invalid_argument("physical_bands: state is not converged");
  const double L = state.config.L;
  if (!(L > 0.0)) throw std::invalid_argument("physical_bands: L must be positive");
  if (ecut <= 0.0) ecut = state.config.ecut;
  const double root_area = std::sqrt(state.config.motif.bravais.cell_area);
  FourierMap amap;
  for (const auto& [v, c] : state.vmf) amap[v] = c / root_area;
  auto spectra = band_structure(state.config.motif.bravais, amap, unit_path, ecut, n_bands);
  std::vector<std::vector<double>> bands;
  for (const auto& sp : spectra) {
    std::vector<double> row;
    for (double e : sp.eigenvalues) row.push_back(e / (L * L));
    bands.push_back(row);
  }
  return bands;
}

TheoremCheck theorem_check(const TBModel& tb, const std::vector<std::vector<double>>& pw_bands,
                           const KPath& path) {
  if (pw_bands.size() != path.k.size())
    throw std::invalid_argument("theorem_check: mismatched paths");
  const std::size_t nbands = tb.motif.shifts.size();
  for (const auto& row : pw_bands)
    if (row.size() < nbands)
      throw std::invalid_argument("theorem_check: fewer plane-wave bands than model bands");
  double theta_scale = 0.0;
  for (double t : tb.thetas) theta_scale = std::max(theta_scale, std::abs(t));
  if (!(theta_scale > 0.0)) throw std::invalid_argument("theorem_check: vanishing hopping");

  TBBands tbb = tb_bands(tb, path);
  TheoremCheck out;
  out.theta_scale = theta_scale;
  out.sup_err.assign(nbands, 0.0);
  std::vector<double> point_err(path.k.size(), 0.0);
  for (std::size_t i = 0; i < path.k.size(); ++i)
    for (std::size_t j = 0; j < nbands; ++j) {
      double e = std::abs(pw_bands[i][j] - tbb.bands[i][j]);
      out.sup_err[j] = std::max(out.sup_err[j], e);
      point_err[i] = std::max(point_err[i], e);
    }
  out.sup_total = *std::max_element(out.sup_err.begin(), out.sup_err.end());
  out.ratio = out.sup_total / theta_scale;
  std::vector<double> sorted = point_err;
  std::sort(sorted.begin(), sorted.end());
  double median = sorted[sorted.size() / 2];
  out.max_over_median = out.sup_total / std::max(median, 1e-300);
  return out;
}

DecayFit log_decay_fit(const std::vector<double>& L, const std::vector<double>& values) {
  if (L.size() != values.size() || L.size() < 3)
    throw std::invalid_argument("log_decay_fit: need at least three samples");
  const std::size_t n = L.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] == 0.0) throw std::invalid_argument("log_decay_fit: zero sample");
    y[i] = std::log(std::abs(values[i]));
  }
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) sx += L[i], sy += y[i];
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (L[i] - mx) * (L[i] - mx);
    sxy += (L[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("log_decay_fit: degenerate abscissas");
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0, sst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double resid = y[i] - (fit.intercept + fit.slope * L[i]);
    ssr += resid * resid;
    sst += (y[i] - my) * (y[i] - my);
  }
  fit.slope_stderr = (n > 2) ? std::sqrt(ssr / ((double)n - 2.0) / sxx) : 0.0;
  fit.r2 = (sst > 0.0) ? 1.0 - ssr / sst : 1.0;
  return fit;
}

}  // namespace bloch2d
