#include "bloch2d/tightbinding.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace bloch2d {

double tunneling_coefficient(double mu, double L) {
  if (mu < 0.0 || L < 0.0) throw std::invalid_argument("tunneling needs mu >= 0 and L >= 0");
  return std::exp(-std::sqrt(mu) * L);
}

Eigen::MatrixXcd bloch_matrix(const MotifLattice& m, const EdgeOrbitSet& orbits, int orbit_index,
                              const Vec2& k) {
  if (orbit_index < 0 || orbit_index >= (int)orbits.orbits.size())
    throw std::invalid_argument("orbit index out of range");
  const int n = (int)m.shifts.size();
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
  for (const Edge& e : orbits.orbits[orbit_index].members) {
    const double phase = k.dot(m.bravais.point(e.u));
    b(e.r, e.rp) += std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return b;
}

TBBands tb_bands(const TBModel& model, const KPath& path) {
  if (model.thetas.size() != model.orbit_set.orbits.size())
    throw std::invalid_argument("one hopping amplitude per orbit required");
  for (double t : model.thetas)
    if (!std::isfinite(t)) throw std::invalid_argument("hopping amplitudes must be finite");

  const int n = (int)model.motif.shifts.size();
  TBBands out;
  out.path = path;
  out.bands.reserve(path.k.size());
  for (const Vec2& k : path.k) {
    Eigen::MatrixXcd h = -model.mu_L * Eigen::MatrixXcd::Identity(n, n);
    for (std::size_t j = 0; j < model.thetas.size(); ++j)
      h += model.thetas[j] * bloch_matrix(model.motif, model.orbit_set, (int)j, k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    out.bands.emplace_back(es.eigenvalues().data(), es.eigenvalues().data() + n);
  }
  return out;
}

std::string band_csv(const TBBands& b) {
  std::ostringstream os;
  os << std::setprecision(17);
  const std::size_t nb = b.bands.empty() ? 0 : b.bands[0].size();
  os << "segment_label,arc_length,kx,ky";
  for (std::size_t n = 0; n < nb; ++n) os << ",band_" << n + 1;
  os << "\n";
  for (std::size_t i = 0; i < b.path.k.size(); ++i) {
    os << b.path.seg_label[i] << "," << b.path.arc[i] << "," << b.path.k[i].x << ","
       << b.path.k[i].y;
    for (double e : b.bands[i]) os << "," << e;
    os << "\n";
  }
  return os.str();
}

std::pair<double, double> wallace_dispersion(const Vec2& k) {
  static const Vec2 u1{std::sqrt(3.0) / 2.0, 0.5};
  static const Vec2 u2{std::sqrt(3.0) / 2.0, -0.5};
  const double p1 = k.dot(u1), p2 = k.dot(u2);
  const std::complex<double> f = 1.0 + std::complex<double>(std::cos(p1), std::sin(p1)) +
                                 std::complex<double>(std::cos(p2), std::sin(p2));
  const double a = std::abs(f);
  return {-a, a};
}

DiracReport dirac_report(const std::function<std::pair<double, double>(const Vec2&)>& bands,
                         const Vec2& vertex, double radius, int directions, int radii) {
  if (directions < 8 || radii < 2)
    throw std::invalid_argument("insufficient samples: need >= 8 directions and >= 2 radii");
  if (!(radius > 0.0)) throw std::invalid_argument("fit radius must be positive");

  DiracReport rep;
  rep.vertex = vertex;
  const auto at_vertex = bands(vertex);
  rep.gap = at_vertex.second - at_vertex.first;
  rep.cone_energy = 0.5 * (at_vertex.second + at_vertex.first);

  double num = 0.0, den = 0.0;
  std::vector<std::pair<double, double>> samples;  // (|kappa|, offset-free half-splitting)
  samples.reserve((std::size_t)directions * radii);
  for (int j = 1; j <= radii; ++j) {
    const double r = radius * j / radii;
    for (int i = 0; i < directions; ++i) {
      const double phi = 2.0 * M_PI * i / directions;
      const Vec2 k = vertex + Vec2{r * std::cos(phi), r * std::sin(phi)};
      const auto mp = bands(k);
      const double s = 0.5 * (mp.second - mp.first) - 0.5 * rep.gap;
      samples.emplace_back(r, s);
      num += s * r;
      den += r * r;
    }
  }
  rep.slope = num / den;
  double sq = 0.0;
  for (const auto& [r, s] : samples) sq += (s - rep.slope * r) * (s - rep.slope * r);
  rep.residual = std::sqrt(sq / (double)samples.size());
  return rep;
}

std::string to_json(const DiracReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "{\"vertex\": [" << r.vertex.x << ", " << r.vertex.y << "], \"slope\": " << r.slope
     << ", \"cone_energy\": " << r.cone_energy << ", \"residual\": " << r.residual
     << ", \"gap\": " << r.gap << "}";
  return os.str();
}

}  // namespace bloch2d
