#include "bloch2d/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace bloch2d {

namespace {

constexpr double kGeomTol = 1e-9;

long iround(double x) { return std::lround(x); }

bool near_integer(double x, double tol = kGeomTol) {
  return std::abs(x - std::round(x)) < tol;
}

}  // namespace

IVec2 BravaisLattice::nearest(const Vec2& x) const {
  const Vec2 f = fractional(x);
  IVec2 best{iround(f.x), iround(f.y)};
  double best_d = (x - point(best)).norm2();
  for (long dx = -1; dx <= 1; ++dx) {
    for (long dy = -1; dy <= 1; ++dy) {
      const IVec2 cand{iround(f.x) + dx, iround(f.y) + dy};
      const double d = (x - point(cand)).norm2();
      if (d < best_d) {
        best = cand;
        best_d = d;
      }
    }
  }
  return best;
}

BravaisLattice make_bravais(const Vec2& u1, const Vec2& u2) {
  const double det = cross(u1, u2);
  const double scale = std::max(u1.norm2(), u2.norm2());
  if (std::abs(det) <= 1e-12 * scale) {
    throw std::invalid_argument("singular lattice basis");
  }
  BravaisLattice lat;
  lat.u1 = u1;
  lat.u2 = u2;
  const double f = 2 * M_PI / det;
  lat.v1 = Vec2{u2.y, -u2.x} * f;
  lat.v2 = Vec2{-u1.y, u1.x} * f;
  lat.cell_area = std::abs(det);
  return lat;
}

namespace {

// canonical representative of t modulo the lattice, fractional parts in [0, 1)
Vec2 reduce_translation(const BravaisLattice& lat, const Vec2& t) {
  Vec2 f = lat.fractional(t);
  f.x -= std::floor(f.x);
  f.y -= std::floor(f.y);
  if (f.x > 1 - kGeomTol) f.x = 0;
  if (f.y > 1 - kGeomTol) f.y = 0;
  return lat.u1 * f.x + lat.u2 * f.y;
}

bool same_op(const BravaisLattice& lat, const SymOp& g, const SymOp& h) {
  const double dr = std::abs(g.rot.a - h.rot.a) + std::abs(g.rot.b - h.rot.b) +
                    std::abs(g.rot.c - h.rot.c) + std::abs(g.rot.d - h.rot.d);
  if (dr > 1e-8) return false;
  const Vec2 f = lat.fractional(g.trans - h.trans);
  return near_integer(f.x, 1e-7) && near_integer(f.y, 1e-7);
}

bool vertex_set_member(const MotifLattice& m, const Vec2& x) {
  for (const Vec2& s : m.shifts) {
    const IVec2 w = m.bravais.nearest(x - s);
    if ((x - s - m.bravais.point(w)).norm() < 1e-7) return true;
  }
  return false;
}

}  // namespace

std::vector<SymOp> close_group(const BravaisLattice& lat, const std::vector<Vec2>& shifts,
                               const std::vector<SymOp>& generators, int max_elements) {
  std::vector<SymOp> elems;
  elems.push_back({Mat2::identity(), Vec2{0, 0}});
  auto add = [&](SymOp g) -> bool {
    g.trans = reduce_translation(lat, g.trans);
    for (const SymOp& h : elems) {
      if (same_op(lat, g, h)) return false;
    }
    elems.push_back(g);
    return true;
  };
  for (const SymOp& g : generators) add(g);

  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t n = elems.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const SymOp comp{elems[i].rot.mul(elems[j].rot),
                         elems[i].rot.apply(elems[j].trans) + elems[i].trans};
        if (add(comp)) grew = true;
        if ((int)elems.size() > max_elements) {
          throw std::invalid_argument("symmetry group closure exceeds element cap");
        }
      }
    }
  }

  // each element must map the vertex set onto itself; check on a finite ball
  MotifLattice probe{lat, shifts, {}};
  const double radius = 3 * std::max(lat.u1.norm(), lat.u2.norm());
  const long box = (long)std::ceil(radius / std::min(lat.u1.norm(), lat.u2.norm())) + 1;
  for (const SymOp& g : elems) {
    for (long i = -box; i <= box; ++i) {
      for (long j = -box; j <= box; ++j) {
        for (const Vec2& s : shifts) {
          const Vec2 x = lat.point({i, j}) + s;
          if (x.norm() > radius) continue;
          if (!vertex_set_member(probe, g.apply(x))) {
            throw std::invalid_argument("symmetry generator does not preserve the vertex set");
          }
        }
      }
    }
  }
  return elems;
}

MotifLattice honeycomb() {
  const double s3 = std::sqrt(3.0);
  BravaisLattice lat = make_bravais({s3 / 2, 0.5}, {s3 / 2, -0.5});
  const Vec2 a{1 / (2 * s3), 0};
  const Vec2 b = -a;
  const Mat2 rot3 = Mat2::rotation(2 * M_PI / 3);
  std::vector<SymOp> gens = {
      {Mat2{-1, 0, 0, -1}, Vec2{0, 0}},      // parity
      {Mat2{1, 0, 0, -1}, Vec2{0, 0}},       // horizontal mirror
      {rot3, a - rot3.apply(a)},             // 2 pi / 3 rotation about site a
  };
  MotifLattice m{lat, {a, b}, {}};
  m.group = close_group(lat, m.shifts, gens);
  return m;
}

MotifLattice triangular() {
  const double s3 = std::sqrt(3.0);
  BravaisLattice lat = make_bravais({s3 / 2, 0.5}, {s3 / 2, -0.5});
  std::vector<SymOp> gens = {
      {Mat2::rotation(M_PI / 3), Vec2{0, 0}},
      {Mat2{1, 0, 0, -1}, Vec2{0, 0}},
  };
  MotifLattice m{lat, {Vec2{0, 0}}, {}};
  m.group = close_group(lat, m.shifts, gens);
  return m;
}

MotifLattice square_lattice() {
  BravaisLattice lat = make_bravais({1, 0}, {0, 1});
  std::vector<SymOp> gens = {
      {Mat2::rotation(M_PI / 2), Vec2{0, 0}},
      {Mat2{1, 0, 0, -1}, Vec2{0, 0}},
  };
  MotifLattice m{lat, {Vec2{0, 0}}, {}};
  m.group = close_group(lat, m.shifts, gens);
  return m;
}

MotifLattice square_octagon() {
  BravaisLattice lat = make_bravais({1, 0}, {0, 1});
  // octagon edges (between motif squares) match the square edges in length
  const double d = 1.0 / (2.0 + std::sqrt(2.0));
  const Vec2 c{0.5, 0.5};
  std::vector<Vec2> shifts = {c + Vec2{d, 0}, c + Vec2{-d, 0}, c + Vec2{0, d}, c + Vec2{0, -d}};
  const Mat2 rot4 = Mat2::rotation(M_PI / 2);
  std::vector<SymOp> gens = {
      {rot4, c - rot4.apply(c)},
      {Mat2{1, 0, 0, -1}, Vec2{0, 2 * c.y}},  // mirror across the horizontal line through c
  };
  MotifLattice m{lat, shifts, {}};
  m.group = close_group(lat, m.shifts, gens);
  return m;
}

NeighborShells neighbor_shells(const MotifLattice& m, double radius) {
  const double umax = std::max(m.bravais.u1.norm(), m.bravais.u2.norm());
  if (radius <= 0) radius = 3 * umax;
  const double umin = std::min(m.bravais.u1.norm(), m.bravais.u2.norm());
  const long box = (long)std::ceil(radius / umin) + 2;

  std::vector<double> dists;
  for (const Vec2& s0 : m.shifts) {
    for (long i = -box; i <= box; ++i) {
      for (long j = -box; j <= box; ++j) {
        for (const Vec2& s : m.shifts) {
          const Vec2 y = m.bravais.point({i, j}) + s;
          const double d = (y - s0).norm();
          if (d > kGeomTol && d <= radius) dists.push_back(d);
        }
      }
    }
  }
  std::sort(dists.begin(), dists.end());
  NeighborShells shells;
  shells.d0 = dists.front();
  for (double d : dists) {
    if (d > shells.d0 * (1 + 1e-8)) {
      shells.d1 = d;
      break;
    }
  }
  if (shells.d1 == 0.0) throw std::runtime_error("no second neighbor shell inside radius");
  return shells;
}

namespace {

// express x as lattice point + shifts[r]; returns false if x is not a vertex
bool identify_vertex(const MotifLattice& m, const Vec2& x, IVec2& w, int& r) {
  for (std::size_t j = 0; j < m.shifts.size(); ++j) {
    const IVec2 cand = m.bravais.nearest(x - m.shifts[j]);
    if ((x - m.shifts[j] - m.bravais.point(cand)).norm() < 1e-7) {
      w = cand;
      r = (int)j;
      return true;
    }
  }
  return false;
}

Edge apply_to_edge(const MotifLattice& m, const SymOp& g, const Edge& e) {
  const Vec2 x = m.shifts[e.r];
  const Vec2 y = m.bravais.point(e.u) + m.shifts[e.rp];
  IVec2 wx, wy;
  int rx, ry;
  if (!identify_vertex(m, g.apply(x), wx, rx) || !identify_vertex(m, g.apply(y), wy, ry)) {
    throw std::runtime_error("group element maps an edge endpoint off the vertex set");
  }
  return Edge{rx, wy - wx, ry};
}

}  // namespace

EdgeOrbitSet edge_orbits(const MotifLattice& m) {
  const NeighborShells shells = neighbor_shells(m);
  const double d0 = shells.d0;

  double span = 0;
  for (const Vec2& s : m.shifts) span = std::max(span, s.norm());
  const double umin = std::min(m.bravais.u1.norm(), m.bravais.u2.norm());
  const long box = (long)std::ceil((d0 + 2 * span) / umin) + 2;

  std::set<Edge> edges;
  for (int r = 0; r < (int)m.shifts.size(); ++r) {
    for (long i = -box; i <= box; ++i) {
      for (long j = -box; j <= box; ++j) {
        for (int rp = 0; rp < (int)m.shifts.size(); ++rp) {
          const Edge e{r, IVec2{i, j}, rp};
          const Vec2 y = m.bravais.point(e.u) + m.shifts[rp];
          if (std::abs((y - m.shifts[r]).norm() - d0) < kGeomTol) edges.insert(e);
        }
      }
    }
  }

  EdgeOrbitSet out;
  out.d0 = d0;
  std::map<Edge, int> assigned;
  for (const Edge& seed : edges) {
    if (assigned.count(seed)) continue;
    const int id = (int)out.orbits.size();
    std::vector<Edge> frontier = {seed};
    assigned[seed] = id;
    std::set<Edge> members = {seed};
    while (!frontier.empty()) {
      std::vector<Edge> next;
      for (const Edge& e : frontier) {
        std::vector<Edge> images;
        images.push_back(Edge{e.rp, -e.u, e.r});  // reversal
        for (const SymOp& g : m.group) images.push_back(apply_to_edge(m, g, e));
        for (const Edge& img : images) {
          if (!members.count(img)) {
            members.insert(img);
            assigned[img] = id;
            next.push_back(img);
          }
        }
      }
      frontier = std::move(next);
    }
    EdgeOrbit orb;
    orb.members.assign(members.begin(), members.end());
    orb.representative = orb.members.front();
    out.orbits.push_back(std::move(orb));
  }
  return out;
}

Vec2 special_point(const BravaisLattice& lat, const std::string& label) {
  if (label == "G" || label == "Gamma" || label == "Γ") return {0, 0};
  if (label == "K") return (lat.v1 - lat.v2) / 3.0;
  if (label == "K'" || label == "Kp") return (lat.v2 - lat.v1) / 3.0;
  if (label == "M") return lat.v1 / 2.0;
  throw std::invalid_argument("unknown reciprocal-space waypoint label: " + label);
}

KPath k_path(const BravaisLattice& lat, const std::vector<std::string>& waypoints,
             int samples_per_segment) {
  std::vector<std::pair<std::string, Vec2>> pts;
  pts.reserve(waypoints.size());
  for (const std::string& w : waypoints) pts.emplace_back(w, special_point(lat, w));
  return k_path(lat, pts, samples_per_segment);
}

KPath k_path(const BravaisLattice&, const std::vector<std::pair<std::string, Vec2>>& waypoints,
             int samples_per_segment) {
  if (waypoints.size() < 2) throw std::invalid_argument("k path needs at least two waypoints");
  if (samples_per_segment < 1) throw std::invalid_argument("k path needs at least one sample per segment");
  KPath path;
  path.k.push_back(waypoints.front().second);
  path.arc.push_back(0.0);
  path.seg_label.push_back(waypoints.front().first + "-" + waypoints[1].first);
  path.waypoint_index.push_back(0);
  for (std::size_t s = 0; s + 1 < waypoints.size(); ++s) {
    const Vec2 A = waypoints[s].second;
    const Vec2 B = waypoints[s + 1].second;
    const std::string label = waypoints[s].first + "-" + waypoints[s + 1].first;
    const double seg_len = (B - A).norm();
    const double arc0 = path.arc.back();
    for (int i = 1; i <= samples_per_segment; ++i) {
      const double t = double(i) / samples_per_segment;
      // hit the endpoint exactly so waypoints reproduce their input coordinates
      const Vec2 k = (i == samples_per_segment) ? B : A + (B - A) * t;
      path.k.push_back(k);
      path.arc.push_back(arc0 + seg_len * t);
      path.seg_label.push_back(label);
    }
    path.waypoint_index.push_back(path.k.size() - 1);
  }
  return path;
}

}  // namespace bloch2d
