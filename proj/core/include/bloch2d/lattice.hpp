#pragma once

#include <string>
#include <vector>

#include "bloch2d/vec2.hpp"

namespace bloch2d {

// Bravais lattice spanned by u1, u2 with the dual basis satisfying v_i . u_j = 2 pi delta_ij.
struct BravaisLattice {
  Vec2 u1, u2;
  Vec2 v1, v2;
  double cell_area = 0.0;

  Vec2 point(const IVec2& m) const { return u1 * double(m.x) + u2 * double(m.y); }
  Vec2 dual_point(const IVec2& m) const { return v1 * double(m.x) + v2 * double(m.y); }
  // fractional coordinates of x in the (u1, u2) basis
  Vec2 fractional(const Vec2& x) const {
    return {v1.dot(x) / (2 * M_PI), v2.dot(x) / (2 * M_PI)};
  }
  // nearest lattice point to x, as integer coordinates
  IVec2 nearest(const Vec2& x) const;
};

// Throws std::invalid_argument("singular lattice basis") when u1, u2 are dependent.
BravaisLattice make_bravais(const Vec2& u1, const Vec2& u2);

// Rigid symmetry x -> rot x + trans, rot orthogonal.
struct SymOp {
  Mat2 rot;
  Vec2 trans;
  Vec2 apply(const Vec2& x) const { return rot.apply(x) + trans; }
};

// Bravais lattice decorated with site shifts; group = rigid motions mapping the
// vertex set (lattice + shifts) onto itself, stored modulo lattice translations.
struct MotifLattice {
  BravaisLattice bravais;
  std::vector<Vec2> shifts;
  std::vector<SymOp> group;  // closed under composition, translations reduced mod lattice
};

MotifLattice honeycomb();
MotifLattice triangular();
MotifLattice square_lattice();
// four-site square motif where octagon and square edges share the same length
MotifLattice square_octagon();

// Closes the generator list under composition (translations mod lattice) and
// verifies each element maps the vertex set onto itself on a finite ball.
// Throws std::invalid_argument if closure exceeds max_elements or a generator
// does not preserve the vertex set.
std::vector<SymOp> close_group(const BravaisLattice& lat, const std::vector<Vec2>& shifts,
                               const std::vector<SymOp>& generators, int max_elements = 64);

struct NeighborShells {
  double d0 = 0.0;  // nearest-neighbor distance
  double d1 = 0.0;  // second-nearest distance
};

// Brute-force over all vertex pairs inside a ball of the given radius
// (default: three times the longer lattice vector).
NeighborShells neighbor_shells(const MotifLattice& m, double radius = 0.0);

// Directed edge (shifts[r], u + shifts[rp]) of the vertex set, u in integer coords.
struct Edge {
  int r = 0;
  IVec2 u;
  int rp = 0;
  bool operator==(const Edge& o) const { return r == o.r && u == o.u && rp == o.rp; }
  bool operator<(const Edge& o) const {
    if (r != o.r) return r < o.r;
    if (!(u == o.u)) return u < o.u;
    return rp < o.rp;
  }
};

struct EdgeOrbit {
  Edge representative;
  std::vector<Edge> members;  // all directed nearest-neighbor edges in the class
};

struct EdgeOrbitSet {
  double d0 = 0.0;
  std::vector<EdgeOrbit> orbits;
};

// Partitions the nearest-neighbor edges into orbits under the motif group,
// lattice translations and edge reversal.
EdgeOrbitSet edge_orbits(const MotifLattice& m);

// Reciprocal-space waypoints of the hexagonal Brillouin zone.
// K = (v1 - v2)/3, K' = -K, M = v1/2 (the zone-edge midpoint adjacent to K).
Vec2 special_point(const BravaisLattice& lat, const std::string& label);

struct KPath {
  std::vector<Vec2> k;
  std::vector<double> arc;             // cumulative arc length
  std::vector<std::string> seg_label;  // label of the segment each point belongs to
  std::vector<std::size_t> waypoint_index;
};

// Uniformly samples each segment with samples_per_segment sub-intervals,
// sharing joint points, so the total count is 1 + segments * samples_per_segment.
KPath k_path(const BravaisLattice& lat, const std::vector<std::string>& waypoints,
             int samples_per_segment);
KPath k_path(const BravaisLattice& lat, const std::vector<std::pair<std::string, Vec2>>& waypoints,
             int samples_per_segment);

}  // namespace bloch2d
