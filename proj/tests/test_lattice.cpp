#include "doctest.h"

#include <cmath>
#include <set>
#include <stdexcept>

#include "bloch2d/lattice.hpp"

using namespace bloch2d;

namespace {
const double PI = M_PI;
const double S3 = std::sqrt(3.0);
}  // namespace

TEST_CASE("reciprocal basis fixtures") {
  SUBCASE("unit square") {
    auto lat = make_bravais({1, 0}, {0, 1});
    CHECK(lat.v1.x == doctest::Approx(2 * PI).epsilon(1e-14));
    CHECK(lat.v1.y == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(lat.v2.x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(lat.v2.y == doctest::Approx(2 * PI).epsilon(1e-14));
    CHECK(lat.cell_area == doctest::Approx(1.0));
  }
  SUBCASE("rectangular") {
    auto lat = make_bravais({2, 0}, {0, 1});
    CHECK(lat.v1.x == doctest::Approx(PI).epsilon(1e-14));
    CHECK(lat.v2.y == doctest::Approx(2 * PI).epsilon(1e-14));
    CHECK(lat.cell_area == doctest::Approx(2.0));
  }
  SUBCASE("hexagonal") {
    auto lat = make_bravais({S3 / 2, 0.5}, {S3 / 2, -0.5});
    CHECK(lat.v1.x == doctest::Approx(2 * PI / S3).epsilon(1e-14));
    CHECK(lat.v1.y == doctest::Approx(2 * PI).epsilon(1e-14));
    CHECK(lat.v2.x == doctest::Approx(2 * PI / S3).epsilon(1e-14));
    CHECK(lat.v2.y == doctest::Approx(-2 * PI).epsilon(1e-14));
    CHECK(lat.cell_area == doctest::Approx(S3 / 2));
  }
  SUBCASE("singular basis rejected") {
    CHECK_THROWS_AS(make_bravais({1, 2}, {2, 4}), std::invalid_argument);
    CHECK_THROWS_AS(make_bravais({0, 0}, {1, 0}), std::invalid_argument);
  }
}

TEST_CASE("duality relations hold for a skewed basis") {
  auto lat = make_bravais({1.3, 0.2}, {-0.4, 0.9});
  CHECK(lat.v1.dot(lat.u1) == doctest::Approx(2 * PI).epsilon(1e-12));
  CHECK(lat.v2.dot(lat.u2) == doctest::Approx(2 * PI).epsilon(1e-12));
  CHECK(std::abs(lat.v1.dot(lat.u2)) < 1e-12);
  CHECK(std::abs(lat.v2.dot(lat.u1)) < 1e-12);
}

TEST_CASE("fractional coordinates and nearest lattice point round trip") {
  auto lat = make_bravais({1.3, 0.2}, {-0.4, 0.9});
  const IVec2 w{5, -3};
  const Vec2 x = lat.point(w) + Vec2{0.03, -0.02};
  CHECK(lat.nearest(x) == w);
  const Vec2 f = lat.fractional(lat.point(w));
  CHECK(f.x == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(f.y == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("preset motifs") {
  SUBCASE("honeycomb") {
    auto m = honeycomb();
    REQUIRE(m.shifts.size() == 2);
    CHECK((m.shifts[0] - Vec2{1 / (2 * S3), 0}).norm() < 1e-14);
    CHECK((m.shifts[0] + m.shifts[1]).norm() < 1e-14);
    CHECK(m.group.size() == 12);
  }
  SUBCASE("triangular") {
    auto m = triangular();
    REQUIRE(m.shifts.size() == 1);
    CHECK(m.group.size() == 12);
  }
  SUBCASE("square") {
    auto m = square_lattice();
    REQUIRE(m.shifts.size() == 1);
    CHECK(m.group.size() == 8);
  }
  SUBCASE("square octagon") {
    auto m = square_octagon();
    REQUIRE(m.shifts.size() == 4);
    CHECK(m.group.size() == 8);
  }
}

TEST_CASE("group closure rejects maps that break the vertex set") {
  auto m = honeycomb();
  std::vector<SymOp> bad = {{Mat2::rotation(M_PI / 2), Vec2{0, 0}}};
  CHECK_THROWS_AS(close_group(m.bravais, m.shifts, bad), std::invalid_argument);
}

TEST_CASE("neighbor shells") {
  SUBCASE("square") {
    auto shells = neighbor_shells(square_lattice());
    CHECK(shells.d0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(shells.d1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("honeycomb") {
    auto shells = neighbor_shells(honeycomb());
    CHECK(shells.d0 == doctest::Approx(1 / S3).epsilon(1e-12));
    CHECK(shells.d1 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("square octagon") {
    auto shells = neighbor_shells(square_octagon());
    CHECK(shells.d0 == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-12));
    CHECK(shells.d1 == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("edge orbits") {
  SUBCASE("honeycomb bonds form a single orbit of six directed edges") {
    auto orbs = edge_orbits(honeycomb());
    REQUIRE(orbs.orbits.size() == 1);
    CHECK(orbs.orbits[0].members.size() == 6);
    CHECK(orbs.d0 == doctest::Approx(1 / S3).epsilon(1e-12));
  }
  SUBCASE("orbit members close under reversal") {
    auto orbs = edge_orbits(honeycomb());
    std::set<Edge> mem(orbs.orbits[0].members.begin(), orbs.orbits[0].members.end());
    for (const Edge& e : mem) {
      CHECK(mem.count(Edge{e.rp, -e.u, e.r}) == 1);
    }
  }
  SUBCASE("trivial group splits honeycomb bonds into three orbits") {
    auto m = honeycomb();
    m.group = {{Mat2::identity(), Vec2{0, 0}}};
    auto orbs = edge_orbits(m);
    CHECK(orbs.orbits.size() == 3);
    for (const auto& o : orbs.orbits) CHECK(o.members.size() == 2);
  }
  SUBCASE("square octagon splits into square edges and bridges") {
    auto orbs = edge_orbits(square_octagon());
    CHECK(orbs.orbits.size() == 2);
  }
  SUBCASE("square lattice bonds form a single orbit") {
    auto orbs = edge_orbits(square_lattice());
    REQUIRE(orbs.orbits.size() == 1);
    CHECK(orbs.orbits[0].members.size() == 4);
  }
}

TEST_CASE("special points of the hexagonal cell") {
  auto lat = honeycomb().bravais;
  const Vec2 K = special_point(lat, "K");
  const Vec2 Kp = special_point(lat, "K'");
  const Vec2 M = special_point(lat, "M");
  CHECK(K.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(K.y == doctest::Approx(4 * PI / 3).epsilon(1e-12));
  CHECK((K + Kp).norm() < 1e-12);
  CHECK(K.norm() == doctest::Approx(4 * PI / 3).epsilon(1e-12));
  CHECK(M.norm() == doctest::Approx(2 * PI / S3).epsilon(1e-12));
  // M is the midpoint of an edge of the hexagonal cell adjacent to corner K:
  // both are equidistant from 0 and from the dual point v1, and |K - M| matches
  // half an edge length
  CHECK((K - lat.v1).norm() == doctest::Approx(K.norm()).epsilon(1e-12));
  CHECK((M - lat.v1).norm() == doctest::Approx(M.norm()).epsilon(1e-12));
  CHECK((K - M).norm() == doctest::Approx(K.norm() / 2).epsilon(1e-12));
  CHECK_THROWS_AS(special_point(lat, "X"), std::invalid_argument);
}

TEST_CASE("k path sampling") {
  auto lat = honeycomb().bravais;
  auto path = k_path(lat, {"G", "K", "M", "G"}, 2);
  REQUIRE(path.k.size() == 7);
  REQUIRE(path.arc.size() == 7);
  REQUIRE(path.waypoint_index.size() == 4);
  CHECK(path.waypoint_index[0] == 0);
  CHECK(path.waypoint_index[1] == 2);
  CHECK(path.waypoint_index[2] == 4);
  CHECK(path.waypoint_index[3] == 6);

  // waypoints reproduce their coordinates exactly
  CHECK(path.k[0].x == 0.0);
  CHECK(path.k[0].y == 0.0);
  const Vec2 K = special_point(lat, "K");
  CHECK(path.k[2].x == K.x);
  CHECK(path.k[2].y == K.y);
  CHECK(path.k[6].x == 0.0);
  CHECK(path.k[6].y == 0.0);

  CHECK(path.arc[2] == doctest::Approx(4 * PI / 3).epsilon(1e-12));
  for (std::size_t i = 1; i < path.arc.size(); ++i) CHECK(path.arc[i] > path.arc[i - 1]);
  CHECK(path.seg_label[1] == "G-K");
  CHECK(path.seg_label[3] == "K-M");
  CHECK(path.seg_label[6] == "M-G");

  auto fine = k_path(lat, std::vector<std::string>{"G", "K"}, 40);
  CHECK(fine.k.size() == 41);
  const double step = fine.arc[1] - fine.arc[0];
  for (std::size_t i = 1; i < fine.arc.size(); ++i) {
    CHECK(fine.arc[i] - fine.arc[i - 1] == doctest::Approx(step).epsilon(1e-10));
  }
}

TEST_CASE("k path with explicit coordinates") {
  auto lat = make_bravais({1, 0}, {0, 1});
  std::vector<std::pair<std::string, Vec2>> wps = {{"A", {0, 0}}, {"B", {1, 2}}};
  auto path = k_path(lat, wps, 4);
  REQUIRE(path.k.size() == 5);
  CHECK(path.k[4].x == 1.0);
  CHECK(path.k[4].y == 2.0);
  CHECK(path.arc[4] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK_THROWS_AS(k_path(lat, {{"A", Vec2{0, 0}}}, 4), std::invalid_argument);
}
