#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "test_support.hpp"

using namespace ddvep;
using ddvep::testing::CutSequence;
using ddvep::testing::orthant_hrep;
using ddvep::testing::same_points;
using ddvep::testing::values;

namespace {

std::string dump(const AdjacencyPolyhedron& P) {
  std::ostringstream os;
  write_polyhedron(os, P);
  return os.str();
}

// Adjacency recomputed from coordinates must equal the maintained one.
void expect_adjacency_round_trip(const AdjacencyPolyhedron& P) {
  for (const auto& [f, h] : P.facets()) {
    bool has_vertex = false;
    for (const auto& [x, v] : P.vertices()) {
      const bool on = std::abs(h.slack(v)) <= tol::on_facet(h.normal(), h.offset(), v);
      has_vertex = has_vertex || on;
      EXPECT_EQ(on, P.members_of(f).count(x) == 1) << "facet " << index(f) << " vertex " << index(x);
    }
    for (const auto& [x, z] : P.directions()) {
      const bool on = has_vertex && std::abs(h.normal().dot(z)) <= tol::on_facet(h.normal(), 0.0, z);
      EXPECT_EQ(on, P.members_of(f).count(x) == 1) << "facet " << index(f) << " direction " << index(x);
    }
  }
}

void expect_inside(const std::vector<Vector>& pts, const std::vector<Halfspace>& hs) {
  for (const Vector& p : pts) {
    for (const Halfspace& h : hs) {
      EXPECT_GE(h.slack(p), -tol::on_facet(h.normal(), h.offset(), p));
    }
  }
}

struct Chain {
  std::vector<Halfspace> cuts;
  std::vector<std::vector<Vector>> vertices;  // after each cut
};

Chain run_cone_chain(int d, std::uint64_t seed, int cuts, bool checks) {
  CutSequence gen(d, seed);
  AdjacencyPolyhedron P = init_cone(Vector::Zero(d), standard_cone_dd(d));
  const std::vector<Vector> dirs = values(P.directions());
  Chain ch;
  for (int i = 0; i < cuts; ++i) {
    const Halfspace H = gen.next(values(P.vertices()));
    const CutOutcome out = onlinevert2(P, H);
    EXPECT_EQ(out.kind, CutKind::Updated);
    ch.cuts.push_back(H);
    ch.vertices.push_back(values(P.vertices()));
    if (checks) {
      const auto bad = validate(P);
      EXPECT_TRUE(bad.empty()) << bad.front().describe();
      EXPECT_EQ(values(P.directions()), dirs);
      expect_inside(ch.vertices.back(), ch.cuts);
      expect_adjacency_round_trip(P);
    }
  }
  return ch;
}

}  // namespace

class ConeChain : public ::testing::TestWithParam<int> {};

TEST_P(ConeChain, MatchesOracleAndKeepsInvariants) {
  const int d = GetParam();
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Chain ch = run_cone_chain(d, 1000 * d + seed, 5 + static_cast<int>(seed % 8), true);
    for (std::size_t i = 0; i < ch.cuts.size(); ++i) {
      const std::vector<Halfspace> prefix(ch.cuts.begin(), ch.cuts.begin() + static_cast<long>(i) + 1);
      const VRep oracle = enumerate_vertices_brute(orthant_hrep(Vector::Zero(d), prefix));
      ASSERT_TRUE(same_points(ch.vertices[i], oracle.vertices)) << "d=" << d << " seed=" << seed << " step=" << i;
    }
  }
}

TEST_P(ConeChain, BoxChainAgreesAfterStripping) {
  const int d = GetParam();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Chain ch = run_cone_chain(d, 2000 * d + seed, 10, false);
    BoxPolyhedron box = init_box(Vector::Zero(d), standard_cone_dd(d), 1e4);
    HRep bounded{d, {}, std::nullopt};
    for (const auto& [f, h] : box.polyhedron.facets()) bounded.halfspaces.push_back(h);
    for (std::size_t i = 0; i < ch.cuts.size(); ++i) {
      ASSERT_EQ(onlinevert(box.polyhedron, ch.cuts[i]).kind, CutKind::Updated);
      const auto bad = validate(box.polyhedron);
      ASSERT_TRUE(bad.empty()) << bad.front().describe();
      EXPECT_TRUE(same_points(values(strip_artificial(box.polyhedron, box.artificial)), ch.vertices[i]))
          << "d=" << d << " seed=" << seed << " step=" << i;
      bounded.halfspaces.push_back(ch.cuts[i]);
      EXPECT_TRUE(same_points(values(box.polyhedron.vertices()), enumerate_vertices_brute(bounded).vertices, 1e-6));
    }
  }
}

TEST_P(ConeChain, CutOrderDoesNotMatter) {
  const int d = GetParam();
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Chain ch = run_cone_chain(d, 3000 * d + seed, 8, false);
    std::vector<Halfspace> shuffled = ch.cuts;
    std::mt19937_64 rng(seed);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    AdjacencyPolyhedron P = init_cone(Vector::Zero(d), standard_cone_dd(d));
    for (const Halfspace& H : shuffled) onlinevert2(P, H);
    EXPECT_TRUE(same_points(values(P.vertices()), ch.vertices.back())) << "seed " << seed;
    EXPECT_TRUE(validate(P).empty());
  }
}

TEST_P(ConeChain, IsEdgeIsSymmetricAndPure) {
  const int d = GetParam();
  CutSequence gen(d, 4000 + d);
  AdjacencyPolyhedron P = init_cone(Vector::Zero(d), standard_cone_dd(d));
  for (int i = 0; i < 8; ++i) onlinevert2(P, gen.next(values(P.vertices())));
  const std::string before = dump(P);
  std::size_t edges = 0;
  for (const auto& [a, va] : P.vertices()) {
    for (const auto& [b, vb] : P.vertices()) {
      if (a == b) continue;
      const FacetSet ab = isedge(P, a, b);
      EXPECT_EQ(ab, isedge(P, b, a));
      edges += ab.empty() ? 0 : 1;
    }
  }
  EXPECT_GT(edges, 0u);
  EXPECT_EQ(before, dump(P));
}

INSTANTIATE_TEST_SUITE_P(Dims, ConeChain, ::testing::Values(2, 3, 4));

TEST(BoundedChain, GeneralCutsOnCubeMatchOracle) {
  for (int d = 2; d <= 4; ++d) {
    std::mt19937_64 rng(77 + d);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 15; ++trial) {
      AdjacencyPolyhedron P = ddvep::testing::unit_cube(d);
      HRep h{d, {}, std::nullopt};
      for (const auto& [f, hs] : P.facets()) h.halfspaces.push_back(hs);
      for (int c = 0; c < 10; ++c) {
        // Through a random interior point of the current polytope.
        Vector a(d), p = Vector::Zero(d);
        for (int i = 0; i < d; ++i) a(i) = g(rng);
        double total = 0.0;
        for (const auto& [x, v] : P.vertices()) {
          const double w = u(rng);
          p += w * v;
          total += w;
        }
        p /= total;
        const Halfspace H(a, a.dot(p));
        const CutOutcome out = onlinevert(P, H);
        ASSERT_NE(out.kind, CutKind::Empty);
        h.halfspaces.push_back(H);
        const auto bad = validate(P);
        ASSERT_TRUE(bad.empty()) << bad.front().describe();
        EXPECT_TRUE(same_points(values(P.vertices()), enumerate_vertices_brute(h).vertices))
            << "d=" << d << " trial=" << trial << " cut=" << c;
        expect_adjacency_round_trip(P);
      }
    }
  }
}

TEST(LpProperties, StrongDualityOnRandomFeasibleBoundedLps) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(-6, 6), small(0, 4), nvar(1, 10), nrow(1, 20), rel(0, 2);
  for (int t = 0; t < 200; ++t) {
    const int n = nvar(rng), m = nrow(rng);
    Eigen::VectorXd x0(n);
    for (int j = 0; j < n; ++j) x0(j) = small(rng);
    Eigen::MatrixXd A(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = coef(rng);
    std::vector<Relation> rels;
    Eigen::VectorXd y0 = Eigen::VectorXd::Zero(m);
    LinearProgram lp(Eigen::VectorXd::Zero(n));
    for (int i = 0; i < m; ++i) {
      const Relation r = static_cast<Relation>(rel(rng));
      const double ax = A.row(i).dot(x0);
      const double rhs = r == Relation::LessEqual ? ax + small(rng) : r == Relation::GreaterEqual ? ax - small(rng) : ax;
      lp.add(A.row(i).transpose(), r, rhs);
      const double mag = small(rng);
      y0(i) = r == Relation::LessEqual ? -mag : r == Relation::GreaterEqual ? mag : coef(rng);
    }
    // c = A^T y0 + s with s >= 0 makes y0 dual feasible, so the LP is bounded.
    Eigen::VectorXd c = A.transpose() * y0;
    for (int j = 0; j < n; ++j) c(j) += small(rng);
    lp.objective = c;
    const LpSolution s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::Optimal) << "trial " << t;
    double dual_obj = 0.0;
    Eigen::VectorXd reduced = c;
    for (int i = 0; i < m; ++i) {
      dual_obj += s.duals(i) * lp.constraints[static_cast<std::size_t>(i)].rhs;
      reduced -= s.duals(i) * A.row(i).transpose();
    }
    EXPECT_NEAR(s.objective_value, dual_obj, 1e-6 * (1 + std::abs(dual_obj))) << "trial " << t;
    EXPECT_GE(reduced.minCoeff(), -1e-7) << "trial " << t;
  }
}

class BensonProperties : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(BensonProperties, SoundTerminatingNestedAndConsistent) {
  const auto [d, n] = GetParam();
  const double eps = d == 2 ? 0.005 : 0.05;
  for (const BenchInstance& bi : draw_sample(d, n, 4, 100 * d + n)) {
    const MolpInstance& inst = bi.instance;
    const std::vector<Vector> xs = ddvep::testing::sample_feasible(inst, 30, bi.seed);
    ASSERT_FALSE(xs.empty());

    std::vector<std::vector<Halfspace>> hreps;
    std::vector<std::vector<Vector>> verts;
    SolveOptions opt;
    opt.on_cut = [&](std::size_t, const Halfspace&, const OuterApproximation& a) {
      hreps.push_back(a.hrep().halfspaces);
      verts.push_back(a.outer_vertices());
    };
    const SolveReport rep = solve_molp(inst, eps, Backend{BackendKind::Cone}, opt);

    // Soundness: sampled image points lie in every approximation.
    for (const auto& hr : hreps) {
      std::vector<Vector> images;
      for (const Vector& x : xs) images.push_back(inst.C * x);
      expect_inside(images, hr);
    }
    // Termination certificate.
    for (const Vector& v : rep.vertices) EXPECT_LE(scalarize(inst, v).alpha_v, eps + 1e-7);
    // Nestedness.
    for (std::size_t i = 1; i < hreps.size(); ++i) expect_inside(verts[i], hreps[i - 1]);
    // Efficient-set feasibility.
    for (const Vector& x : rep.efficient_set) {
      EXPECT_LE(((inst.A * x) - inst.b).maxCoeff(), 1e-7);
      EXPECT_GE(x.minCoeff(), -1e-9);
    }
    EXPECT_TRUE(validate(rep.outer).empty());

    // The box and offline backends follow the same cuts to the same sets.
    OuterApproximation box(Backend{BackendKind::Box, 1e4}, rep.ideal, inst.cone);
    OuterApproximation off(Backend{BackendKind::OfflineOracle}, rep.ideal, inst.cone);
    for (std::size_t i = 0; i < rep.cuts.size(); ++i) {
      ASSERT_EQ(box.cut(rep.cuts[i]), CutKind::Updated);
      ASSERT_EQ(off.cut(rep.cuts[i]), CutKind::Updated);
      EXPECT_TRUE(same_points(box.outer_vertices(), verts[i]));
      EXPECT_TRUE(same_points(off.outer_vertices(), verts[i]));
    }
    const SolveReport box_rep = solve_molp(inst, eps, Backend{BackendKind::Box, 1e4});
    EXPECT_TRUE(same_points(box_rep.vertices, rep.vertices));
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, BensonProperties,
                         ::testing::Values(std::make_tuple(2, 8), std::make_tuple(3, 5), std::make_tuple(4, 3)));
