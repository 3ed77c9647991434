#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace ddvep;
using ddvep::testing::hs;
using ddvep::testing::vec;

TEST(Halfspace, RejectsZeroNormalAndLowDimension) {
  EXPECT_THROW(Halfspace(vec({0, 0}), 1.0), Error);
  EXPECT_THROW(Halfspace(vec({1}), 1.0), Error);
  EXPECT_THROW(Halfspace(vec({1, std::nan("")}), 1.0), Error);
  const Halfspace h = hs({1, 2}, 3);
  EXPECT_EQ(h.dim(), 2);
  EXPECT_DOUBLE_EQ(h.slack(vec({1, 1})), 0.0);
}

TEST(AdjacencyPolyhedron, IdsAreMonotoneAndNeverReused) {
  AdjacencyPolyhedron P(2);
  const ElementId a = P.add_vertex(vec({0, 0}));
  const ElementId b = P.add_direction(vec({1, 0}));
  P.erase_vertex(a);
  const ElementId c = P.add_vertex(vec({1, 1}));
  EXPECT_LT(index(a), index(b));
  EXPECT_LT(index(b), index(c));
  EXPECT_FALSE(P.has_vertex(a));
  EXPECT_TRUE(P.has_direction(b));
  EXPECT_THROW(P.coords(a), Error);
}

TEST(AdjacencyPolyhedron, LinkIsSymmetricAndEraseCleansLists) {
  AdjacencyPolyhedron P(2);
  const ElementId v = P.add_vertex(vec({0, 0}));
  const FacetId f = P.add_facet(hs({1, 0}, 0));
  P.link(f, v);
  EXPECT_EQ(P.facets_of(v).count(f), 1u);
  EXPECT_EQ(P.members_of(f).count(v), 1u);
  P.erase_vertex(v);
  EXPECT_TRUE(P.members_of(f).empty());
  EXPECT_THROW(P.add_vertex(vec({1, 2, 3})), Error);
}

TEST(StandardCone, TwoDimensions) {
  const ConeDD K = standard_cone_dd(2);
  ASSERT_EQ(K.directions.size(), 2u);
  ASSERT_EQ(K.facets.size(), 2u);
  EXPECT_TRUE(K.directions[0].isApprox(vec({1, 0})));
  EXPECT_TRUE(K.directions[1].isApprox(vec({0, 1})));
  // e^1 lies on y2 >= 0 only.
  ASSERT_EQ(K.facets_of_direction[0].size(), 1u);
  EXPECT_TRUE(K.facets[K.facets_of_direction[0][0]].normal().isApprox(vec({0, 1})));
  EXPECT_NO_THROW(K.check());
  EXPECT_TRUE(is_nonnegative_orthant(K));
}

TEST(StandardCone, ThreeDimensionsEachDirectionOnTwoFacets) {
  const ConeDD K = standard_cone_dd(3);
  for (const auto& fs : K.facets_of_direction) EXPECT_EQ(fs.size(), 2u);
  for (const auto& zs : K.directions_of_facet) EXPECT_EQ(zs.size(), 2u);
  for (const Halfspace& f : K.facets) EXPECT_EQ(f.offset(), 0.0);
}

TEST(StandardCone, RejectsDimensionBelowTwo) { EXPECT_THROW(standard_cone_dd(1), Error); }

TEST(ConeDD, CheckRejectsBrokenCones) {
  ConeDD K = standard_cone_dd(2);
  K.facets[0] = hs({1, 0}, 1);
  EXPECT_THROW(K.check(), Error);

  EXPECT_THROW(ConeDD::from_generators({vec({1, 0}), vec({2, 0})}, {hs({0, 1}, 0), hs({0, -1}, 0)}).check(), Error);
}

TEST(ConeDD, FromGeneratorsComputesAdjacency) {
  // The cone spanned by (1,0) and (1,1): facets y2 >= 0 and y1 - y2 >= 0.
  const ConeDD K = ConeDD::from_generators({vec({1, 0}), vec({1, 1})}, {hs({0, 1}, 0), hs({1, -1}, 0)});
  EXPECT_NO_THROW(K.check());
  EXPECT_EQ(K.facets_of_direction[0], std::vector<std::size_t>{0});
  EXPECT_EQ(K.facets_of_direction[1], std::vector<std::size_t>{1});
  EXPECT_FALSE(is_nonnegative_orthant(K));
}

TEST(Validate, ConeLiftedToPolyhedronIsClean) {
  const AdjacencyPolyhedron P = init_cone(Vector::Zero(3), standard_cone_dd(3));
  EXPECT_TRUE(validate(P).empty());
}

TEST(Validate, ReportsOneBrokenLink) {
  AdjacencyPolyhedron P = init_cone(Vector::Zero(2), standard_cone_dd(2));
  const FacetId f = P.facets().begin()->first;
  const ElementId v = P.vertices().begin()->first;
  P.unlink_member_only(f, v);
  const std::vector<Violation> found = validate(P);
  ASSERT_EQ(found.size(), 1u) << (found.empty() ? "" : found.front().describe());
  EXPECT_NE(found.front().invariant.find("symmetric"), std::string::npos);
  EXPECT_NE(found.front().describe().find(std::to_string(index(v))), std::string::npos);
}

TEST(Validate, ReportsInfeasibleVertexWithResidual) {
  AdjacencyPolyhedron P = ddvep::testing::unit_cube(2);
  P.add_facet(hs({1, 1}, 5));
  bool saw = false;
  for (const Violation& v : validate(P)) saw = saw || (v.invariant == "vertex violates facet halfspace" && v.residual < -1.0);
  EXPECT_TRUE(saw);
}

TEST(FromRepresentation, SquareAdjacency) {
  const AdjacencyPolyhedron P = ddvep::testing::unit_cube(2);
  EXPECT_EQ(P.vertices().size(), 4u);
  EXPECT_EQ(P.facets().size(), 4u);
  for (const auto& [id, v] : P.vertices()) EXPECT_EQ(P.facets_of(id).size(), 2u);
  EXPECT_TRUE(validate(P).empty());
}

TEST(FromRepresentation, DropsHalfspacesTouchingNoVertex) {
  const AdjacencyPolyhedron P =
      from_representation(2, {vec({1, 0}), vec({0, 1})}, {vec({1, 0}), vec({0, 1})},
                          {hs({1, 0}, 0), hs({0, 1}, 0), hs({1, 1}, 1), hs({1, 1}, -3)});
  EXPECT_EQ(P.facets().size(), 3u);
  EXPECT_TRUE(validate(P).empty());
}

TEST(Tolerances, ScaleWithMagnitude) {
  const Vector a = vec({1, 1});
  EXPECT_GT(tol::classification(a, 1e4, vec({1e4, 0})), tol::classification(a, 0, vec({0, 0})));
  EXPECT_DOUBLE_EQ(tol::duplicate(Vector::Zero(2)), 1e-8);
}
