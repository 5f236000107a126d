#include "generators.hpp"

#include "foliation/cone.hpp"
#include "foliation/scenario.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace foliation;

namespace {

const Tangent e1 = make_point({1, 0, 0}), e2 = make_point({0, 1, 0}), e3 = make_point({0, 0, 1});

ConeOptions seeded(std::uint64_t seed)
{
    ConeOptions o;
    o.seed = seed;
    return o;
}

bool relation_is(const ConeSet& c, const Tangent& expected)
{
    return c.relations.size() == 1 && line_angle(c.relations.front(), expected) <= 1e-8;
}

}  // namespace

TEST(FoliationCone, PlanarNormalFormsFillTheWholeSpace)
{
    Polynomial xy = Polynomial::monomial(2, {1, 1});
    const AnalyticSetModel origin(2, {AnalyticSetModel::linear("origin", Point::Zero(2), {})}, true);
    for (const auto& X : {linearizable_form(Complex(0, 2)), resonant_negative_form(-1.0, xy), poincare_dulac_form(2, 1.0)}) {
        const ConeSet c = estimate_foliation_cone(X, origin, Point::Zero(2), seeded(9));
        EXPECT_TRUE(c.relations.empty());
        ASSERT_TRUE(c.span_hint.has_value());
        EXPECT_EQ(c.span_hint->cols(), 2);
    }
}

TEST(FoliationCone, LevelPlanesGiveTheXYPlane)
{
    const auto& sc = scenario("E1.4");
    for (double c : {-0.5, 0.0, 0.4}) {
        const ConeSet cone = estimate_foliation_cone(sc.field, sc.singular_set, make_point({0, 0, c}), seeded(4));
        EXPECT_TRUE(relation_is(cone, e3)) << c;
        EXPECT_LE(cone.max_relation_residual, 1e-8);
        ASSERT_TRUE(cone.span_hint.has_value());
        EXPECT_EQ(cone.span_hint->cols(), 2);
        EXPECT_LE(angle_to_subspace(e1, *cone.span_hint), 1e-10);
        EXPECT_LE(angle_to_subspace(e2, *cone.span_hint), 1e-10);
    }
}

TEST(FoliationCone, TwoAxisExampleHasEqualLastComponents)
{
    const auto& sc = scenario("E1.5");
    for (const Point& p : {make_point({0, 0.5, 0}), make_point({0, 0, 0.5}), make_point({0, 0, 0})}) {
        const ConeSet cone = estimate_foliation_cone(sc.field, sc.singular_set, p, seeded(5));
        EXPECT_TRUE(relation_is(cone, make_point({0, 1, -1}))) << format_point(p);
        ASSERT_TRUE(cone.span_hint.has_value()) << format_point(p);
        EXPECT_LE(angle_to_subspace(make_point({0, 1, 1}), *cone.span_hint), 1e-10);
        for (const auto& d : cone.directions) EXPECT_LE(std::abs(d.v(1) - d.v(2)), 1e-8);
    }
}

TEST(FoliationCone, RejectsPointsOffTheSingularSet)
{
    const auto& sc = scenario("E1.4");
    EXPECT_THROW(estimate_foliation_cone(sc.field, sc.singular_set, make_point({0.1, 0, 0}), seeded(1)), std::invalid_argument);
}

TEST(FoliationCone, DirectionsAreUnitAndAnnihilatedByRelations)
{
    const auto& sc = scenario("E1.5");
    const ConeSet cone = estimate_foliation_cone(sc.field, sc.singular_set, Point::Zero(3), seeded(2));
    for (const auto& d : cone.directions) {
        EXPECT_NEAR(d.v.norm(), 1.0, 1e-12);
        for (const auto& l : cone.relations) EXPECT_LE(std::abs(d.v.cwiseProduct(l).sum()), 1e-10);
    }
}

TEST(FoliationCone, ScalarMultiplesChangeNoDirection)
{
    // cone property: lambda X(q) canonicalizes to the same representative as X(q)
    const auto& sc = scenario("E1.16");
    Rng rng(8);
    for (int k = 0; k < 200; ++k) {
        const Point q = gen::interior_point(rng, sc.domain());
        const Tangent v = sc.field(q);
        if (v.norm() < 1e-12) continue;
        const Complex lambda = random_in_disc(rng, 10.0) + 0.01;
        EXPECT_LE((canonicalize(lambda * v) - canonicalize(v)).norm(), 1e-12);
    }
}

TEST(FoliationCone, DenserSamplingKeepsTheRelation)
{
    const auto& sc = scenario("E1.4");
    ConeOptions sparse = seeded(3), dense = seeded(3);
    sparse.samples_per_scale = 800;
    dense.samples_per_scale = 8000;
    const Point p = make_point({0, 0, 0.2});
    const ConeSet a = estimate_foliation_cone(sc.field, sc.singular_set, p, sparse);
    const ConeSet b = estimate_foliation_cone(sc.field, sc.singular_set, p, dense);
    ASSERT_TRUE(relation_is(b, e3));
    EXPECT_TRUE(relation_is(a, e3));
}

TEST(FoliationCone, CoverageTestSeesHoles)
{
    const CMatrix plane = CMatrix::Identity(2, 2);
    std::vector<Tangent> only_axis{make_point({1, 0})};
    EXPECT_FALSE(directions_cover_subspace(only_axis, plane, 0.05, 1));
    std::vector<Tangent> dense;
    Rng rng(4);
    for (int k = 0; k < 40000; ++k) dense.push_back(random_unit_vector(rng, 2));
    EXPECT_TRUE(directions_cover_subspace(dense, plane, 0.05, 1));
}

TEST(Transversality, LevelPlanesAreTransversalToTheZAxis)
{
    const auto& sc = scenario("E1.4");
    for (double c : {0.3, -0.6}) {
        const auto v = is_transversal_type(sc.field, sc.singular_set, make_point({0, 0, c}));
        EXPECT_EQ(v.verdict, Verdict::transversal);
        EXPECT_GE(v.min_angle, 0.5);
        EXPECT_FALSE(v.witness.has_value());
    }
}

TEST(Transversality, TwoAxisExampleAtAllBaseClasses)
{
    const auto& sc = scenario("E1.5");
    for (const Point& p : {make_point({0, 0.5, 0}), make_point({0, 0, 0.5}), make_point({0, 0, 0})}) {
        const auto v = is_transversal_type(sc.field, sc.singular_set, p);
        EXPECT_EQ(v.verdict, Verdict::transversal) << format_point(p);
        EXPECT_GE(v.min_angle, 0.1);
    }
}

TEST(Transversality, YAxisOfTheSeparatrixExampleHasAWitness)
{
    const auto& sc = scenario("E1.16");
    const auto v = is_transversal_type(sc.field, sc.singular_set, make_point({0, 0.3, 0}));
    ASSERT_EQ(v.verdict, Verdict::not_transversal);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_LE(line_angle(v.witness->direction, e2), 1e-3);
    EXPECT_LE(v.witness->angle, 1e-3);
    const ConeSet setcone = tangent_cone_of_set(sc.singular_set, v.witness->base);
    EXPECT_LE(setcone.angle_to(v.witness->direction), 1e-3);

    const auto t = is_transversal_type(sc.field, sc.singular_set, make_point({0, 0, 0.5}));
    EXPECT_EQ(t.verdict, Verdict::transversal);
}

TEST(Transversality, ThreeAxisExampleFailsOnTheXAxis)
{
    const auto& sc = scenario("E1.18");
    const auto v = is_transversal_type(sc.field, sc.singular_set, make_point({0.5, 0, 0}));
    ASSERT_EQ(v.verdict, Verdict::not_transversal);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_LE(line_angle(v.witness->direction, e1), 1e-3);
}

TEST(Transversality, ThetaMinIsRespected)
{
    const auto& sc = scenario("E1.5");
    TransversalOptions strict;
    strict.theta_min = 1.0;  // the true minimum is pi/4
    const auto v = is_transversal_type(sc.field, sc.singular_set, make_point({0, 0.5, 0}), strict);
    EXPECT_NE(v.verdict, Verdict::transversal);
}
