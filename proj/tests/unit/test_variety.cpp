#include "generators.hpp"

#include "foliation/variety.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace foliation;

namespace {

const Tangent e1 = make_point({1, 0, 0}), e2 = make_point({0, 1, 0}), e3 = make_point({0, 0, 1});

AnalyticSetModel yz_axes()
{
    return AnalyticSetModel(3, {AnalyticSetModel::linear("y-axis", Point::Zero(3), {e2}), AnalyticSetModel::linear("z-axis", Point::Zero(3), {e3})},
                            true);
}

bool cone_contains_line(const ConeSet& c, const Tangent& v, double tol = 1e-9) { return c.angle_to(v) <= tol; }

}  // namespace

TEST(SingularLocus, IsolatedNodeAtOrigin)
{
    const auto X = PolyVectorField::parse("x ; 2*y", Polydisc::unit(2));
    const auto loc = singular_locus(X, 6);
    ASSERT_EQ(loc.points.size(), 1u);
    EXPECT_LE(loc.points[0].norm(), 1e-10);
    EXPECT_LE(X(loc.points[0]).norm(), 1e-10);
}

TEST(SingularLocus, ZerosOfTheTwoAxisExampleLieOnTheAxes)
{
    const auto X = PolyVectorField::parse("x ; z*y ; z*y", Polydisc::unit(3));
    const auto loc = singular_locus(X, 3);
    const auto E = yz_axes();
    ASSERT_FALSE(loc.points.empty());
    bool on_y = false, on_z = false;
    for (const auto& p : loc.points) {
        EXPECT_LE(E.distance(p), 1e-8) << format_point(p);
        EXPECT_LE(X(p).norm(), 1e-10);
        on_y = on_y || std::abs(p(1)) > 0.1;
        on_z = on_z || std::abs(p(2)) > 0.1;
    }
    EXPECT_TRUE(on_y && on_z);
}

TEST(SingularLocus, ConstantFieldHasNoZeros)
{
    const auto X = PolyVectorField::parse("1 ; 0", Polydisc::unit(2));
    const auto loc = singular_locus(X, 4);
    EXPECT_TRUE(loc.points.empty());
    EXPECT_EQ(loc.dropped, loc.seeds);
    EXPECT_THROW(singular_locus(X, 1), std::invalid_argument);
}

TEST(SetCone, UnionOfTwoAxesAtTheOrigin)
{
    const ConeSet c = tangent_cone_of_set(yz_axes(), Point::Zero(3));
    EXPECT_TRUE(cone_contains_line(c, e2));
    EXPECT_TRUE(cone_contains_line(c, e3));
    EXPECT_FALSE(c.span_hint.has_value());
    EXPECT_GT(c.angle_to(make_point({0, 1, 1})), 0.5);
    EXPECT_GT(c.angle_to(e1), 1.5);
}

TEST(SetCone, LineAtAnyOfItsPoints)
{
    const AnalyticSetModel E(3, {AnalyticSetModel::linear("z-axis", Point::Zero(3), {e3})}, true);
    for (double c : {-0.7, 0.0, 0.4}) {
        const ConeSet cone = tangent_cone_of_set(E, make_point({0, 0, c}));
        ASSERT_TRUE(cone.span_hint.has_value());
        EXPECT_EQ(cone.span_hint->cols(), 1);
        EXPECT_LE(line_angle(cone.span_hint->col(0), e3), 1e-15);
        EXPECT_LE(cone.angle_to(e3), 1e-15);
    }
}

TEST(SetCone, RegularPointOfAPlaneIsExact)
{
    const AnalyticSetModel P(4, {AnalyticSetModel::linear("plane", Point::Zero(4), {make_point({1, 0, 0, 0}), make_point({0, 1, 0, 0})})}, false);
    const ConeSet cone = tangent_cone_of_set(P, make_point({0.1, 0.2, 0, 0}));
    ASSERT_TRUE(cone.span_hint.has_value());
    EXPECT_EQ(cone.span_hint->cols(), 2);
    EXPECT_LE(cone.angle_to(make_point({0.6, Complex(0, 0.8), 0, 0})), 1e-12);
}

TEST(SetCone, RejectsPointsOffTheSet)
{
    EXPECT_THROW(tangent_cone_of_set(yz_axes(), make_point({0.1, 0, 0})), std::invalid_argument);
}

TEST(SetCone, PhaseInvariance)
{
    const ConeSet c = tangent_cone_of_set(yz_axes(), Point::Zero(3));
    Rng rng(3);
    for (const auto& d : c.directions) {
        const Tangent rotated = gen::unit_scalar(rng) * d.v;
        EXPECT_LE(line_angle(canonicalize(rotated), d.v), 1e-12);
        EXPECT_LE((canonicalize(rotated) - d.v).norm(), 1e-12);
    }
}

TEST(SetModel, ParsesLiteralsAndValidatesCodimension)
{
    const auto E = AnalyticSetModel::parse("linear base=(0,0,0) span=(0,1,0) label=y ; linear base=(0,0,0) span=(0,0,1)", 3, true);
    EXPECT_EQ(E.pieces().size(), 2u);
    EXPECT_LE(E.distance(make_point({0, 0.3, 0})), 1e-15);
    EXPECT_NEAR(E.distance(make_point({0.2, 0.3, 0})), 0.2, 1e-15);
    EXPECT_THROW(AnalyticSetModel::parse("linear base=(0,0,0) span=(1,0,0) span=(0,1,0)", 3, true), std::invalid_argument);
    EXPECT_THROW(AnalyticSetModel::parse("cubic base=(0,0,0)", 3, true), std::invalid_argument);
    const Point p = parse_point("(0, 0.5*i, 1/4)");
    EXPECT_EQ(p(1), Complex(0, 0.5));
    EXPECT_EQ(p(2), Complex(0.25));
}

TEST(Invariance, CoordinatePlanes)
{
    const auto X16 = PolyVectorField::parse("x ; z*y ; 0", Polydisc::unit(3));
    const auto r = is_invariant_hypersurface(parse_scalar("x", 3), X16);
    EXPECT_EQ(r.verdict, Invariance::invariant);
    EXPECT_TRUE(r.exact);

    const auto X15 = PolyVectorField::parse("z ; x*y ; x*y", Polydisc::unit(3));
    EXPECT_EQ(is_invariant_hypersurface(parse_scalar("y", 3), X15).verdict, Invariance::invariant);
    EXPECT_EQ(is_invariant_hypersurface(parse_scalar("x", 3), X15).verdict, Invariance::not_invariant);
}

TEST(Invariance, DiagonalIsNotInvariantForTheNode)
{
    // X(f) = x - 2y is not a multiple of x - y
    const auto X = PolyVectorField::parse("x ; 2*y", Polydisc::unit(2));
    const auto r = is_invariant_hypersurface(parse_scalar("x - y", 2), X);
    EXPECT_EQ(r.verdict, Invariance::not_invariant);
    EXPECT_FALSE(r.exact);
    EXPECT_GT(r.max_residual, 1e-3);
}

TEST(Invariance, NonMonomialInvariantCurve)
{
    // y - x^2 is invariant for x d/dx + 2y d/dy: X(f) = 2y - 2x^2 = 2f
    const auto X = PolyVectorField::parse("x ; 2*y", Polydisc::unit(2));
    const auto r = is_invariant_hypersurface(parse_scalar("y - x^2", 2), X);
    EXPECT_EQ(r.verdict, Invariance::invariant);
    EXPECT_EQ(r.points_tested, 200);
}

TEST(Invariance, UnchangedByConstantMultiples)
{
    const auto X = PolyVectorField::parse("x ; 2*y", Polydisc::unit(2));
    for (const char* f : {"y - x^2", "x - y", "x", "x*y"}) {
        const auto a = is_invariant_hypersurface(parse_scalar(f, 2), X);
        const auto b = is_invariant_hypersurface(parse_scalar(std::string("(3-2i)*(") + f + ")", 2), X);
        EXPECT_EQ(a.verdict, b.verdict) << f;
    }
}

TEST(Invariance, ZeroEquationIsRejected)
{
    const auto X = PolyVectorField::parse("x ; 2*y", Polydisc::unit(2));
    EXPECT_THROW(is_invariant_hypersurface(parse_scalar("0", 2), X), std::invalid_argument);
}
