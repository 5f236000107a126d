#include "generators.hpp"

#include "foliation/domain.hpp"

#include <gtest/gtest.h>

using namespace foliation;

namespace {

Polydisc disc1(Complex c, double r) { return Polydisc(make_point({c}), RVector::Constant(1, r)); }

Polydisc box(std::initializer_list<Complex> c, std::initializer_list<double> r)
{
    RVector rr(static_cast<Eigen::Index>(r.size()));
    int j = 0;
    for (double v : r) rr(j++) = v;
    return Polydisc(make_point(c), rr);
}

Polydisc random_polydisc(Rng& rng, int n)
{
    RVector r(n);
    Point c(n);
    for (int j = 0; j < n; ++j) {
        r(j) = 0.2 + uniform01(rng);
        c(j) = random_in_disc(rng, 0.5);
    }
    return Polydisc(c, r);
}

}  // namespace

TEST(HausdorffRho, EqualDomainsAreAtDistanceZero)
{
    const auto U = box({0.1, Complex(0, 0.2)}, {0.5, 0.7});
    EXPECT_EQ(hausdorff_rho(U, U).total(), 0.0);
}

TEST(HausdorffRho, ConcentricDiscs)
{
    const auto r = hausdorff_rho(disc1(0.0, 0.5), disc1(0.0, 0.75));
    EXPECT_NEAR(r.closure, 0.25, 1e-15);
    EXPECT_NEAR(r.boundary, 0.25, 1e-15);
    EXPECT_NEAR(r.total(), 0.5, 1e-15);
}

TEST(HausdorffRho, ShiftedDiscs)
{
    const double d = 0.13;
    const auto r = hausdorff_rho(disc1(0.0, 1.0), disc1(Complex(0.0, d), 1.0));
    EXPECT_NEAR(r.closure, d, 1e-15);
    EXPECT_NEAR(r.boundary, d, 1e-15);
}

TEST(HausdorffRho, ShrinkFamilyTendsToZero)
{
    const auto U = box({0, 0, 0}, {0.4, 0.4, 0.4});
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {1, 2, 4, 8, 64}) {
        const double rho = hausdorff_rho(U, family_member(DomainFamily::shrink, U, n)).total();
        EXPECT_LT(rho, prev);
        prev = rho;
    }
    // each part is the corner distance sqrt(3) * 0.4 / 64
    EXPECT_NEAR(prev, 2.0 * std::sqrt(3.0) * 0.4 / 64.0, 1e-15);
}

TEST(HausdorffRho, SymmetricAndTriangle)
{
    Rng rng(77);
    for (int k = 0; k < 200; ++k) {
        const int n = 1 + k % 3;
        const auto A = random_polydisc(rng, n), B = random_polydisc(rng, n), C = random_polydisc(rng, n);
        const auto ab = hausdorff_rho(A, B), ba = hausdorff_rho(B, A);
        EXPECT_NEAR(ab.closure, ba.closure, 1e-14);
        EXPECT_NEAR(ab.boundary, ba.boundary, 1e-14);
        EXPECT_GE(ab.closure, 0.0);
        EXPECT_LE(ab.closure, hausdorff_rho(A, C).closure + hausdorff_rho(C, B).closure + 1e-12);
        EXPECT_LE(ab.boundary, hausdorff_rho(A, C).boundary + hausdorff_rho(C, B).boundary + 1e-12);
    }
}

TEST(HausdorffRho, SampledAgreesWithExact)
{
    Rng rng(5);
    for (int k = 0; k < 6; ++k) {
        const int n = 1 + k % 2;
        const auto A = random_polydisc(rng, n), B = random_polydisc(rng, n);
        const auto exact = hausdorff_rho(A, B);
        const auto sampled = hausdorff_rho_sampled(A, B);
        EXPECT_NEAR(sampled.parts.closure, exact.closure, 0.05 * std::max(exact.closure, 0.1)) << A.to_string() << " " << B.to_string();
        EXPECT_NEAR(sampled.parts.boundary, exact.boundary, 0.05 * std::max(exact.boundary, 0.1)) << A.to_string() << " " << B.to_string();
    }
}

TEST(EtaRestricted, FullDomainMatchesTheUnrestrictedValue)
{
    for (const char* id : {"E1.15", "E1.16", "E1.18"}) {
        const auto& sc = scenario(id);
        for (const auto& fam : sc.families) {
            const auto chart = fam.member(0.5 * (fam.param_min + fam.param_max) + 0.05, 0.0);
            if (!chart) continue;
            const auto at = chart->at(chart->model.center + 0.3 * chart->model.radius);
            const Point p = at.point();
            if (!sc.domain().contains(p)) continue;
            EXPECT_NEAR(eta_restricted(sc, sc.domain(), p).s, eta_at(sc, p).s, 1e-14) << id << " " << fam.id;
        }
    }
}

TEST(EtaRestricted, HorizontalDiscOfRadiusRho)
{
    const auto& sc = scenario("E1.15");
    for (double rho : {0.9, 0.5, 0.2}) {
        const auto U = box({0, 0, 0}, {rho, 0.9, 0.9});
        const auto e = eta_restricted(sc, U, make_point({0, 0, 0.3}));
        EXPECT_EQ(e.kind, EtaKind::exact);
        EXPECT_NEAR(e.s, rho, 1e-15);
    }
}

TEST(EtaRestricted, NestedDomainsGiveSmallerValues)
{
    Rng rng(8);
    const auto& sc = scenario("E1.16");
    const Polydisc outer = sc.domain().shrunk(0.9);
    const Polydisc inner = sc.domain().shrunk(0.5);
    for (int k = 0; k < 40; ++k) {
        // points on the registered punctured lines
        const double c = 0.05 + 0.3 * uniform01(rng);
        const Complex xi = random_in_disc(rng, 0.35);
        const Point p = k % 2 ? make_point({xi, c, 0}) : make_point({0, xi, c});
        EXPECT_LE(eta_restricted(sc, inner, p).s, eta_restricted(sc, outer, p).s + 1e-15) << format_point(p);
    }
    EXPECT_THROW(eta_restricted(sc, inner, make_point({0.9, 0, 0})), std::invalid_argument);
}

TEST(Convergence, ConstantFamilyHasNoGap)
{
    const auto& sc = scenario("E1.17");
    const Polydisc U = sc.domain().shrunk(0.4);
    const auto K = default_compact(sc, U, true, 8);
    const auto rep = convergence_experiment(sc, U, [&](int) { return U; }, {1, 2, 3}, {K});
    for (const auto& row : rep.rows) {
        EXPECT_EQ(row.rho, 0.0);
        EXPECT_EQ(row.sup_gap.front(), 0.0);
    }
    EXPECT_EQ(rep.monotone_from, 1);
}

TEST(Convergence, CompactsEventuallyLieInsideTheMembers)
{
    const auto& sc = scenario("E1.17");
    const Polydisc U = sc.domain().shrunk(0.4);
    for (DomainFamily f : {DomainFamily::shrink, DomainFamily::translate}) {
        const auto K = default_compact(sc, U, false);
        ASSERT_FALSE(K.empty());
        for (const auto& p : K) {
            EXPECT_TRUE(U.contains(p));
            EXPECT_TRUE(family_member(f, U, 64).contains(p)) << to_string(f) << " " << format_point(p);
        }
    }
}

TEST(Convergence, ShrinkingToTheBaseDomain)
{
    const auto& sc = scenario("E1.17");
    const Polydisc U = sc.domain().shrunk(0.4);
    const auto K = default_compact(sc, U, true);
    const auto rep = convergence_experiment(sc, U, [&](int n) { return family_member(DomainFamily::shrink, U, n); }, {1, 2, 4, 8, 16, 32, 64},
                                            {K});
    EXPECT_TRUE(rep.compact_meets_singular_set.front());
    EXPECT_LE(rep.rows.back().sup_gap.front(), 1e-2);
    EXPECT_GE(rep.monotone_from, 1);
}

TEST(Convergence, NonTransversalScenarioRejectsSingularCompacts)
{
    const auto& sc = scenario("E1.16");
    const Polydisc U = sc.domain().shrunk(0.4);
    const auto K = default_compact(sc, U, true, 4);
    EXPECT_THROW(convergence_experiment(sc, U, [&](int) { return U; }, {1}, {K}), std::invalid_argument);
}

TEST(DomainFamilyNames, ParseAndPrint)
{
    EXPECT_EQ(parse_domain_family("shrink"), DomainFamily::shrink);
    EXPECT_EQ(parse_domain_family(to_string(DomainFamily::translate)), DomainFamily::translate);
    EXPECT_THROW(parse_domain_family("grow"), std::invalid_argument);
    EXPECT_THROW(family_member(DomainFamily::shrink, Polydisc::unit(2), 0), std::invalid_argument);
}
