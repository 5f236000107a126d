#include "foliation/cone.hpp"
#include "foliation/domain.hpp"
#include "foliation/eta.hpp"
#include "foliation/leaf.hpp"
#include "foliation/scenario.hpp"

#include <benchmark/benchmark.h>

using namespace foliation;

namespace {

void BM_FieldEval(benchmark::State& state)
{
    const auto& sc = scenario("E1.18");
    const Point p = make_point({0.2, Complex(0.1, 0.3), -0.4});
    for (auto _ : state) benchmark::DoNotOptimize(sc.field(p));
}
BENCHMARK(BM_FieldEval);

void BM_Flow(benchmark::State& state)
{
    const auto& sc = scenario("E1.17");
    const Point p = make_point({0.3, 0.2, 0.1});
    for (auto _ : state) benchmark::DoNotOptimize(flow(sc.field, p, Complex(0.5, 0.5)));
}
BENCHMARK(BM_Flow);

void BM_FoliationCone(benchmark::State& state)
{
    const auto& sc = scenario("E1.5");
    ConeOptions o;
    o.samples_per_scale = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_foliation_cone(sc.field, sc.singular_set, Point::Zero(3), o));
}
BENCHMARK(BM_FoliationCone)->Arg(500)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_Transversality(benchmark::State& state)
{
    const auto& sc = scenario("E1.16");
    for (auto _ : state) benchmark::DoNotOptimize(is_transversal_type(sc.field, sc.singular_set, make_point({0, 0, 0.5})));
}
BENCHMARK(BM_Transversality)->Unit(benchmark::kMillisecond);

void BM_FlowLowerBound(benchmark::State& state)
{
    const auto& sc = scenario("E1.15");
    CertifiedRadiusOptions o;
    o.rays = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(eta_lower_flow(sc.field, make_point({0, 0, 0.3}), o));
}
BENCHMARK(BM_FlowLowerBound)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_ExtremalRadius(benchmark::State& state)
{
    const ModelDomain m = ModelDomain::punctured(1.0);
    Complex z(0.3, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(extremal_radius(m, z));
}
BENCHMARK(BM_ExtremalRadius);

void BM_Scan(benchmark::State& state)
{
    const auto& sc = scenario("E1.18");
    for (auto _ : state) benchmark::DoNotOptimize(discontinuity_scan(sc));
}
BENCHMARK(BM_Scan)->Unit(benchmark::kMillisecond);

void BM_HausdorffRho(benchmark::State& state)
{
    const Polydisc U = Polydisc::centered(3, 0.4);
    const Polydisc V = family_member(DomainFamily::translate, U, 3);
    for (auto _ : state) benchmark::DoNotOptimize(hausdorff_rho(U, V));
}
BENCHMARK(BM_HausdorffRho);

}  // namespace

BENCHMARK_MAIN();
