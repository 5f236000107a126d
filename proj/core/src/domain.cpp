#include "foliation/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace foliation {

namespace {

void check_pair(const Polydisc& U, const Polydisc& V)
{
    if (U.dim() != V.dim()) throw std::invalid_argument("polydiscs of different dimension");
}

// distance from a point with per-coordinate offsets t (to B's centres) to B's closure
double to_closure(const RVector& t, const RVector& rb)
{
    double acc = 0.0;
    for (Eigen::Index k = 0; k < t.size(); ++k) {
        const double e = std::max(0.0, t(k) - rb(k));
        acc += e * e;
    }
    return std::sqrt(acc);
}

double to_boundary(const RVector& t, const RVector& rb)
{
    const double out = to_closure(t, rb);
    if (out > 0.0) return out;
    return (rb - t).minCoeff();
}

double directed_closure(const Polydisc& A, const Polydisc& B)
{
    RVector hi(A.dim());
    for (int k = 0; k < A.dim(); ++k) hi(k) = std::abs(A.center()(k) - B.center()(k)) + A.radii()(k);
    return to_closure(hi, B.radii());
}

double directed_boundary(const Polydisc& A, const Polydisc& B)
{
    const int n = A.dim();
    RVector lo(n), hi(n);
    for (int k = 0; k < n; ++k) {
        const double d = std::abs(A.center()(k) - B.center()(k));
        lo(k) = std::max(0.0, d - A.radii()(k));
        hi(k) = d + A.radii()(k);
    }
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
        RVector flo = lo;
        flo(j) = std::abs(std::abs(A.center()(j) - B.center()(j)) - A.radii()(j));
        best = std::max({best, to_boundary(flo, B.radii()), to_boundary(hi, B.radii())});
    }
    return best;
}

std::vector<Complex> disc_grid(Complex c, double r, int m, bool circle_only)
{
    std::vector<Complex> pts;
    const int ang = 4 * m;
    if (circle_only) {
        for (int b = 0; b < 2 * ang; ++b) pts.push_back(c + std::polar(r, std::numbers::pi * b / ang));
        return pts;
    }
    pts.push_back(c);
    for (int a = 1; a <= m; ++a)
        for (int b = 0; b < ang; ++b) pts.push_back(c + std::polar(r * a / m, 2.0 * std::numbers::pi * b / ang));
    return pts;
}

// sup over sampled points of A (closure, or boundary faces) of the distance to B's closure or boundary
double sampled_sup(const Polydisc& A, const Polydisc& B, int m, bool boundary)
{
    const int n = A.dim();
    double best = 0.0;
    const int faces = boundary ? n : 1;
    for (int f = 0; f < faces; ++f) {
        std::vector<std::vector<Complex>> grids;
        for (int k = 0; k < n; ++k) grids.push_back(disc_grid(A.center()(k), A.radii()(k), m, boundary && k == f));
        std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
        RVector t(n);
        for (;;) {
            for (int k = 0; k < n; ++k) t(k) = std::abs(grids[static_cast<std::size_t>(k)][idx[static_cast<std::size_t>(k)]] - B.center()(k));
            best = std::max(best, boundary ? to_boundary(t, B.radii()) : to_closure(t, B.radii()));
            int k = 0;
            while (k < n && ++idx[static_cast<std::size_t>(k)] == grids[static_cast<std::size_t>(k)].size()) idx[static_cast<std::size_t>(k++)] = 0;
            if (k == n) break;
        }
    }
    return best;
}

bool within(const Polydisc& inner, const Polydisc& outer)
{
    for (int k = 0; k < inner.dim(); ++k)
        if (std::abs(inner.center()(k) - outer.center()(k)) + inner.radii()(k) > outer.radii()(k) * (1.0 + 1e-12)) return false;
    return true;
}

}  // namespace

RhoParts hausdorff_rho(const Polydisc& U, const Polydisc& V)
{
    check_pair(U, V);
    RhoParts r;
    r.closure = std::max(directed_closure(U, V), directed_closure(V, U));
    r.boundary = std::max(directed_boundary(U, V), directed_boundary(V, U));
    return r;
}

SampledRho hausdorff_rho_sampled(const Polydisc& U, const Polydisc& V, int density, double agree, int max_refinements)
{
    check_pair(U, V);
    if (density < 1) throw std::invalid_argument("sample density must be positive");
    auto pass = [&](int m) {
        RhoParts p;
        p.closure = std::max(sampled_sup(U, V, m, false), sampled_sup(V, U, m, false));
        p.boundary = std::max(sampled_sup(U, V, m, true), sampled_sup(V, U, m, true));
        return p;
    };
    SampledRho out;
    out.density = density;
    out.parts = pass(density);
    for (int r = 1; r <= max_refinements; ++r) {
        const RhoParts next = pass(density + r);
        const bool done = std::abs(next.total() - out.parts.total()) <= agree;
        out.parts = next;
        out.density = density + r;
        out.refinements = r;
        if (done) return out;
    }
    throw std::runtime_error("Hausdorff refinement budget exhausted");
}

EtaSample eta_restricted(const Scenario& sc, const Polydisc& U, const Point& p)
{
    if (U.dim() != sc.domain().dim()) throw std::invalid_argument("restriction domain has the wrong dimension");
    if (!within(U, sc.domain())) throw std::invalid_argument("restriction domain leaves the ambient domain");
    if (!U.contains(p)) throw std::invalid_argument("point lies outside the restriction domain");
    if (!sc.singular_set.empty() && sc.singular_set.distance(p) <= 1e-13) return EtaSample::make(p, 0.0, EtaKind::exact, "E");
    if (auto chart = sc.chart_at(p)) {
        if (auto sub = chart->restrict_to(U)) return eta_exact(*sub);
    }
    // component not classifiable: bracket it
    const PolyVectorField local = sc.field.with_domain(U);
    const double hi = eta_upper_ambient(U, p).s;
    double lo = 0.0;
    try {
        lo = std::min(hi, eta_lower_flow(local, p).s);
    } catch (const std::invalid_argument&) {
        lo = 0.0;
    }
    return EtaSample::bracket(p, lo, hi, "flow|ambient|U");
}

DomainFamily parse_domain_family(const std::string& name)
{
    if (name == "shrink") return DomainFamily::shrink;
    if (name == "translate") return DomainFamily::translate;
    throw std::invalid_argument("unknown domain family '" + name + "' (expected shrink or translate)");
}

const char* to_string(DomainFamily f) { return f == DomainFamily::shrink ? "shrink" : "translate"; }

Polydisc family_member(DomainFamily f, const Polydisc& U, int n)
{
    if (n < 1) throw std::invalid_argument("family index starts at 1");
    if (f == DomainFamily::shrink) return Polydisc(U.center(), U.radii() * (1.0 + 1.0 / n));
    Point c = U.center();
    c(0) += U.min_radius() / (4.0 * n);
    return Polydisc(c, U.radii());
}

ConvergenceReport convergence_experiment(const Scenario& sc, const Polydisc& U, const std::function<Polydisc(int)>& family,
                                         const std::vector<int>& steps, const std::vector<std::vector<Point>>& compacts)
{
    if (!within(U, sc.domain())) throw std::invalid_argument("base domain leaves the ambient domain");
    ConvergenceReport rep;
    std::vector<std::vector<double>> base;
    for (const auto& K : compacts) {
        bool meets = false;
        std::vector<double> vals;
        for (const auto& p : K) {
            const EtaSample e = eta_restricted(sc, U, p);
            meets = meets || e.leaf_ref == "E";
            vals.push_back(e.eta);
        }
        if (meets && !sc.transversal)
            throw std::invalid_argument("compacts meeting the singular set need a scenario of transversal type");
        rep.compact_meets_singular_set.push_back(meets);
        base.push_back(std::move(vals));
    }
    for (int n : steps) {
        const Polydisc Un = family(n);
        if (!within(Un, sc.domain())) throw std::invalid_argument("family member " + std::to_string(n) + " leaves the ambient domain");
        ConvergenceRow row;
        row.n = n;
        row.rho = hausdorff_rho(U, Un).total();
        for (std::size_t k = 0; k < compacts.size(); ++k) {
            double sup = 0.0;
            for (std::size_t i = 0; i < compacts[k].size(); ++i) {
                const Point& p = compacts[k][i];
                if (!Un.contains(p)) {
                    sup = std::numeric_limits<double>::infinity();
                    continue;
                }
                sup = std::max(sup, std::abs(eta_restricted(sc, Un, p).eta - base[k][i]));
            }
            row.sup_gap.push_back(sup);
        }
        rep.rows.push_back(std::move(row));
    }
    // monotone tail
    for (std::size_t start = 0; start < rep.rows.size(); ++start) {
        bool ok = true;
        for (std::size_t i = start + 1; i < rep.rows.size() && ok; ++i)
            for (std::size_t k = 0; k < compacts.size(); ++k)
                ok = ok && rep.rows[i].sup_gap[k] <= rep.rows[i - 1].sup_gap[k] + 1e-15;
        if (ok) {
            rep.monotone_from = rep.rows.empty() ? -1 : rep.rows[start].n;
            break;
        }
    }
    return rep;
}

std::vector<Point> default_compact(const Scenario& sc, const Polydisc& U, bool with_singular, int per_family)
{
    const Polydisc inner = U.shrunk(0.8);
    std::vector<Point> pts;
    for (const auto& fam : sc.families) {
        if (!fam.member) continue;
        const int side = std::max(2, static_cast<int>(std::ceil(std::sqrt(per_family))));
        const int members = fam.param_min == fam.param_max ? 1 : 3;
        for (int m = 0; m < members; ++m) {
            const double c = members == 1 ? fam.param_min : 0.5 * (fam.param_min + (fam.param_max - fam.param_min) * (m + 0.5) / members);
            const auto base = fam.member(c, 0.0);
            if (!base) continue;
            const ModelDomain& model = base->model;
            for (int i = 0; i < side; ++i)
                for (int j = 0; j < side; ++j) {
                    const Complex zeta = model.center + 0.8 * model.radius * Complex(-1.0 + 2.0 * (i + 0.5) / side, -1.0 + 2.0 * (j + 0.5) / side);
                    if (!model.contains(zeta) || zeta == model.puncture) continue;
                    const auto chart = fam.member(c, zeta);
                    if (!chart) continue;
                    const Point p = chart->map(zeta);
                    if (inner.contains(p) && sc.singular_set.distance(p) > 1e-9) pts.push_back(p);
                }
        }
    }
    if (with_singular) {
        Rng rng = substream(0x5eed, 0xc0);
        for (const auto& q : sc.singular_set.sample_in(inner, 8, rng)) pts.push_back(q);
    }
    return pts;
}

}  // namespace foliation
