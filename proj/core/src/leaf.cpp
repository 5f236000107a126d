#include "foliation/leaf.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace foliation {

FlowResult flow(const PolyVectorField& field, const Point& p, Complex t, double tol, double safety)
{
    if (p.size() != field.dim()) throw std::invalid_argument("flow start point has the wrong dimension");
    if (!(tol > 0.0)) throw std::invalid_argument("flow tolerance must be positive");
    FlowResult res;
    res.endpoint = p;
    const double len = std::abs(t);
    if (len == 0.0) {
        res.certified = field.domain().shrunk(safety).contains(p);
        return res;
    }
    const Complex dir = t / len;
    const Polydisc& dom = field.domain();
    const Polydisc inner = dom.shrunk(safety);
    bool in_safety = inner.contains(p);
    Dop853Options o;
    o.rtol = tol;
    o.atol = tol;
    auto rhs = [&](const CVector& w, CVector& out) { out = dir * field(w); };
    auto inside = [&](const CVector& w) {
        if (!inner.contains(w)) in_safety = false;
        return dom.contains(w);
    };
    const RayIntegration ri = dop853_integrate(rhs, p, len, o, inside);
    res.endpoint = ri.state;
    res.step_count = ri.steps;
    res.status = ri.status;
    res.exit_fraction = ri.tau / len;
    res.t_used = dir * ri.tau;
    res.certified = ri.status == FlowStatus::completed && in_safety;
    return res;
}

SupNormBound estimate_sup_norm(const PolyVectorField& field, const Polydisc& region, int grid_per_coordinate)
{
    const int n = field.dim();
    const int g = std::max(1, grid_per_coordinate);
    // offsets on the unit disc: centre plus g rings of 2g points, outermost ring on the boundary
    std::vector<Complex> ring{0.0};
    for (int a = 1; a <= g; ++a)
        for (int b = 0; b < 2 * g; ++b) ring.push_back(std::polar(static_cast<double>(a) / g, std::numbers::pi * b / g));
    SupNormBound out;
    double lip = 0.0;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
        Point z(n);
        for (int j = 0; j < n; ++j) z(j) = region.center()(j) + region.radii()(j) * ring[idx[static_cast<std::size_t>(j)]];
        out.sampled_max = std::max(out.sampled_max, field(z).norm());
        lip = std::max(lip, field.jacobian_matrix(z).norm());
        int j = 0;
        while (j < n && ++idx[static_cast<std::size_t>(j)] == ring.size()) idx[static_cast<std::size_t>(j++)] = 0;
        if (j == n) break;
    }
    // covering radius of the grid in each coordinate disc
    const double h = region.radii().maxCoeff() * std::max(1.0 / g, std::numbers::pi / (2.0 * g)) * std::sqrt(static_cast<double>(n));
    out.lipschitz_pad = lip * h;
    out.value = out.sampled_max + out.lipschitz_pad;
    return out;
}

namespace {

double local_bound(const PolyVectorField& field, const Point& z, double rho)
{
    if (auto m = field.majorant(z, rho)) return m->norm();
    return estimate_sup_norm(field, Polydisc(z, RVector::Constant(field.dim(), rho)), 2).value;
}

struct Chain {
    double angle = 0.0;
    Point z;
    double tau = 0.0;
    long steps = 0;
    bool finished = false;  // exit located or capped
    bool pruned = false;    // already beyond the best known exit
};

// Advances a chain of Picard-Lindelof discs along a ray by at most `budget` links.
void advance_chain(const PolyVectorField& field, const Polydisc& inner, Chain& c, long budget, double cap,
                   const CertifiedRadiusOptions& opts)
{
    const Complex dir = std::polar(1.0, c.angle);
    Dop853Options o;
    o.rtol = opts.tol;
    o.atol = opts.tol;
    for (long b = 0; b < budget && !c.finished && !c.pruned; ++b) {
        const double d = inner.distance_to_boundary(c.z);
        if (!(d > 0.0)) {
            c.finished = true;
            break;
        }
        double best_ratio = 0.0, best_rho = d;
        for (int j = 0; j < 9; ++j) {
            const double rho = d * std::ldexp(1.0, -j);
            const double m = local_bound(field, c.z, rho);
            const double ratio = m > 0.0 ? rho / m : std::numeric_limits<double>::infinity();
            if (ratio > best_ratio) {
                best_ratio = ratio;
                best_rho = rho;
            }
        }
        double h = opts.safety * best_ratio;
        if (!std::isfinite(h)) h = cap - c.tau;  // locally zero field: nothing moves
        if (c.tau + h >= cap) {
            c.tau = cap;
            c.pruned = true;
            break;
        }
        const Polydisc local(c.z, RVector::Constant(field.dim(), best_rho));
        auto rhs = [&](const CVector& w, CVector& out) { out = dir * field(w); };
        auto inside = [&](const CVector& w) { return local.contains(w); };
        const RayIntegration ri = dop853_integrate(rhs, c.z, h, o, inside);
        ++c.steps;
        if (ri.status != FlowStatus::completed) {
            c.finished = true;
            break;
        }
        c.z = ri.state;
        c.tau += h;
        if (h < 1e-9 * c.tau) c.finished = true;
    }
}

double chain_exit(const PolyVectorField& field, const Polydisc& inner, const Point& p, double angle, double cap,
                  const CertifiedRadiusOptions& opts, long& steps)
{
    Chain c;
    c.angle = angle;
    c.z = p;
    advance_chain(field, inner, c, opts.max_chain_steps, cap, opts);
    steps += c.steps;
    return c.tau;
}

}  // namespace

CertifiedRadius certified_flow_disc_radius(const PolyVectorField& field, const Point& p, const CertifiedRadiusOptions& opts)
{
    if (!(opts.safety > 0.0 && opts.safety < 1.0)) throw std::invalid_argument("safety must lie in (0,1)");
    if (!field.domain().contains(p)) throw std::invalid_argument("point must be interior to the domain");
    if (!(field(p).norm() > 0.0)) throw std::invalid_argument("field vanishes at the point; no flow disc");
    const Polydisc inner = field.domain().shrunk(opts.safety);
    CertifiedRadius out;
    if (!inner.contains(p)) return out;
    const SupNormBound sup = estimate_sup_norm(field, inner, 3);  // coarse: the base radius is only a floor
    if (!(sup.value > 0.0)) throw std::invalid_argument("sup-norm estimate is zero near the point");
    out.base_radius = opts.safety * inner.distance_to_boundary(p) / sup.value;

    const int nr = std::max(4, opts.rays);
    std::vector<Chain> chains(static_cast<std::size_t>(nr));
    for (int k = 0; k < nr; ++k) {
        chains[static_cast<std::size_t>(k)].angle = 2.0 * std::numbers::pi * k / nr;
        chains[static_cast<std::size_t>(k)].z = p;
    }
    double best = opts.tau_cap;
    long budget = 16;
    // iterative deepening: cheap passes first, then extend only chains that could still lower the minimum
    while (true) {
        bool active = false;
        for (auto& c : chains) {
            if (c.finished || c.pruned) continue;
            const long before = c.steps;
            advance_chain(field, inner, c, budget, best, opts);
            out.chain_steps += c.steps - before;
            if (c.finished) best = std::min(best, c.tau);
            if (c.steps >= opts.max_chain_steps) c.finished = true;
            active = active || !(c.finished || c.pruned);
        }
        if (!active) break;
        budget *= 2;
    }
    int arg = 0;
    for (int k = 0; k < nr; ++k)
        if (chains[static_cast<std::size_t>(k)].tau < chains[static_cast<std::size_t>(arg)].tau) arg = k;
    double r = chains[static_cast<std::size_t>(arg)].tau;
    out.limiting_angle = chains[static_cast<std::size_t>(arg)].angle;

    // golden-section refinement between neighbouring rays; chains stop at r since only earlier exits matter
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = out.limiting_angle - 2.0 * std::numbers::pi / nr, b = out.limiting_angle + 2.0 * std::numbers::pi / nr;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = chain_exit(field, inner, p, x1, r, opts, out.chain_steps);
    double f2 = chain_exit(field, inner, p, x2, r, opts, out.chain_steps);
    for (int it = 0; it < opts.refine_iterations; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = chain_exit(field, inner, p, x1, r, opts, out.chain_steps);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = chain_exit(field, inner, p, x2, r, opts, out.chain_steps);
        }
    }
    if (std::min(f1, f2) < r) {
        r = std::min(f1, f2);
        out.limiting_angle = f1 < f2 ? x1 : x2;
    }
    out.radius = std::max(r, out.base_radius);
    return out;
}

// ---------------------------------------------------------------- model leaves

const char* to_string(ModelKind k) { return k == ModelKind::disc ? "disc" : "punctured_disc"; }

bool ModelDomain::contains(Complex zeta) const
{
    if (!(std::abs(zeta - center) < radius)) return false;
    return kind == ModelKind::disc || zeta != puncture;
}

std::string ModelDomain::to_string() const
{
    std::string s = fmt::format("{}(r={:.6g}", foliation::to_string(kind), radius);
    if (center != Complex(0.0)) s += fmt::format(", center={:.6g}{:+.6g}i", center.real(), center.imag());
    if (kind == ModelKind::punctured_disc && puncture != center)
        s += fmt::format(", puncture={:.6g}{:+.6g}i", puncture.real(), puncture.imag());
    return s + ")";
}

LeafChart LeafChart::at(Complex zeta) const
{
    LeafChart c = *this;
    c.base_param = zeta;
    return c;
}

std::optional<LeafChart> LeafChart::restrict_to(const Polydisc& U) const
{
    if (!restrictor) return std::nullopt;
    auto m = restrictor(U, base_param);
    if (!m) return std::nullopt;
    LeafChart c = *this;
    c.model = *m;
    c.id = id + "|U";
    return c;
}

namespace {

struct Disc {
    Complex c;
    double r;
};

bool disc_inside(const Disc& a, const Disc& b) { return std::abs(a.c - b.c) + a.r <= b.r * (1.0 + 1e-14); }

}  // namespace

LeafChart affine_line_chart(std::string id, Point base, Tangent direction, ModelDomain model, Complex base_param)
{
    LeafChart c;
    c.id = std::move(id);
    c.model = model;
    c.base_param = base_param;
    c.map = [base, direction](Complex z) -> Point { return base + z * direction; };
    c.derivative = [direction](Complex) -> Tangent { return direction; };
    c.restrictor = [base, direction, model](const Polydisc& U, Complex ref) -> std::optional<ModelDomain> {
        std::vector<Disc> discs{{model.center, model.radius}};
        for (int j = 0; j < U.dim(); ++j) {
            const Complex bj = direction(j);
            const Complex off = U.center()(j) - base(j);
            if (bj == Complex(0.0)) {
                if (!(std::abs(off) < U.radii()(j))) return std::nullopt;
                continue;
            }
            discs.push_back({off / bj, U.radii()(j) / std::abs(bj)});
        }
        // the intersection is classifiable when one disc sits inside all others
        std::optional<Disc> smallest;
        for (const auto& d : discs) {
            bool nested = true;
            for (const auto& e : discs) nested = nested && disc_inside(d, e);
            if (nested) {
                smallest = d;
                break;
            }
        }
        if (!smallest) return std::nullopt;
        ModelDomain m;
        m.center = smallest->c;
        m.radius = smallest->r;
        m.kind = ModelKind::disc;
        if (model.kind == ModelKind::punctured_disc && std::abs(model.puncture - m.center) < m.radius) {
            m.kind = ModelKind::punctured_disc;
            m.puncture = model.puncture;
        }
        if (!m.contains(ref)) return std::nullopt;
        return m;
    };
    return c;
}

std::optional<Complex> affine_line_param(const Point& base, const Tangent& direction, const Point& p, double tol)
{
    const double d2 = direction.squaredNorm();
    if (!(d2 > 0.0)) return std::nullopt;
    const Complex z = direction.dot(p - base) / d2;
    if ((base + z * direction - p).norm() > tol * std::max(1.0, p.norm())) return std::nullopt;
    return z;
}

double parallel_residual(const Tangent& a, const Tangent& b)
{
    const double na = a.norm(), nb = b.norm();
    if (!(na > 0.0) || !(nb > 0.0)) return 1.0;
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = i + 1; j < a.size(); ++j) s += std::norm(a(i) * b(j) - a(j) * b(i));
    return std::sqrt(s) / (na * nb);
}

ChartValidation validate_chart(const LeafChart& chart, const PolyVectorField& field, int samples, std::uint64_t seed)
{
    ChartValidation v;
    Rng rng = substream(seed, 0xc4a27);
    const ModelDomain& m = chart.model;
    auto draw = [&]() {
        for (;;) {
            const Complex z = m.center + random_in_disc(rng, 0.999 * m.radius);
            if (m.contains(z) && std::abs(z - m.puncture) > 1e-9 * m.radius) return z;
        }
    };
    v.min_separation = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const Complex a = draw(), b = draw();
        if (a != b) v.min_separation = std::min(v.min_separation, (chart.map(a) - chart.map(b)).norm());
        const Tangent d = chart.derivative(a);
        if (!(d.norm() > 0.0)) v.immersed = false;
        const Point q = chart.map(a);
        const Tangent x = field(q);
        v.max_parallel_residual = std::max(v.max_parallel_residual, parallel_residual(x, d));
    }
    v.injective = v.min_separation > 0.0;
    v.parallel = v.max_parallel_residual <= 1e-8;
    return v;
}

std::optional<LeafChart> classify_model_leaf(const std::vector<ChartFamily>& registry, const Point& p)
{
    for (const auto& fam : registry)
        if (fam.classify)
            if (auto c = fam.classify(p)) return c;
    return std::nullopt;
}

}  // namespace foliation
