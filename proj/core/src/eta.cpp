#include "foliation/eta.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace foliation {

const char* to_string(EtaKind k)
{
    switch (k) {
    case EtaKind::exact: return "exact";
    case EtaKind::lower: return "lower";
    case EtaKind::upper: return "upper";
    case EtaKind::interval: return "interval";
    }
    return "?";
}

const char* to_string(Completeness c)
{
    switch (c) {
    case Completeness::complete: return "complete";
    case Completeness::incomplete: return "incomplete";
    case Completeness::inconclusive: return "inconclusive";
    }
    return "?";
}

EtaSample EtaSample::make(Point p, double s, EtaKind kind, std::string ref)
{
    if (!(s >= 0.0)) throw std::invalid_argument("extremal derivative must be non-negative");
    EtaSample e;
    e.point = std::move(p);
    e.s = s;
    e.eta = s * s;
    e.kind = kind;
    e.lower = s;
    e.upper = s;
    e.leaf_ref = std::move(ref);
    return e;
}

EtaSample EtaSample::bracket(Point p, double lo, double hi, std::string ref)
{
    if (!(lo >= 0.0 && lo <= hi)) throw std::invalid_argument("interval bounds must satisfy 0 <= lower <= upper");
    EtaSample e = make(std::move(p), 0.5 * (lo + hi), EtaKind::interval, std::move(ref));
    e.lower = lo;
    e.upper = hi;
    return e;
}

namespace {

// Disc automorphism of the model's disc moving the puncture to the origin, in normalized coordinates.
struct PunctureFrame {
    Complex a;  // puncture in normalized coordinates
    Complex to(Complex w) const { return (w - a) / (1.0 - std::conj(a) * w); }
    Complex from(Complex v) const { return (v + a) / (1.0 + std::conj(a) * v); }
    double derivative(Complex w) const { return (1.0 - std::norm(a)) / std::norm(1.0 - std::conj(a) * w); }
};

void check_interior(const ModelDomain& model, Complex zeta)
{
    if (model.kind == ModelKind::punctured_disc && zeta == model.puncture)
        throw std::invalid_argument("model point sits at the puncture");
    if (!model.contains(zeta)) throw std::invalid_argument("model point lies outside the model domain");
}

}  // namespace

double extremal_radius(const ModelDomain& model, Complex zeta)
{
    check_interior(model, zeta);
    const double r = model.radius;
    const Complex w = (zeta - model.center) / r;
    if (model.kind == ModelKind::disc) return r * (1.0 - std::norm(w));
    const PunctureFrame f{(model.puncture - model.center) / r};
    const Complex v = f.to(w);
    const double av = std::abs(v);
    // punctured unit disc density pulled back through the automorphism and the scaling
    return r * 2.0 * av * std::log(1.0 / av) / f.derivative(w);
}

Complex model_covering(const ModelDomain& model, Complex base, Complex u)
{
    check_interior(model, base);
    const double r = model.radius;
    const Complex w0 = (base - model.center) / r;
    if (model.kind == ModelKind::disc) return model.center + r * (u + w0) / (1.0 + std::conj(w0) * u);
    const PunctureFrame f{(model.puncture - model.center) / r};
    const Complex L = std::log(f.to(w0));
    const Complex u0 = (L + 1.0) / (L - 1.0);
    const Complex m = (u + u0) / (1.0 + std::conj(u0) * u);
    const Complex v = std::exp((m + 1.0) / (m - 1.0));
    return model.center + r * f.from(v);
}

Point uniformize(const LeafChart& chart, Complex u) { return chart.map(model_covering(chart.model, chart.base_param, u)); }

EtaSample eta_exact(const LeafChart& chart, Complex zeta)
{
    const double s = chart.derivative(zeta).norm() * extremal_radius(chart.model, zeta);
    return EtaSample::make(chart.map(zeta), s, EtaKind::exact, chart.id);
}

EtaSample eta_lower_flow(const PolyVectorField& field, const Point& p, const CertifiedRadiusOptions& opts)
{
    const double speed = field(p).norm();
    if (!(speed > 0.0)) throw std::invalid_argument("field vanishes at the point; it lies on the singular set");
    const CertifiedRadius R = certified_flow_disc_radius(field, p, opts);
    return EtaSample::make(p, R.radius * speed, EtaKind::lower, "flow");
}

EtaSample eta_upper_ambient(const Polydisc& U, const Point& p)
{
    if (p.size() != U.dim()) throw std::invalid_argument("point dimension does not match the polydisc");
    if (!U.contains(p)) throw std::invalid_argument("point is not interior to the polydisc");
    double acc = 0.0;
    for (int j = 0; j < U.dim(); ++j) {
        const double r = U.radii()(j);
        const double b = r * (1.0 - std::norm(p(j) - U.center()(j)) / (r * r));
        acc += b * b;
    }
    return EtaSample::make(p, std::sqrt(acc), EtaKind::upper, "ambient");
}

EtaSample eta_at(const Scenario& sc, const Point& p, const CertifiedRadiusOptions& flow_opts)
{
    if (!sc.domain().contains(p)) throw std::invalid_argument("point lies outside the scenario domain");
    if (!sc.singular_set.empty() && sc.singular_set.distance(p) <= 1e-13) return EtaSample::make(p, 0.0, EtaKind::exact, "E");
    if (auto chart = sc.chart_at(p)) return eta_exact(*chart);
    const double lo = eta_lower_flow(sc.field, p, flow_opts).s;
    const double hi = eta_upper_ambient(sc.domain(), p).s;
    return EtaSample::bracket(p, std::min(lo, hi), hi, "flow|ambient");
}

// ------------------------------------------------------------ sequences

SequenceLimit eta_sequence_limits(const Scenario& sc, const PointSequence& seq, int horizon, bool stride_log)
{
    if (horizon < seq.first) throw std::invalid_argument("sequence horizon precedes its first index");
    SequenceLimit out;
    if (stride_log) {
        for (long step = 1; ; step *= 10) {
            for (long k = 1; k < 10; ++k) {
                const long n = k * step;
                if (n >= seq.first && n <= horizon) out.indices.push_back(static_cast<int>(n));
            }
            if (step * 10 > horizon) break;
        }
        if (out.indices.empty() || out.indices.back() != horizon) out.indices.push_back(horizon);
    } else {
        for (int n = seq.first; n <= horizon; ++n) out.indices.push_back(n);
    }
    for (int n : out.indices) {
        const Point p = seq.at(n);
        if (!sc.domain().contains(p)) throw std::invalid_argument("sequence leaves the domain");
        out.samples.push_back(eta_at(sc, p));
    }
    out.limit = out.samples.back().eta;
    const std::size_t tail = std::max<std::size_t>(1, out.samples.size() / 4);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = out.samples.size() - tail; i < out.samples.size(); ++i) {
        lo = std::min(lo, out.samples[i].eta);
        hi = std::max(hi, out.samples[i].eta);
    }
    out.tail_oscillation = hi - lo;

    // images of the last uniformizer against the singular set and the target's leaf
    const Point last = seq.at(out.indices.back());
    const auto chart = sc.chart_at(last);
    const auto target_chart = sc.chart_at(seq.target);
    std::vector<Point> leaf_cloud;
    if (target_chart) {
        const ModelDomain& m = target_chart->model;
        for (int i = 0; i <= 60; ++i)
            for (int j = 0; j <= 60; ++j) {
                const Complex z = m.center + m.radius * Complex(-1.0 + i / 30.0, -1.0 + j / 30.0);
                if (m.contains(z) && z != m.puncture) leaf_cloud.push_back(target_chart->map(z));
            }
    }
    if (chart) {
        double worst = 0.0;
        for (int a = 1; a <= 4; ++a)
            for (int b = 0; b < 8; ++b) {
                const Point q = uniformize(*chart, std::polar(0.05 * a, std::numbers::pi * b / 4.0));
                double d = sc.singular_set.empty() ? std::numeric_limits<double>::infinity() : sc.singular_set.distance(q);
                for (const auto& x : leaf_cloud) d = std::min(d, (x - q).norm());
                worst = std::max(worst, d);
            }
        out.image_distance = worst;
    } else {
        out.image_distance = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

// --------------------------------------------------------------- scanning

ScanResult discontinuity_scan(const Scenario& sc, const ScanOptions& opts)
{
    if (opts.grid < 2 || opts.members < 1 || opts.ladder < 1) throw std::invalid_argument("scan grid too small");
    ScanResult out;
    const double near = opts.near_radius > 0.0 ? opts.near_radius : 0.2 * sc.domain().min_radius();

    for (const auto& fam : sc.families) {
        if (!fam.member) continue;
        const int members = fam.param_min == fam.param_max ? 1 : opts.members;
        for (int m = 0; m < members; ++m) {
            const double c = members == 1 ? fam.param_min
                                          : fam.param_min + (fam.param_max - fam.param_min) * m / (members - 1.0);
            const auto base = fam.member(c, 0.0);
            if (!base) continue;
            const ModelDomain& model = base->model;
            for (int i = 0; i < opts.grid; ++i)
                for (int j = 0; j < opts.grid; ++j) {
                    const Complex off(-1.0 + 2.0 * i / (opts.grid - 1.0), -1.0 + 2.0 * j / (opts.grid - 1.0));
                    const Complex zeta = model.center + 0.9 * model.radius * off;
                    if (!model.contains(zeta) || std::abs(zeta - model.puncture) < 1e-12 * model.radius) continue;
                    const auto chart = fam.member(c, zeta);
                    if (!chart) continue;
                    ScanCell cell;
                    cell.family = fam.id;
                    cell.member = m;
                    cell.i = i;
                    cell.j = j;
                    cell.point = chart->map(zeta);
                    if (!sc.domain().contains(cell.point)) continue;
                    cell.s = eta_exact(*chart, zeta).s;
                    cell.leaf_ref = chart->id;
                    out.max_s = std::max(out.max_s, cell.s);
                    out.cells.push_back(std::move(cell));
                }
        }
    }
    out.gap_tol = opts.gap_tol > 0.0 ? opts.gap_tol : opts.gap_fraction * out.max_s;

    const double finest = near * std::ldexp(1.0, -(opts.ladder - 1));
    for (auto& cell : out.cells) {
        const SetProjection proj = sc.singular_set.nearest(cell.point);
        if (proj.distance > near) continue;
        cell.probed = true;
        cell.singular_point = proj.nearest;
        const Point& e = proj.nearest;
        for (const auto& fam : sc.families) {
            if (!fam.approach) continue;
            const auto ap = fam.approach(e, finest);
            if (!ap) continue;
            cell.limits.emplace_back(fam.id, eta_exact(ap->chart).s);
            cell.separatrix_adjacent = cell.separatrix_adjacent || ap->to_puncture;
        }
        // straight ambient approach from the cell towards e
        const Point q = e + (finest / proj.distance) * (cell.point - e);
        if (auto chart = sc.chart_at(q))
            cell.limits.emplace_back("line", eta_exact(*chart).s);
        else
            ++out.skipped;
        if (cell.limits.empty()) continue;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& [label, s] : cell.limits) {
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        cell.gap = hi - lo;
        cell.flagged = cell.gap > out.gap_tol;
        if (cell.flagged) {
            ++out.flags;
            if (!cell.separatrix_adjacent) ++out.flags_off_separatrix;
        }
    }

    // largest 4-connected flagged patch inside a single member grid
    std::map<std::pair<std::string, int>, std::map<std::pair<int, int>, bool>> grids;
    for (const auto& cell : out.cells)
        if (cell.flagged) grids[{cell.family, cell.member}][{cell.i, cell.j}] = false;
    for (auto& [key, g] : grids) {
        for (auto& [ij, seen] : g) {
            if (seen) continue;
            int size = 0;
            std::queue<std::pair<int, int>> todo;
            todo.push(ij);
            seen = true;
            while (!todo.empty()) {
                const auto [a, b] = todo.front();
                todo.pop();
                ++size;
                for (const auto& nb : {std::pair{a + 1, b}, std::pair{a - 1, b}, std::pair{a, b + 1}, std::pair{a, b - 1}}) {
                    auto it = g.find(nb);
                    if (it != g.end() && !it->second) {
                        it->second = true;
                        todo.push(nb);
                    }
                }
            }
            out.largest_patch = std::max(out.largest_patch, size);
        }
    }
    return out;
}

// ------------------------------------------------------- lengths and completeness

namespace {

template <class F>
double integrate(F&& f, double a, double b, double tol)
{
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

}  // namespace

MetricLength metric_length(const std::function<double(const Point&)>& s_of, const PathSpec& path,
                           const std::vector<double>& deltas, double tol)
{
    auto element = [&](double u) {
        const double s = s_of(path.map(u));
        if (!(s > 0.0)) throw std::domain_error("extremal derivative vanishes on the path interior");
        return 2.0 * path.derivative(u).norm() / s;
    };
    MetricLength out;
    if (deltas.empty()) {
        out.length = integrate(element, 0.0, 1.0, tol);
        return out;
    }
    std::vector<double> ds = deltas;
    std::sort(ds.begin(), ds.end(), std::greater<>());
    double prev = 0.0, acc = 0.0;
    for (double d : ds) {
        if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("truncation must lie in (0, 1]");
        acc += integrate(element, prev, 1.0 - d, tol);
        prev = 1.0 - d;
        out.ladder.emplace_back(d, acc);
    }
    out.length = acc;
    return out;
}

double chart_s(const Scenario& sc, const Point& p)
{
    if (!sc.domain().contains(p)) throw std::invalid_argument("ray leaves the domain");
    const auto chart = sc.chart_at(p);
    if (!chart) throw std::invalid_argument("no registered chart covers " + format_point(p));
    return eta_exact(*chart).s;
}

CompletenessReport completeness_probe(const std::function<double(const Point&)>& s_of, const std::vector<ProbeRay>& rays,
                                      const CompletenessOptions& opts)
{
    if (opts.rungs < 3) throw std::invalid_argument("completeness ladder needs at least three rungs");
    CompletenessReport rep;
    bool all_complete = !rays.empty(), any_incomplete = false;
    for (const auto& ray : rays) {
        RayLengths rl;
        rl.ray = ray.id;
        // in the logarithmic variable v = log(delta) the element is 2 |ray'| delta / s
        auto element = [&](double v) {
            const double d = std::exp(v);
            const double s = s_of(ray.at(d));
            if (!(s > 0.0)) throw std::domain_error("extremal derivative vanishes along the ray");
            return 2.0 * ray.derivative(d).norm() * d / s;
        };
        double acc = 0.0, prev = std::log(ray.delta_start);
        for (int k = 1; k <= opts.rungs; ++k) {
            const double d = ray.delta_start * std::ldexp(1.0, -k);
            acc += integrate(element, std::log(d), prev, 1e-12);
            prev = std::log(d);
            rl.deltas.push_back(d);
            rl.lengths.push_back(acc);
        }
        const auto& L = rl.lengths;
        const std::size_t R = L.size();
        const bool cauchy = std::abs(L[R - 1] - L[R - 2]) <= opts.cauchy_tol && std::abs(L[R - 2] - L[R - 3]) <= opts.cauchy_tol;
        bool grows = true;
        for (std::size_t k = 1; k < R; ++k) grows = grows && (L[k] - L[k - 1]) >= opts.growth / static_cast<double>(k + 1);
        rl.verdict = cauchy ? Completeness::incomplete : grows ? Completeness::complete : Completeness::inconclusive;
        all_complete = all_complete && rl.verdict == Completeness::complete;
        any_incomplete = any_incomplete || rl.verdict == Completeness::incomplete;
        rep.rays.push_back(std::move(rl));
    }
    rep.verdict = any_incomplete ? Completeness::incomplete : all_complete ? Completeness::complete : Completeness::inconclusive;
    return rep;
}

CompletenessReport completeness_probe(const Scenario& sc, const CompletenessOptions& opts)
{
    return completeness_probe([&sc](const Point& p) { return chart_s(sc, p); }, sc.rays, opts);
}

// ---------------------------------------------------------- radial density

namespace {

double base_norm(const Point& z)
{
    if (z.size() < 3) throw std::invalid_argument("radial density needs three coordinates");
    return std::sqrt(std::norm(z(0)) + std::norm(z(1)));
}

}  // namespace

double ex32_density(const Point& z, int k, double r, const PolyVectorField& field)
{
    if (k < 1) throw std::invalid_argument("homogeneity degree must be positive");
    const double a = base_norm(z);
    if (!(a > 0.0)) throw std::domain_error("projection vanishes; point on the singular set");
    if (!(a < r)) throw std::invalid_argument("log scale must exceed the projection norm");
    const double x = field(z).norm();
    const double lg = std::log(a / r);
    return std::pow(a, 2 * k - 2) / (x * x * lg * lg);
}

Ex32Bounds ex32_bounds_check(const PolyVectorField& field, int k, double rho, int grid)
{
    if (grid < 2 || !(rho > 0.0)) throw std::invalid_argument("bounds grid needs grid >= 2 and rho > 0");
    Ex32Bounds b;
    b.c_low = std::numeric_limits<double>::infinity();
    const int nbeta = 4 * ((grid + 1) / 2) + 1;  // contains 0, pi/4 and pi/2
    std::vector<Complex> third{0.0};
    for (int a = 0; a < 4; ++a) third.push_back(std::polar(0.5 * rho, std::numbers::pi * a / 2.0));
    for (int m = 1; m <= grid; ++m) {
        const double t = rho * m / (grid + 1.0);
        for (int ib = 0; ib < nbeta; ++ib) {
            const double beta = 0.5 * std::numbers::pi * ib / (nbeta - 1.0);
            for (int p1 = 0; p1 < grid; ++p1)
                for (int p2 = 0; p2 < grid; ++p2)
                    for (const Complex& z3 : third) {
                        Point z(3);
                        z << std::polar(t * std::cos(beta), 2.0 * std::numbers::pi * p1 / grid),
                            std::polar(t * std::sin(beta), 2.0 * std::numbers::pi * p2 / grid), z3;
                        const double a = base_norm(z);
                        if (!(a > 0.0)) throw std::domain_error("grid point with vanishing projection");
                        const double ratio = field(z).norm() / std::pow(a, k);
                        b.c_low = std::min(b.c_low, ratio);
                        b.c_high = std::max(b.c_high, ratio);
                        ++b.points;
                    }
        }
    }
    b.constant = b.c_low > 0.0 ? std::max(1.0 / b.c_low, b.c_high) : std::numeric_limits<double>::infinity();
    return b;
}

}  // namespace foliation
