#include "foliation/cone.hpp"

#include <Eigen/SVD>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace foliation {

namespace {

// direction q - p with log-spread magnitudes so near-axis directions are represented; the spread
// widens with the scale because higher-order terms shrink like powers of r
Point spread_offset(Rng& rng, int n, double decades)
{
    CVector w(n);
    for (int j = 0; j < n; ++j) w(j) = std::pow(10.0, -decades * uniform01(rng)) * random_phase(rng);
    return w / w.norm();
}

struct Bloch {
    double x, y, z;
};

Bloch to_bloch(Complex a, Complex b)
{
    const double na = std::norm(a), nb = std::norm(b), s = na + nb;
    const Complex ab = std::conj(a) * b;
    return {2.0 * ab.real() / s, 2.0 * ab.imag() / s, (na - nb) / s};
}

double bloch_angle(const Bloch& u, const Bloch& v)
{
    const double d = std::clamp(u.x * v.x + u.y * v.y + u.z * v.z, -1.0, 1.0);
    return std::acos(d);
}

bool cover_sphere2(const std::vector<Bloch>& pts, double eps)
{
    // nodes of a lat/long net; a sample within 1.5 eps (Bloch angle) of every node gives eps coverage in line angle
    constexpr double kDelta = 0.025;
    const double chord = 2.0 * std::sin(0.75 * eps);
    auto cell_of = [&](double x) { return static_cast<long long>(std::floor((x + 1.0) / chord)); };
    auto pack = [](long long a, long long b, long long c) { return (a << 42) ^ (b << 21) ^ c; };
    std::unordered_map<long long, std::vector<Bloch>> buckets;
    for (const auto& b : pts) buckets[pack(cell_of(b.x), cell_of(b.y), cell_of(b.z))].push_back(b);
    for (double theta = 0.5 * kDelta; theta < std::numbers::pi; theta += kDelta) {
        const int nphi = std::max(1, static_cast<int>(std::ceil(2.0 * std::numbers::pi * std::sin(theta) / kDelta)));
        for (int k = 0; k < nphi; ++k) {
            const double phi = 2.0 * std::numbers::pi * (k + 0.5) / nphi;
            const Bloch node{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
            const long long cx = cell_of(node.x), cy = cell_of(node.y), cz = cell_of(node.z);
            bool hit = false;
            for (long long dx = -1; dx <= 1 && !hit; ++dx)
                for (long long dy = -1; dy <= 1 && !hit; ++dy)
                    for (long long dz = -1; dz <= 1 && !hit; ++dz) {
                        auto it = buckets.find(pack(cx + dx, cy + dy, cz + dz));
                        if (it == buckets.end()) continue;
                        for (const auto& s : it->second)
                            if (bloch_angle(s, node) <= 1.5 * eps) {
                                hit = true;
                                break;
                            }
                    }
            if (!hit) return false;
        }
    }
    return true;
}

}  // namespace

bool directions_cover_subspace(const std::vector<Tangent>& directions, const CMatrix& basis, double eps, std::uint64_t seed)
{
    const auto d = basis.cols();
    if (d == 0) return false;
    std::vector<CVector> coords;
    coords.reserve(directions.size());
    for (const auto& v : directions) {
        const CVector c = basis.adjoint() * v;
        if (c.norm() > 1e-12) coords.push_back(c / c.norm());
    }
    if (coords.empty()) return false;
    if (d == 1) return true;
    if (d == 2) {
        std::vector<Bloch> pts;
        pts.reserve(coords.size());
        for (const auto& c : coords) pts.push_back(to_bloch(c(0), c(1)));
        return cover_sphere2(pts, eps);
    }
    Rng rng = substream(seed, 0xc07e7);
    for (int t = 0; t < 256; ++t) {
        const CVector probe = random_unit_vector(rng, static_cast<int>(d));
        bool hit = false;
        for (const auto& c : coords)
            if (line_angle(probe, c) <= eps) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

ConeSet estimate_foliation_cone(const PolyVectorField& field, const AnalyticSetModel& set, const Point& p,
                                const ConeOptions& opts)
{
    const int n = field.dim();
    if (p.size() != n) throw std::invalid_argument("base point dimension does not match the field");
    if (set.distance(p) > 1e-8) throw std::invalid_argument(fmt::format("base point {} is not on the singular set", format_point(p)));
    const double dist = field.domain().distance_to_boundary(p);
    if (!(dist > 0.0)) throw std::invalid_argument("base point must be interior to the domain");
    const double r0 = opts.r0 > 0.0 ? std::min(opts.r0, 0.999 * dist) : 0.5 * dist;

    ConeSet cone;
    cone.dim = n;
    Rng rng = substream(opts.seed, 0xf011a7e);
    std::vector<ConeDirection> raw;
    raw.reserve(static_cast<std::size_t>(opts.scales * opts.samples_per_scale));
    for (int k = 0; k < opts.scales; ++k) {
        const double r = r0 * std::ldexp(1.0, -k);
        int used = 0;
        for (int s = 0; s < opts.samples_per_scale; ++s) {
            const Point q = p + r * spread_offset(rng, n, 4.0 + std::max(0.0, -std::log10(r / r0)));
            if (!field.domain().contains(q)) continue;
            const Tangent x = field(q);
            const double nx = x.norm();
            if (!(nx > 0.0) || !std::isfinite(nx)) continue;
            if (set.distance(q) <= 1e-12 * r) continue;
            raw.push_back({canonicalize(x), r});
            ++used;
        }
        if (used == 0) cone.skipped_scales.push_back(k);
        cone.samples_used += static_cast<std::size_t>(used);
    }
    {
        std::vector<Tangent> dirs;
        dirs.reserve(raw.size());
        for (const auto& d : raw) dirs.push_back(d.v);
        for (auto i : dedupe_directions(dirs, opts.dedupe_tol)) cone.directions.push_back(raw[i]);
    }
    if (cone.directions.empty()) return cone;

    // relations: right null vectors of the direction matrix under the bilinear pairing
    const auto m = static_cast<Eigen::Index>(cone.directions.size());
    CMatrix D(m, n);
    for (Eigen::Index i = 0; i < m; ++i) D.row(i) = cone.directions[static_cast<std::size_t>(i)].v.transpose();
    Eigen::JacobiSVD<CMatrix> svd(D, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > opts.relation_tol * std::sqrt(static_cast<double>(m))) continue;
        const Tangent l = svd.matrixV().col(k);
        const double resid = (D * l).cwiseAbs().maxCoeff();
        if (resid <= opts.relation_tol) {
            cone.relations.push_back(canonicalize(l));
            cone.max_relation_residual = std::max(cone.max_relation_residual, resid);
        }
    }
    const CMatrix span = null_space_of_relations(cone.relations, n);
    std::vector<Tangent> dirs;
    dirs.reserve(cone.directions.size());
    for (const auto& d : cone.directions) dirs.push_back(d.v);
    if (directions_cover_subspace(dirs, span, opts.coverage_eps, opts.seed)) cone.span_hint = span;
    return cone;
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::transversal: return "transversal";
    case Verdict::not_transversal: return "not_transversal";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::optional<Witness> find_witness(const PolyVectorField& field, const AnalyticSetModel& set, const Point& q,
                                    const Tangent& w_in, double r0, const TransversalOptions& opts)
{
    const int n = field.dim();
    const Tangent w = w_in / w_in.norm();
    const CMatrix proj = CMatrix::Identity(n, n) - w * w.adjoint();
    Rng rng = substream(opts.seed, 0x3177e55);
    Witness out;
    out.base = q;
    out.direction = canonicalize(w);
    int consecutive = 0;
    for (int k = 0; k < opts.witness_scales; ++k) {
        const double r = r0 * std::ldexp(1.0, -k);
        std::optional<Point> found;
        for (int seed = 0; seed < 12 && !found; ++seed) {
            Point z = q + r * random_unit_vector(rng, n);
            for (int it = 0; it < 40; ++it) {
                const Tangent resid = proj * field(z);
                if (resid.norm() <= 1e-15 * std::max(1.0, field(z).norm())) break;
                const CMatrix J = proj * field.jacobian_matrix(z);
                const CVector step = J.completeOrthogonalDecomposition().solve(resid);
                if (!step.allFinite()) break;
                z -= step;
            }
            if (!field.domain().contains(z)) continue;
            const Tangent x = field(z);
            if (!(x.norm() > 0.0)) continue;
            if ((z - q).norm() > 2.0 * r) continue;
            if (set.distance(z) < 0.05 * r) continue;
            if (line_angle(x, w) > opts.witness_angle) continue;
            found = z;
        }
        if (found) {
            ++consecutive;
            out.approach.push_back(*found);
            const Tangent x = field(*found);
            out.foliation_direction = canonicalize(x);
            out.angle = line_angle(x, w);
        } else {
            consecutive = 0;
            out.approach.clear();
        }
    }
    if (consecutive >= 3) return out;
    return std::nullopt;
}

TransversalityVerdict is_transversal_type(const PolyVectorField& field, const AnalyticSetModel& set, const Point& p,
                                          const TransversalOptions& opts)
{
    if (set.empty()) throw std::invalid_argument("singular set model is empty");
    if (set.distance(p) > 1e-8) throw std::invalid_argument(fmt::format("point {} is not on the singular set", format_point(p)));
    const Polydisc& dom = field.domain();
    const double dist = dom.distance_to_boundary(p);
    double rho = opts.nbhd_radius > 0.0 ? opts.nbhd_radius : 0.25 * dom.min_radius();
    rho = std::min(rho, 0.999 * dist);

    TransversalityVerdict out;
    Rng rng = substream(opts.seed, 0x7a25);
    ConeOptions copts;
    copts.scales = opts.cone_scales;
    copts.samples_per_scale = opts.cone_samples_per_scale;
    copts.seed = opts.seed;
    SetConeOptions sopts;
    sopts.seed = opts.seed;

    bool witness_tried = false;
    for (int level = 0; level < opts.levels; ++level, rho *= 0.5) {
        const Polydisc U(p, RVector::Constant(field.dim(), rho));
        out.neighborhood = U;
        std::vector<Point> qs{p};
        for (const auto& q : set.sample_in(U, opts.set_samples_per_piece, rng))
            if (set.distance(q) <= 1e-8) qs.push_back(q);
        if (qs.empty()) throw std::invalid_argument("no singular points in the neighbourhood");
        double min_angle = std::numbers::pi / 2.0;
        double angle_at_p = min_angle;
        ConeSet fcone_p, scone_p;
        for (std::size_t i = 0; i < qs.size(); ++i) {
            const Point& q = qs[i];
            const double dq = dom.distance_to_boundary(q);
            copts.r0 = std::min(0.5 * dq, rho);
            sopts.r0 = std::min(0.25 * dq, rho);
            ConeSet fc = estimate_foliation_cone(field, set, q, copts);
            ConeSet sc = tangent_cone_of_set(set, q, sopts);
            const double a = cone_angle(fc, sc);
            min_angle = std::min(min_angle, a);
            if (i == 0) {
                angle_at_p = a;
                fcone_p = std::move(fc);
                scone_p = std::move(sc);
            }
        }
        out.points_checked += static_cast<int>(qs.size());
        out.min_angle = min_angle;
        if (min_angle >= opts.theta_min) {
            out.verdict = Verdict::transversal;
            return out;
        }
        if (!witness_tried && angle_at_p < opts.theta_min) {
            witness_tried = true;
            // candidate shared directions, most promising first
            std::vector<std::pair<double, Tangent>> cands;
            for (const auto& d : scone_p.directions) cands.emplace_back(fcone_p.angle_to(d.v), d.v);
            std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            const double r0 = std::min(0.5 * dist, 0.25 * dom.min_radius());
            for (const auto& [ang, w] : cands) {
                if (ang > opts.theta_min) break;
                if (auto wit = find_witness(field, set, p, w, r0, opts)) {
                    out.verdict = Verdict::not_transversal;
                    out.witness = std::move(wit);
                    out.min_angle = std::min(out.min_angle, out.witness->angle);
                    return out;
                }
            }
        }
    }
    out.verdict = Verdict::inconclusive;
    return out;
}

}  // namespace foliation
