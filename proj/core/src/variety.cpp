#include "foliation/variety.hpp"

#include <Eigen/SVD>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

namespace foliation {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

}  // namespace

// ------------------------------------------------------------------ directions

Tangent canonicalize(const Tangent& v)
{
    const double nrm = v.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw std::invalid_argument("cannot canonicalize a zero or non-finite vector");
    Tangent u = v / nrm;
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        if (u(j) != Complex(0.0)) {
            u *= std::conj(u(j)) / std::abs(u(j));
            u(j) = Complex(u(j).real(), 0.0);
            break;
        }
    }
    return u;
}

double line_angle(const Tangent& u, const Tangent& v)
{
    const Tangent a = u / u.norm(), b = v / v.norm();
    const Complex ip = a.dot(b);  // conjugates a
    const double perp = (b - ip * a).norm();
    return std::atan2(perp, std::abs(ip));
}

double angle_to_subspace(const Tangent& v, const CMatrix& basis)
{
    if (basis.cols() == 0) return kHalfPi;
    const Tangent u = v / v.norm();
    const Tangent proj = basis * (basis.adjoint() * u);
    return std::atan2((u - proj).norm(), proj.norm());
}

double subspace_angle(const CMatrix& a, const CMatrix& b)
{
    if (a.cols() == 0 || b.cols() == 0) return kHalfPi;
    Eigen::JacobiSVD<CMatrix> svd(a.adjoint() * b, Eigen::ComputeThinV);
    const Tangent w = b * svd.matrixV().col(0);
    return angle_to_subspace(w, a);
}

CMatrix orthonormalize(const CMatrix& span, double rank_tol)
{
    if (span.cols() == 0) return CMatrix(span.rows(), 0);
    Eigen::JacobiSVD<CMatrix> svd(span, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > rank_tol * std::max(1.0, sv(0))) ++r;
    return svd.matrixU().leftCols(r);
}

CMatrix null_space_of_relations(const std::vector<Tangent>& relations, int n)
{
    if (relations.empty()) return CMatrix::Identity(n, n);
    CMatrix L(static_cast<Eigen::Index>(relations.size()), n);
    for (std::size_t i = 0; i < relations.size(); ++i) L.row(static_cast<Eigen::Index>(i)) = relations[i].transpose();
    Eigen::JacobiSVD<CMatrix> svd(L, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > 1e-10 * std::max(1.0, sv(0))) ++r;
    return svd.matrixV().rightCols(n - r);
}

namespace {

struct CellHash {
    std::size_t operator()(const std::vector<long long>& c) const
    {
        std::size_t h = 1469598103934665603ull;
        for (long long x : c) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
        return h;
    }
};

}  // namespace

std::vector<std::size_t> dedupe_directions(const std::vector<Tangent>& unit_directions, double tol)
{
    std::unordered_set<std::vector<long long>, CellHash> seen;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < unit_directions.size(); ++i) {
        const Tangent& u = unit_directions[i];
        Eigen::Index big = 0;
        u.cwiseAbs().maxCoeff(&big);
        // anchor the phase on the dominant component; stable under small perturbations
        const Tangent w = u * (std::conj(u(big)) / std::abs(u(big)));
        std::vector<long long> cell;
        cell.reserve(static_cast<std::size_t>(2 * u.size() + 1));
        cell.push_back(big);
        for (Eigen::Index j = 0; j < u.size(); ++j) {
            cell.push_back(static_cast<long long>(std::floor(w(j).real() / tol)));
            cell.push_back(static_cast<long long>(std::floor(w(j).imag() / tol)));
        }
        if (seen.insert(std::move(cell)).second) keep.push_back(i);
    }
    return keep;
}

double ConeSet::angle_to(const Tangent& v) const
{
    double best = kHalfPi;
    if (span_hint) best = std::min(best, angle_to_subspace(v, *span_hint));
    for (const auto& c : components) best = std::min(best, angle_to_subspace(v, c));
    for (const auto& d : directions) best = std::min(best, line_angle(v, d.v));
    return best;
}

double cone_angle(const ConeSet& a, const ConeSet& b)
{
    if (a.empty() || b.empty()) return kHalfPi;
    auto subspaces = [](const ConeSet& c) {
        std::vector<CMatrix> s = c.components;
        if (c.span_hint) s.push_back(*c.span_hint);
        return s;
    };
    const auto sa = subspaces(a), sb = subspaces(b);
    double best = kHalfPi;
    for (const auto& x : sa)
        for (const auto& y : sb) best = std::min(best, subspace_angle(x, y));
    // directions only matter where no subspace already summarizes them
    const bool use_dirs_a = !a.span_hint, use_dirs_b = !b.span_hint;
    if (use_dirs_a)
        for (const auto& d : a.directions) {
            for (const auto& y : sb) best = std::min(best, angle_to_subspace(d.v, y));
            if (use_dirs_b)
                for (const auto& e : b.directions) best = std::min(best, line_angle(d.v, e.v));
        }
    if (use_dirs_b)
        for (const auto& e : b.directions)
            for (const auto& x : sa) best = std::min(best, angle_to_subspace(e.v, x));
    return best;
}

// -------------------------------------------------------------- analytic sets

int SetPiece::dim() const
{
    if (const auto* l = std::get_if<LinearPiece>(&shape)) return static_cast<int>(l->basis.cols());
    return std::get<ChartPiece>(shape).param_dim;
}

AnalyticSetModel::AnalyticSetModel(int ambient_dim, std::vector<SetPiece> pieces, bool singular_set)
    : n_(ambient_dim), singular_(singular_set), pieces_(std::move(pieces))
{
    if (n_ < 1) throw std::invalid_argument("ambient dimension must be >= 1");
    for (const auto& piece : pieces_) {
        if (const auto* l = std::get_if<LinearPiece>(&piece.shape)) {
            if (l->base.size() != n_ || l->basis.rows() != n_)
                throw std::invalid_argument(fmt::format("piece '{}' has the wrong ambient dimension", piece.label));
        } else {
            const auto& c = std::get<ChartPiece>(piece.shape);
            if (!c.map || !c.derivative || c.param_dim < 0 || !(c.param_radius > 0.0))
                throw std::invalid_argument(fmt::format("chart piece '{}' is incomplete", piece.label));
        }
        if (piece.dim() >= n_)
            throw std::invalid_argument(fmt::format("piece '{}' must have positive codimension", piece.label));
        if (singular_ && piece.dim() > n_ - 2)
            throw std::invalid_argument(fmt::format("singular set piece '{}' must have codimension at least two", piece.label));
    }
}

SetPiece AnalyticSetModel::linear(std::string label, Point base, const std::vector<Tangent>& span)
{
    const auto n = base.size();
    CMatrix m(n, static_cast<Eigen::Index>(span.size()));
    for (std::size_t k = 0; k < span.size(); ++k) {
        if (span[k].size() != n) throw std::invalid_argument("span vector dimension mismatch");
        m.col(static_cast<Eigen::Index>(k)) = span[k];
    }
    return SetPiece{std::move(label), LinearPiece{std::move(base), orthonormalize(m)}};
}

namespace {

// parses "(a,b,c)" starting at pos; entries are constant expressions
Point parse_tuple(std::string_view s, std::size_t& pos)
{
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size() || s[pos] != '(') throw std::invalid_argument(fmt::format("'(' expected in set literal '{}'", s));
    const auto close = s.find(')', pos);
    if (close == std::string_view::npos) throw std::invalid_argument(fmt::format("unterminated tuple in '{}'", s));
    std::vector<Complex> vals;
    std::string_view body = s.substr(pos + 1, close - pos - 1);
    std::size_t start = 0;
    for (;;) {
        const auto k = body.find(',', start);
        const auto item = body.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start);
        auto c = parse_expression(item, 0).constant_value();
        if (!c) throw std::invalid_argument(fmt::format("tuple entry '{}' is not constant", item));
        vals.push_back(*c);
        if (k == std::string_view::npos) break;
        start = k + 1;
    }
    pos = close + 1;
    Point p(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t j = 0; j < vals.size(); ++j) p(static_cast<Eigen::Index>(j)) = vals[j];
    return p;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

SetPiece parse_piece(std::string_view text, int n, int index)
{
    text = trim(text);
    if (text.substr(0, 6) != "linear")
        throw std::invalid_argument(fmt::format("unsupported set piece '{}': only 'linear' pieces parse from text", text));
    std::size_t pos = 6;
    std::optional<Point> base;
    std::vector<Tangent> span;
    std::string label = fmt::format("piece{}", index);
    while (true) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos >= text.size()) break;
        const auto eq = text.find('=', pos);
        if (eq == std::string_view::npos) throw std::invalid_argument(fmt::format("key=value expected in '{}'", text));
        const std::string key(trim(text.substr(pos, eq - pos)));
        pos = eq + 1;
        if (key == "base") {
            base = parse_tuple(text, pos);
        } else if (key == "span") {
            span.push_back(parse_tuple(text, pos));
            while (pos < text.size() && text[pos] == ',') {
                ++pos;
                span.push_back(parse_tuple(text, pos));
            }
        } else if (key == "label") {
            std::size_t end = pos;
            while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
            label = std::string(text.substr(pos, end - pos));
            pos = end;
        } else {
            throw std::invalid_argument(fmt::format("unknown set piece key '{}'", key));
        }
    }
    if (!base) throw std::invalid_argument(fmt::format("set piece '{}' lacks base=", text));
    if (base->size() != n) throw std::invalid_argument(fmt::format("set piece '{}' has wrong dimension", text));
    return AnalyticSetModel::linear(label, *base, span);
}

}  // namespace

Point parse_point(std::string_view text)
{
    std::size_t pos = 0;
    Point p = parse_tuple(text, pos);
    if (!trim(text.substr(pos)).empty()) throw std::invalid_argument(fmt::format("trailing text after point '{}'", text));
    return p;
}


AnalyticSetModel AnalyticSetModel::parse(std::string_view literal, int ambient_dim, bool singular_set)
{
    std::vector<SetPiece> pieces;
    std::size_t start = 0;
    int index = 0;
    for (;;) {
        const auto k = literal.find(';', start);
        const auto part = literal.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start);
        if (!trim(part).empty()) pieces.push_back(parse_piece(part, ambient_dim, index++));
        if (k == std::string_view::npos) break;
        start = k + 1;
    }
    return AnalyticSetModel(ambient_dim, std::move(pieces), singular_set);
}

SetProjection AnalyticSetModel::project(int piece, const Point& p) const
{
    const SetPiece& sp = pieces_.at(static_cast<std::size_t>(piece));
    SetProjection out;
    out.piece = piece;
    if (const auto* l = std::get_if<LinearPiece>(&sp.shape)) {
        out.nearest = l->base + l->basis * (l->basis.adjoint() * (p - l->base));
        out.distance = (p - out.nearest).norm();
        return out;
    }
    const auto& c = std::get<ChartPiece>(sp.shape);
    const int k = c.param_dim;
    std::vector<CVector> seeds;
    if (k == 1) {
        seeds.push_back(CVector::Zero(1));
        for (int a = 1; a <= 8; ++a)
            for (int b = 0; b < 16; ++b)
                seeds.push_back(CVector::Constant(1, std::polar(c.param_radius * a / 9.0, 2.0 * std::numbers::pi * b / 16.0)));
    } else {
        Rng rng(0xC0FFEEu);
        seeds.push_back(CVector::Zero(k));
        for (int s = 0; s < 128; ++s) {
            CVector u(k);
            for (int j = 0; j < k; ++j) u(j) = random_in_disc(rng, c.param_radius);
            seeds.push_back(u);
        }
    }
    double best = std::numeric_limits<double>::infinity();
    for (CVector u : seeds) {
        for (int it = 0; it < 40; ++it) {
            const Point r = p - c.map(u);
            const CMatrix J = c.derivative(u);
            const CVector step = J.completeOrthogonalDecomposition().solve(r);
            u += step;
            for (int j = 0; j < k; ++j)
                if (std::abs(u(j)) > 0.999999 * c.param_radius) u(j) *= 0.999999 * c.param_radius / std::abs(u(j));
            if (step.norm() < 1e-15) break;
        }
        const Point q = c.map(u);
        const double d = (p - q).norm();
        if (d < best) {
            best = d;
            out.nearest = q;
            out.param = u;
            out.distance = d;
        }
    }
    return out;
}

SetProjection AnalyticSetModel::nearest(const Point& p) const
{
    SetProjection best;
    best.distance = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(pieces_.size()); ++i) {
        auto pr = project(i, p);
        if (pr.distance < best.distance) best = std::move(pr);
    }
    return best;
}

double AnalyticSetModel::distance(const Point& p) const { return nearest(p).distance; }

std::vector<int> AnalyticSetModel::pieces_through(const Point& p, double tol) const
{
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(pieces_.size()); ++i)
        if (project(i, p).distance <= tol) out.push_back(i);
    return out;
}

CMatrix AnalyticSetModel::tangent_space(int piece, const Point& q) const
{
    const SetPiece& sp = pieces_.at(static_cast<std::size_t>(piece));
    if (const auto* l = std::get_if<LinearPiece>(&sp.shape)) return l->basis;
    const auto& c = std::get<ChartPiece>(sp.shape);
    return orthonormalize(c.derivative(project(piece, q).param));
}

std::optional<Point> AnalyticSetModel::sample_near(int piece, const Point& near, double radius, Rng& rng) const
{
    const SetPiece& sp = pieces_.at(static_cast<std::size_t>(piece));
    if (sp.dim() == 0) return std::nullopt;
    if (const auto* l = std::get_if<LinearPiece>(&sp.shape)) {
        const CVector coef = random_unit_vector(rng, static_cast<int>(l->basis.cols()));
        return Point(near + radius * (l->basis * coef));
    }
    const auto& c = std::get<ChartPiece>(sp.shape);
    const CVector u0 = project(piece, near).param;
    const CMatrix J = c.derivative(u0);
    for (int attempt = 0; attempt < 32; ++attempt) {
        const CVector d = random_unit_vector(rng, c.param_dim);
        const double speed = (J * d).norm();
        if (!(speed > 0.0)) continue;
        const CVector u = u0 + (radius / speed) * d;
        bool inside = true;
        for (int j = 0; j < c.param_dim; ++j) inside = inside && std::abs(u(j)) < c.param_radius;
        if (inside) return c.map(u);
    }
    return std::nullopt;
}

std::vector<Point> AnalyticSetModel::sample_in(const Polydisc& region, int per_piece, Rng& rng) const
{
    std::vector<Point> out;
    for (int i = 0; i < static_cast<int>(pieces_.size()); ++i) {
        const SetPiece& sp = pieces_[static_cast<std::size_t>(i)];
        if (const auto* l = std::get_if<LinearPiece>(&sp.shape)) {
            const Point anchor = project(i, region.center()).nearest;
            if (l->basis.cols() == 0) {
                if (region.contains(anchor)) out.push_back(anchor);
                continue;
            }
            int got = 0;
            for (int attempt = 0; attempt < 50 * per_piece && got < per_piece; ++attempt) {
                const CVector coef = random_unit_vector(rng, static_cast<int>(l->basis.cols()));
                const double r = region.radii().maxCoeff() * std::sqrt(uniform01(rng));
                const Point q = anchor + r * (l->basis * coef);
                if (region.contains(q)) {
                    out.push_back(q);
                    ++got;
                }
            }
        } else {
            const auto& c = std::get<ChartPiece>(sp.shape);
            int got = 0;
            for (int attempt = 0; attempt < 50 * per_piece && got < per_piece; ++attempt) {
                CVector u(c.param_dim);
                for (int j = 0; j < c.param_dim; ++j) u(j) = random_in_disc(rng, c.param_radius);
                const Point q = c.map(u);
                if (region.contains(q)) {
                    out.push_back(q);
                    ++got;
                }
            }
        }
    }
    return out;
}

void AnalyticSetModel::validate_inside(const Polydisc& domain) const
{
    for (int i = 0; i < static_cast<int>(pieces_.size()); ++i) {
        const Point q = project(i, domain.center()).nearest;
        if (!domain.contains(q))
            throw std::invalid_argument(fmt::format("set piece '{}' does not meet the domain", pieces_[static_cast<std::size_t>(i)].label));
    }
}

std::string AnalyticSetModel::to_string() const
{
    std::string out;
    for (const auto& p : pieces_) {
        if (!out.empty()) out += " ; ";
        if (const auto* l = std::get_if<LinearPiece>(&p.shape)) {
            out += fmt::format("linear base={}", format_point(l->base));
            for (Eigen::Index k = 0; k < l->basis.cols(); ++k)
                out += (k ? "," : " span=") + format_point(canonicalize(l->basis.col(k)));
            out += " label=" + p.label;
        } else {
            out += "chart label=" + p.label;
        }
    }
    return out;
}

// ------------------------------------------------------------------ singular locus

SingularLocus singular_locus(const PolyVectorField& field, int grid_density, const SingularLocusOptions& opts)
{
    if (grid_density < 2) throw std::invalid_argument("grid density must be at least 2 per real dimension");
    const int n = field.dim();
    const Polydisc& dom = field.domain();
    // offsets of a grid on the unit disc
    std::vector<Complex> disc_grid;
    for (int a = 0; a < grid_density; ++a)
        for (int b = 0; b < grid_density; ++b) {
            const Complex w(-1.0 + (2.0 * a + 1.0) / grid_density, -1.0 + (2.0 * b + 1.0) / grid_density);
            if (std::abs(w) < 1.0) disc_grid.push_back(w);
        }
    SingularLocus out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    const std::size_t m = disc_grid.size();
    for (;;) {
        Point z(n);
        for (int j = 0; j < n; ++j) z(j) = dom.center()(j) + dom.radii()(j) * disc_grid[idx[static_cast<std::size_t>(j)]];
        ++out.seeds;
        bool converged = false;
        for (int it = 0; it < opts.max_iterations; ++it) {
            const Tangent r = field(z);
            // once the residual is small keep polishing: on non-reduced crossings a small residual
            // still allows a sizeable distance to the zero set
            converged = r.norm() <= opts.residual_tol;
            const CMatrix J = field.jacobian_matrix(z);
            const CVector step = J.completeOrthogonalDecomposition().solve(r);
            if (!step.allFinite()) break;
            if (converged && step.norm() <= 1e-14) break;
            z -= step;
            if (!dom.contains_closed(z, dom.min_radius())) break;  // wandered far away
        }
        if (converged && field(z).norm() <= opts.residual_tol && dom.contains(z)) {
            bool dup = false;
            for (const auto& q : out.points)
                if ((q - z).norm() <= opts.dedupe_tol) {
                    dup = true;
                    break;
                }
            if (!dup) out.points.push_back(z);
        } else {
            ++out.dropped;
        }
        int j = 0;
        while (j < n && ++idx[static_cast<std::size_t>(j)] == m) idx[static_cast<std::size_t>(j++)] = 0;
        if (j == n) break;
    }
    return out;
}

// ------------------------------------------------------------------ set cone

namespace {

bool same_subspace(const CMatrix& a, const CMatrix& b, double tol)
{
    if (a.cols() != b.cols()) return false;
    if (a.cols() == 0) return true;
    Eigen::JacobiSVD<CMatrix> svd(a.adjoint() * b);
    const double smin = std::min(1.0, svd.singularValues().minCoeff());
    return std::acos(smin) <= tol;
}

void add_component_directions(ConeSet& cone, const CMatrix& comp, double scale, int extra, Rng& rng)
{
    for (Eigen::Index k = 0; k < comp.cols(); ++k) cone.directions.push_back({canonicalize(comp.col(k)), scale});
    if (comp.cols() >= 2)
        for (int s = 0; s < extra; ++s)
            cone.directions.push_back({canonicalize(comp * random_unit_vector(rng, static_cast<int>(comp.cols()))), scale});
}

void dedupe_cone(ConeSet& cone, double tol)
{
    std::vector<Tangent> dirs;
    dirs.reserve(cone.directions.size());
    for (const auto& d : cone.directions) dirs.push_back(d.v);
    std::vector<ConeDirection> kept;
    for (auto i : dedupe_directions(dirs, tol)) kept.push_back(cone.directions[i]);
    cone.directions = std::move(kept);
}

}  // namespace

ConeSet tangent_cone_of_set(const AnalyticSetModel& set, const Point& p, const SetConeOptions& opts)
{
    const auto through = set.pieces_through(p);
    if (through.empty()) throw std::invalid_argument(fmt::format("point {} does not lie on the set", format_point(p)));
    ConeSet cone;
    cone.dim = set.ambient_dim();
    Rng rng = substream(opts.seed, 0x5e7c0e);
    const double r0 = opts.r0 > 0.0 ? opts.r0 : 0.25;

    if (through.size() == 1 && std::holds_alternative<LinearPiece>(set.pieces()[static_cast<std::size_t>(through[0])].shape)) {
        const CMatrix basis = set.tangent_space(through[0], p);
        if (basis.cols() > 0) {
            cone.components.push_back(basis);
            cone.span_hint = basis;
            add_component_directions(cone, basis, 0.0, opts.samples_per_scale, rng);
            dedupe_cone(cone, opts.dedupe_tol);
        }
        return cone;
    }

    const int finest = std::max(0, opts.scales - 3);
    for (int piece : through) {
        if (set.pieces()[static_cast<std::size_t>(piece)].dim() == 0) continue;
        for (int k = finest; k < opts.scales; ++k) {
            const double r = r0 * std::ldexp(1.0, -k);
            for (int s = 0; s < opts.samples_per_scale; ++s) {
                auto q = set.sample_near(piece, p, r, rng);
                if (!q) continue;
                bool regular = true;
                for (int other : through)
                    if (other != piece && set.project(other, *q).distance <= 1e-14) regular = false;
                if (!regular) continue;
                const CMatrix t = set.tangent_space(piece, *q);
                ++cone.samples_used;
                bool known = false;
                for (const auto& c : cone.components) known = known || same_subspace(c, t, opts.dedupe_tol);
                if (!known) {
                    cone.components.push_back(t);
                    add_component_directions(cone, t, r, opts.samples_per_scale, rng);
                }
            }
        }
    }
    dedupe_cone(cone, opts.dedupe_tol);
    if (cone.components.size() == 1) cone.span_hint = cone.components.front();
    return cone;
}

// ------------------------------------------------------------------ invariance

const char* to_string(Invariance v)
{
    switch (v) {
    case Invariance::invariant: return "invariant";
    case Invariance::not_invariant: return "not_invariant";
    case Invariance::inconclusive: return "inconclusive";
    }
    return "?";
}

InvarianceResult is_invariant_hypersurface(const Scalar& f, const PolyVectorField& field, const InvarianceOptions& opts)
{
    const int n = field.dim();
    if (f.nvars() != n) throw std::invalid_argument("hypersurface equation has the wrong number of variables");
    InvarianceResult res;
    const Polynomial* fp = f.polynomial();
    if (fp && fp->is_zero()) throw std::invalid_argument("hypersurface equation is identically zero");

    std::vector<Scalar> grad;
    for (int j = 0; j < n; ++j) grad.push_back(f.derivative(j));

    if (fp && fp->is_monomial() && field.is_polynomial()) {
        Polynomial xf(n);
        for (int i = 0; i < n; ++i) xf = xf + *field.component(i).polynomial() * *grad[static_cast<std::size_t>(i)].polynomial();
        res.exact = true;
        res.verdict = xf.divisible_by_monomial(fp->terms().begin()->first) ? Invariance::invariant : Invariance::not_invariant;
        return res;
    }

    Rng rng = substream(opts.seed, 0x1a7a);
    const Polydisc& dom = field.domain();
    double scale = 1.0;
    if (fp) {
        scale = 1.0 / fp->max_abs_coefficient();
    } else {
        double m = 0.0;
        Rng probe = substream(opts.seed, 0x9e);
        for (int s = 0; s < 64; ++s) m = std::max(m, std::abs(f(random_in_polydisc(probe, dom))));
        if (m > 0.0) scale = 1.0 / m;
    }
    const Polydisc inner = dom.shrunk(0.95);
    const int max_attempts = 20 * opts.samples;
    for (int attempt = 0; attempt < max_attempts && res.points_tested < opts.samples; ++attempt) {
        Point z = random_in_polydisc(rng, inner);
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            const Complex v = f(z) * scale;
            if (std::abs(v) <= 1e-13) {
                ok = true;
                break;
            }
            CVector g(n);
            for (int j = 0; j < n; ++j) g(j) = grad[static_cast<std::size_t>(j)](z) * scale;
            const double g2 = g.squaredNorm();
            if (!(g2 > 1e-300)) break;
            // minimal-norm Newton step for one holomorphic equation
            z -= v * g.conjugate() / g2;
        }
        if (!ok || !dom.contains(z)) continue;
        const Tangent x = field(z);
        Complex xf = 0.0;
        for (int j = 0; j < n; ++j) xf += x(j) * grad[static_cast<std::size_t>(j)](z);
        const double r = std::abs(xf) * scale;
        res.max_residual = std::max(res.max_residual, r);
        ++res.points_tested;
    }
    if (res.points_tested < opts.samples)
        res.verdict = Invariance::inconclusive;
    else
        res.verdict = res.max_residual <= opts.tol ? Invariance::invariant : Invariance::not_invariant;
    return res;
}

}  // namespace foliation
