#include "foliation/scenario.hpp"

#include <fmt/format.h>

#include <cmath>
#include <map>
#include <stdexcept>

namespace foliation {

const char* to_string(CheckKind k)
{
    switch (k) {
    case CheckKind::cone_span: return "cone_span";
    case CheckKind::transversal: return "transversal";
    case CheckKind::eta_sequence: return "eta_sequence";
    case CheckKind::eta_gap: return "eta_gap";
    case CheckKind::scan: return "scan";
    case CheckKind::completeness: return "completeness";
    case CheckKind::invariant: return "invariant";
    case CheckKind::singular_locus: return "singular_locus";
    case CheckKind::charts: return "charts";
    case CheckKind::ex32_bounds: return "ex32_bounds";
    case CheckKind::convergence: return "convergence";
    }
    return "?";
}

const PointSequence& Scenario::sequence(const std::string& sid) const
{
    for (const auto& s : sequences)
        if (s.id == sid) return s;
    throw std::invalid_argument(fmt::format("scenario {} has no sequence '{}'", id, sid));
}

const ChartFamily& Scenario::family(const std::string& fid) const
{
    for (const auto& f : families)
        if (f.id == fid) return f;
    throw std::invalid_argument(fmt::format("scenario {} has no leaf family '{}'", id, fid));
}

namespace {

constexpr double kZero = 1e-15;

Point P(Complex a, Complex b) { return make_point({a, b}); }
Point P(Complex a, Complex b, Complex c) { return make_point({a, b, c}); }
Tangent axis(int n, int j)
{
    Tangent t = Tangent::Zero(n);
    t(j) = 1.0;
    return t;
}

SetPiece line_piece(const std::string& label, int n, int j) { return AnalyticSetModel::linear(label, Point::Zero(n), {axis(n, j)}); }

// Leaves that are coordinate lines along `dir_axis`: the coordinate `param_axis` is the member
// parameter c, every other coordinate vanishes. A punctured model loses the point on the other axes.
struct CoordinateLines {
    std::string id;
    std::string description;
    int n = 3;
    int dir_axis = 0;
    int param_axis = -1;
    bool param_nonzero = false;
    ModelKind kind = ModelKind::punctured_disc;
    RVector radii;
};

ChartFamily coordinate_lines(const CoordinateLines& spec)
{
    const CoordinateLines s = spec;
    const double r = s.radii(s.dir_axis);
    const ModelDomain model = s.kind == ModelKind::disc ? ModelDomain::disc(r) : ModelDomain::punctured(r);

    auto member_chart = [s, model](Complex c, Complex zeta) -> std::optional<LeafChart> {
        if (s.param_nonzero && std::abs(c) <= kZero) return std::nullopt;
        Point base = Point::Zero(s.n);
        if (s.param_axis >= 0) {
            if (!(std::abs(c) < s.radii(s.param_axis))) return std::nullopt;
            base(s.param_axis) = c;
        }
        const std::string id = s.param_axis >= 0 ? fmt::format("{}(c={:.6g}{:+.6g}i)", s.id, c.real(), c.imag()) : s.id;
        return affine_line_chart(id, base, axis(s.n, s.dir_axis), model, zeta);
    };

    ChartFamily f;
    f.id = s.id;
    f.description = s.description;
    f.member = member_chart;
    if (s.param_axis >= 0) {
        f.param_min = -0.9 * s.radii(s.param_axis);
        f.param_max = 0.9 * s.radii(s.param_axis);
    } else {
        f.param_min = f.param_max = 0.0;
    }
    f.classify = [s, model, member_chart](const Point& p) -> std::optional<LeafChart> {
        if (p.size() != s.n) return std::nullopt;
        for (int k = 0; k < s.n; ++k)
            if (k != s.dir_axis && k != s.param_axis && std::abs(p(k)) > kZero) return std::nullopt;
        const Complex zeta = p(s.dir_axis);
        if (!model.contains(zeta)) return std::nullopt;
        return member_chart(s.param_axis >= 0 ? p(s.param_axis) : Complex(0.0), zeta);
    };
    f.approach = [s, model, member_chart](const Point& e, double delta) -> std::optional<ChartApproach> {
        for (int k = 0; k < s.n; ++k)
            if (k != s.dir_axis && k != s.param_axis && std::abs(e(k)) > 1e-12) return std::nullopt;
        const Complex ze = e(s.dir_axis);
        if (!(std::abs(ze) < model.radius)) return std::nullopt;
        const Complex ce = s.param_axis >= 0 ? e(s.param_axis) : Complex(0.0);
        const bool param_ok = !s.param_nonzero || std::abs(ce) > 1e-12;
        const bool at_puncture = model.kind == ModelKind::punctured_disc && std::abs(ze - model.puncture) <= 1e-12;
        if (param_ok && !at_puncture) return std::nullopt;  // e would be a regular point of a member
        const Complex c = param_ok ? ce : ce + delta;
        const Complex zeta = at_puncture ? model.puncture + delta : ze;
        auto chart = member_chart(c, zeta);
        if (!chart || !chart->model.contains(zeta)) return std::nullopt;
        return ChartApproach{*chart, at_puncture};
    };
    return f;
}

// A single punctured line through the origin with direction `dir`, optionally shifted by c along `param_axis`.
ChartFamily punctured_line(std::string id, std::string description, int n, Tangent dir, double radius, int param_axis)
{
    const ModelDomain model = ModelDomain::punctured(radius);
    auto member_chart = [id, n, dir, model, param_axis](Complex c, Complex zeta) -> std::optional<LeafChart> {
        Point base = Point::Zero(n);
        std::string cid = id;
        if (param_axis >= 0) {
            base(param_axis) = c;
            cid = fmt::format("{}(c={:.6g}{:+.6g}i)", id, c.real(), c.imag());
        }
        return affine_line_chart(cid, base, dir, model, zeta);
    };
    ChartFamily f;
    f.id = id;
    f.description = std::move(description);
    f.member = member_chart;
    if (param_axis >= 0) {
        f.param_min = -0.9;
        f.param_max = 0.9;
    } else {
        f.param_min = f.param_max = 0.0;
    }
    f.classify = [n, dir, param_axis, model, member_chart](const Point& p) -> std::optional<LeafChart> {
        if (p.size() != n) return std::nullopt;
        Point base = Point::Zero(n);
        if (param_axis >= 0) base(param_axis) = p(param_axis);
        const auto zeta = affine_line_param(base, dir, p, 1e-14);
        if (!zeta || !model.contains(*zeta) || std::abs(*zeta) <= kZero) return std::nullopt;
        return member_chart(param_axis >= 0 ? p(param_axis) : Complex(0.0), *zeta);
    };
    f.approach = [n, param_axis, member_chart](const Point& e, double delta) -> std::optional<ChartApproach> {
        for (int k = 0; k < n; ++k)
            if (k != param_axis && std::abs(e(k)) > 1e-12) return std::nullopt;
        auto chart = member_chart(param_axis >= 0 ? e(param_axis) : Complex(0.0), delta);
        if (!chart) return std::nullopt;
        return ChartApproach{*chart, true};
    };
    return f;
}

PointSequence seq(std::string id, std::function<Point(int)> at, Point target, int first = 1, int horizon = 10000)
{
    PointSequence s;
    s.id = std::move(id);
    s.at = std::move(at);
    s.target = std::move(target);
    s.first = first;
    s.horizon = horizon;
    return s;
}

ProbeRay ray(std::string id, Point target, Tangent dir, double start = 0.5)
{
    ProbeRay r;
    r.id = std::move(id);
    r.target = target;
    r.at = [target, dir](double d) -> Point { return target + d * dir; };
    r.derivative = [dir](double) -> Tangent { return dir; };
    r.delta_start = start;
    return r;
}

Expectation expect(std::string id, CheckKind kind, std::string citation)
{
    Expectation e;
    e.id = std::move(id);
    e.kind = kind;
    e.citation = std::move(citation);
    return e;
}

Expectation invariant(const std::string& f, const std::string& why)
{
    Expectation e = expect("invariant " + f + "=0", CheckKind::invariant, why);
    e.literal = f;
    e.verdict = "invariant";
    return e;
}

Expectation verdict_at(std::string id, std::vector<Point> pts, std::string verdict, std::optional<Tangent> witness, std::string why)
{
    Expectation e = expect(std::move(id), CheckKind::transversal, std::move(why));
    e.points = std::move(pts);
    e.verdict = std::move(verdict);
    e.witness = std::move(witness);
    return e;
}

Expectation span_at(std::string id, std::vector<Point> pts, std::vector<Tangent> span, std::vector<Tangent> rel, std::string why)
{
    Expectation e = expect(std::move(id), CheckKind::cone_span, std::move(why));
    e.points = std::move(pts);
    e.full_span = span.empty();
    e.span = std::move(span);
    e.relations = std::move(rel);
    return e;
}

Expectation sequence_limit(std::string sid, double value, double tol, std::string why)
{
    Expectation e = expect("limit of eta along " + sid, CheckKind::eta_sequence, std::move(why));
    e.sequence = std::move(sid);
    e.expected = value;
    e.tolerance = tol;
    return e;
}

Expectation gap(std::string a, std::string b, std::string verdict, double value, std::string why)
{
    Expectation e = expect("eta gap " + a + " vs " + b, CheckKind::eta_gap, std::move(why));
    e.sequence = std::move(a);
    e.other_sequence = std::move(b);
    e.verdict = std::move(verdict);  // at_least or at_most
    e.expected = value;
    return e;
}

Expectation simple(std::string id, CheckKind kind, std::string verdict, std::string why)
{
    Expectation e = expect(std::move(id), kind, std::move(why));
    e.verdict = std::move(verdict);
    return e;
}

const Tangent e1 = axis(3, 0), e2 = axis(3, 1), e3 = axis(3, 2);

Scenario base_scenario(std::string id, std::string title, PolyVectorField field, AnalyticSetModel set)
{
    return Scenario{std::move(id), std::move(title), std::move(field), std::move(set), {}, {}, {}, {}, false, std::nullopt};
}

AnalyticSetModel origin_set(int n) { return AnalyticSetModel(n, {AnalyticSetModel::linear("origin", Point::Zero(n), {})}, true); }

Scenario planar(std::string id, std::string title, PolyVectorField field, std::string why_span)
{
    Scenario s = base_scenario(std::move(id), std::move(title), std::move(field), origin_set(2));
    s.transversal = true;
    s.expectations.push_back(span_at("cone at the origin fills C^2", {P(0, 0)}, {}, {}, std::move(why_span)));
    s.expectations.push_back(simple("numerical zeros on the model", CheckKind::singular_locus, "match",
                                    "isolated singular point at the origin of the bidisc"));
    return s;
}

Scenario e13_1()
{
    return planar("E1.3.1", "linearizable node x dx + 2i y dy", linearizable_form(Complex(0.0, 2.0)),
                  "E1.3 linearizable case: scaled points reach every direction, so the cone is all of C^2");
}

Scenario e13_2()
{
    Polynomial f(2);
    f.add_term({1, 1}, 1.0);
    return planar("E1.3.2", "resonant saddle x dx - y(1+xy) dy", resonant_negative_form(-1.0, f),
                  "E1.3 negative real index: the higher terms do not restrict limit directions, cone is C^2");
}

Scenario e13_3()
{
    return planar("E1.3.3", "Poincare-Dulac x dx + (2y + x^2) dy", poincare_dulac_form(2, 1.0),
                  "E1.3 resonant integer index: directions still fill C^2");
}

Scenario e14()
{
    const Polydisc M = Polydisc::unit(3);
    Scenario s = base_scenario("E1.4", "x dx + (2+z) y dy on the unit tridisc", PolyVectorField::parse("x ; (2+z)*y ; 0", M),
                               AnalyticSetModel(3, {line_piece("z-axis", 3, 2)}, true));
    s.transversal = true;
    std::vector<Point> pts;
    for (double c : {-0.5, 0.0, 0.4}) pts.push_back(P(0, 0, c));
    s.expectations.push_back(span_at("cone is the xy-plane", pts, {e1, e2}, {e3},
                                     "E1.4: z never moves, so limit directions lose the third component; each level "
                                     "plane contributes all of its directions"));
    s.expectations.push_back(verdict_at("transversal along the z-axis", {P(0, 0, 0.3), P(0, 0, -0.6)}, "transversal", std::nullopt,
                                        "E1.4: the xy-plane meets the z-axis tangent line only at zero"));
    s.expectations.push_back(simple("numerical zeros on the model", CheckKind::singular_locus, "match", "E1.4: zeros form the z-axis"));
    return s;
}

AnalyticSetModel yz_axes() { return AnalyticSetModel(3, {line_piece("y-axis", 3, 1), line_piece("z-axis", 3, 2)}, true); }

Scenario e15()
{
    const Polydisc M = Polydisc::unit(3);
    Scenario s = base_scenario("E1.5", "x dx + zy dy + zy dz", PolyVectorField::parse("x ; z*y ; z*y", M), yz_axes());
    s.transversal = true;
    const Tangent d = make_point({0, 1, 1});
    const std::vector<Point> classes{P(0, 0.5, 0), P(0, 0, 0.5), P(0, 0, 0)};
    s.expectations.push_back(span_at("cone is spanned by e1 and (0,1,1)", classes, {e1, d}, {make_point({0, 1, -1})},
                                     "E1.5: y and z move at the same rate, so every limit direction has equal second and "
                                     "third components"));
    s.expectations.push_back(verdict_at("transversal at the three base-point classes", classes, "transversal", std::nullopt,
                                        "E1.5: the cone plane avoids both coordinate axes of the singular set"));
    s.expectations.push_back(simple("numerical zeros on the model", CheckKind::singular_locus, "match", "E1.5: zeros are the y- and z-axes"));
    return s;
}

Scenario e114()
{
    const Polydisc M = Polydisc::unit(3);
    Scenario s = base_scenario("E1.14", "x dx + exp(z) y dy", PolyVectorField::parse("x ; exp(z)*y ; 0", M),
                               AnalyticSetModel(3, {line_piece("z-axis", 3, 2)}, true));
    s.transversal = true;
    s.families.push_back(coordinate_lines({"x-lines", "(xi, 0, c), punctured at xi = 0", 3, 0, 2, false, ModelKind::punctured_disc, M.radii()}));
    s.families.push_back(coordinate_lines({"y-lines", "(0, xi, c), punctured at xi = 0", 3, 1, 2, false, ModelKind::punctured_disc, M.radii()}));
    s.rays.push_back(ray("x-separatrix to (0,0,0.4)", P(0, 0, 0.4), e1));
    s.rays.push_back(ray("y-separatrix to (0,0,-0.4)", P(0, 0, -0.4), e2));
    s.expectations.push_back(verdict_at("transversal along the z-axis", {P(0, 0, 0.2)}, "transversal", std::nullopt,
                                        "E1.14: same cone structure as E1.4 since exp(z) never vanishes"));
    s.expectations.push_back(invariant("x", "E1.14: the plane x=0 is a union of leaves"));
    s.expectations.push_back(invariant("y", "E1.14: the plane y=0 is a union of leaves"));
    s.expectations.push_back(simple("registered charts", CheckKind::charts, "valid", "E1.14: coordinate lines in the invariant planes are leaves"));
    s.expectations.push_back(simple("continuous extension, scan", CheckKind::scan, "zero_flags",
                                    "E1.14: invariant planes cut out the singular set, so eta extends continuously to M"));
    s.expectations.push_back(simple("separatrix rays complete", CheckKind::completeness, "complete",
                                    "E1.14: punctured-disc leaves carry infinite Poincare length at the puncture"));
    return s;
}

Scenario e115()
{
    const Polydisc M = Polydisc::unit(3);
    Scenario s = base_scenario("E1.15", "z dx + xy dy + xy dz", PolyVectorField::parse("z ; x*y ; x*y", M),
                               AnalyticSetModel(3, {line_piece("x-axis", 3, 0), line_piece("y-axis", 3, 1)}, true));
    s.transversal = false;
    s.families.push_back(coordinate_lines({"H-lines", "(xi, 0, c) with c != 0, whole discs", 3, 0, 2, true, ModelKind::disc, M.radii()}));

    ChartFamily g;
    g.id = "g-leaf";
    g.description = "w -> (w, w^2/2, w^2/2), punctured at w = 0";
    auto g_chart = [](Complex w) {
        LeafChart c;
        c.id = "g-leaf";
        c.model = ModelDomain::punctured(1.0);
        c.map = [](Complex z) -> Point { return P(z, 0.5 * z * z, 0.5 * z * z); };
        c.derivative = [](Complex z) -> Tangent { return make_point({1.0, z, z}); };
        c.base_param = w;
        c.restrictor = [](const Polydisc& U, Complex ref) -> std::optional<ModelDomain> {
            if (U.center().norm() > 1e-15) return std::nullopt;
            const auto& r = U.radii();
            const double rad = std::min({r(0), std::sqrt(2.0 * r(1)), std::sqrt(2.0 * r(2)), 1.0});
            ModelDomain m = ModelDomain::punctured(rad);
            if (!m.contains(ref)) return std::nullopt;
            return m;
        };
        return c;
    };
    g.member = [g_chart](Complex, Complex w) -> std::optional<LeafChart> { return g_chart(w); };
    g.param_min = g.param_max = 0.0;
    g.classify = [g_chart](const Point& p) -> std::optional<LeafChart> {
        const Complex w = p(0);
        if (std::abs(w) <= kZero || !(std::abs(w) < 1.0)) return std::nullopt;
        const Complex h = 0.5 * w * w;
        if (std::abs(p(1) - h) > 1e-14 || std::abs(p(2) - h) > 1e-14) return std::nullopt;
        return g_chart(w);
    };
    g.approach = [g_chart](const Point& e, double delta) -> std::optional<ChartApproach> {
        if (e.norm() > 1e-12) return std::nullopt;
        return ChartApproach{g_chart(delta), true};
    };
    s.families.push_back(std::move(g));

    s.sequences.push_back(seq("p_n", [](int n) { return P(0, 0, 1.0 / n); }, P(0, 0, 0), 2));
    s.sequences.push_back(seq("q_n", [](int n) {
        const double w = 0.5 / n;
        return P(w, 0.5 * w * w, 0.5 * w * w);
    }, P(0, 0, 0)));
    s.expectations.push_back(verdict_at("not transversal at the origin", {P(0, 0, 0)}, "not_transversal", e1,
                                        "E1.15: e1 is both a limit of leaf directions and tangent to the x-axis"));
    s.expectations.push_back(invariant("y", "E1.15: the plane y=0 is invariant, the field there is z d/dx"));
    s.expectations.push_back(simple("registered charts", CheckKind::charts, "valid",
                                    "E1.15: horizontal lines of y=0 and the curve g are leaves"));
    s.expectations.push_back(sequence_limit("p_n", 1.0, 1e-12, "E1.15: the leaves through (0,0,1/n) are unit discs in x, eta = 1"));
    s.expectations.push_back(sequence_limit("q_n", 0.0, 1e-2, "E1.15: along the punctured leaf g the Poincare density blows up at 0"));
    s.expectations.push_back(gap("p_n", "q_n", "at_least", 0.9, "E1.15: two approaches to 0 give different limits, no continuous extension"));
    Expectation conv = expect("restriction limits off the singular set", CheckKind::convergence,
                              "E1.15: domain convergence holds on compacts avoiding the singular set");
    conv.verdict = "avoid_singular";
    conv.expected = 1e-2;
    s.expectations.push_back(conv);
    return s;
}

Scenario e116()
{
    RVector r(3);
    r << 1.0, 0.8, 1.0;
    const Polydisc M(Point::Zero(3), r);
    Scenario s = base_scenario("E1.16", "x dx + zy dy on P(0,(1,0.8,1))", PolyVectorField::parse("x ; z*y ; 0", M), yz_axes());
    s.transversal = false;
    s.families.push_back(coordinate_lines({"sigma1-y-lines", "(0, xi, c), c != 0, punctured at xi = 0", 3, 1, 2, true, ModelKind::punctured_disc, r}));
    s.families.push_back(coordinate_lines({"sigma3-x-lines", "(xi, c, 0), punctured at xi = 0", 3, 0, 1, false, ModelKind::punctured_disc, r}));
    s.families.push_back(coordinate_lines({"sigma2-x-lines", "(xi, 0, c), punctured at xi = 0", 3, 0, 2, false, ModelKind::punctured_disc, r}));
    const double y = 0.3;
    s.sequences.push_back(seq("p_n", [y](int n) { return P(0, y, 1.0 / (n + 1)); }, P(0, y, 0)));
    s.sequences.push_back(seq("q_n", [y](int n) { return P(0.5 / n, y, 0); }, P(0, y, 0)));
    s.sequences.push_back(seq("a_n", [](int n) { return P(0.5 / n, 0, 0.5); }, P(0, 0, 0.5)));
    s.sequences.push_back(seq("b_n", [](int n) { return P(0, 0.4 / n, 0.5); }, P(0, 0, 0.5)));
    s.rays.push_back(ray("x-separatrix to (0,0.3,0)", P(0, y, 0), e1));
    s.rays.push_back(ray("x-separatrix to (0,0,0.5)", P(0, 0, 0.5), e1));
    s.rays.push_back(ray("y-line to (0,0,0.5)", P(0, 0, 0.5), e2, 0.4));
    s.expectations.push_back(verdict_at("not transversal on the y-axis", {P(0, y, 0), P(0, -0.5, 0)}, "not_transversal", e2,
                                        "E1.16: y-lines at height 1/n keep direction e2, which is tangent to the y-axis"));
    s.expectations.push_back(verdict_at("transversal on the punctured z-axis", {P(0, 0, 0.5)}, "transversal", std::nullopt,
                                        "E1.16: near (0,0,c) the field looks like the E1.4 model"));
    s.expectations.push_back(invariant("x", "E1.16: x=0 is invariant"));
    s.expectations.push_back(invariant("y", "E1.16: y=0 is invariant"));
    s.expectations.push_back(invariant("z", "E1.16: z=0 is invariant"));
    s.expectations.push_back(simple("registered charts", CheckKind::charts, "valid", "E1.16: coordinate lines in the invariant planes are leaves"));
    s.expectations.push_back(simple("numerical zeros on the model", CheckKind::singular_locus, "match", "E1.16: zeros are the y- and z-axes"));
    s.expectations.push_back(sequence_limit("p_n", std::pow(2.0 * y * std::log(0.8 / y), 2), 1e-12,
                                            "E1.16: y-lines above the y-axis are the same punctured disc, eta is constant"));
    s.expectations.push_back(sequence_limit("q_n", 0.0, 1e-2, "E1.16: along the x-separatrix eta tends to zero"));
    s.expectations.push_back(gap("p_n", "q_n", "at_least", 0.3, "E1.16: two limits at (0,y,0), no continuous extension along the y-axis"));
    s.expectations.push_back(gap("a_n", "b_n", "at_most", 1e-2, "E1.16: both approaches to (0,0,c) drive eta to zero, continuous there"));
    s.expectations.push_back(simple("flags only next to separatrices", CheckKind::scan, "separatrix_only",
                                    "E1.16: discontinuity shows up next to the y-axis, where x-separatrices end"));
    s.expectations.push_back(simple("separatrix rays complete", CheckKind::completeness, "complete",
                                    "E1.16: punctured leaves have infinite length at their puncture"));
    return s;
}

Scenario e117()
{
    const Polydisc M = Polydisc::unit(3);
    Scenario s = base_scenario("E1.17", "x dx + zy dy + zy dz", PolyVectorField::parse("x ; z*y ; z*y", M), yz_axes());
    s.transversal = true;
    s.families.push_back(coordinate_lines({"sigma2-x-lines", "(xi, 0, c), punctured at xi = 0", 3, 0, 2, false, ModelKind::punctured_disc, M.radii()}));
    s.families.push_back(coordinate_lines({"sigma3-x-lines", "(xi, c, 0), punctured at xi = 0", 3, 0, 1, false, ModelKind::punctured_disc, M.radii()}));
    s.families.push_back(punctured_line("diagonal", "(0, xi, xi), punctured at 0", 3, make_point({0, 1, 1}), 1.0, -1));
    s.rays.push_back(ray("x-separatrix to (0,0,0.5)", P(0, 0, 0.5), e1));
    s.rays.push_back(ray("diagonal to 0", P(0, 0, 0), make_point({0, 1, 1})));
    s.expectations.push_back(verdict_at("transversal", {P(0, 0.5, 0), P(0, 0, -0.5)}, "transversal", std::nullopt,
                                        "E1.17: same field as E1.5, whose cone avoids both axes"));
    s.expectations.push_back(invariant("x", "E1.17: x=0 is invariant"));
    s.expectations.push_back(invariant("y", "E1.17: y=0 is invariant"));
    s.expectations.push_back(invariant("z", "E1.17: z=0 is invariant"));
    s.expectations.push_back(simple("registered charts", CheckKind::charts, "valid", "E1.17: x-lines and the diagonal of x=0 are leaves"));
    s.expectations.push_back(simple("continuous extension, scan", CheckKind::scan, "zero_flags",
                                    "E1.17: transversal type plus invariant planes, eta extends continuously to all of M"));
    Expectation conv = expect("restriction limits near the singular set", CheckKind::convergence,
                              "E1.17: transversal type lets restricted eta converge uniformly on compacts meeting E");
    conv.verdict = "meet_singular";
    conv.expected = 1e-2;
    s.expectations.push_back(conv);
    return s;
}

Scenario e118()
{
    const Polydisc M = Polydisc::unit(3);
    Scenario s = base_scenario("E1.18", "xy dx + zy dy + zx dz", PolyVectorField::parse("x*y ; z*y ; z*x", M),
                               AnalyticSetModel(3, {line_piece("x-axis", 3, 0), line_piece("y-axis", 3, 1), line_piece("z-axis", 3, 2)}, true));
    s.transversal = false;
    s.families.push_back(coordinate_lines({"sigma3-x-lines", "(xi, c, 0), c != 0, punctured at xi = 0", 3, 0, 1, true, ModelKind::punctured_disc, M.radii()}));
    s.families.push_back(coordinate_lines({"sigma2-z-lines", "(c, 0, xi), c != 0, punctured at xi = 0", 3, 2, 0, true, ModelKind::punctured_disc, M.radii()}));
    s.families.push_back(coordinate_lines({"sigma1-y-lines", "(0, xi, c), c != 0, punctured at xi = 0", 3, 1, 2, true, ModelKind::punctured_disc, M.radii()}));
    const double x = 0.5;
    s.sequences.push_back(seq("p_n", [x](int n) { return P(x, 1.0 / (n + 1), 0); }, P(x, 0, 0)));
    s.sequences.push_back(seq("q_n", [x](int n) { return P(x, 0, 1.0 / (n + 1)); }, P(x, 0, 0)));
    s.rays.push_back(ray("z-separatrix to (0.5,0,0)", P(0.5, 0, 0), e3));
    s.rays.push_back(ray("x-separatrix to (0,0.5,0)", P(0, 0.5, 0), e1));
    s.rays.push_back(ray("y-separatrix to (0,0,0.5)", P(0, 0, 0.5), e2));
    std::vector<Point> axis_points;
    for (double t : {0.5, -0.3}) axis_points.push_back(P(t, 0, 0));
    s.expectations.push_back(verdict_at("not transversal on the x-axis", axis_points, "not_transversal", e1,
                                        "E1.18: x-lines at height y=1/n keep direction e1, tangent to the x-axis"));
    s.expectations.push_back(invariant("x", "E1.18: x=0 is invariant"));
    s.expectations.push_back(invariant("y", "E1.18: y=0 is invariant"));
    s.expectations.push_back(invariant("z", "E1.18: z=0 is invariant"));
    s.expectations.push_back(simple("registered charts", CheckKind::charts, "valid", "E1.18: coordinate lines in the three invariant planes are leaves"));
    s.expectations.push_back(simple("numerical zeros on the model", CheckKind::singular_locus, "match", "E1.18: zeros are the three axes"));
    s.expectations.push_back(sequence_limit("p_n", std::pow(2.0 * x * std::log(1.0 / x), 2), 1e-12,
                                            "E1.18: x-lines at height 1/n are the same punctured disc"));
    s.expectations.push_back(sequence_limit("q_n", 0.0, 1e-2, "E1.18: along the z-separatrix through (x,0,0) eta tends to zero"));
    s.expectations.push_back(gap("p_n", "q_n", "at_least", 0.3, "E1.18: two limits at each punctured axis point"));
    s.expectations.push_back(simple("flags only next to separatrices", CheckKind::scan, "separatrix_only",
                                    "E1.18: discontinuity along the punctured axes, where separatrices end"));
    s.expectations.push_back(simple("separatrix rays complete", CheckKind::completeness, "complete",
                                    "E1.18: punctured leaves have infinite length at their puncture"));
    return s;
}

Scenario e32(int k)
{
    const Polydisc M = Polydisc::unit(3);
    const std::string id = fmt::format("E3.2-k{}", k);
    const std::string lit = k == 1 ? "x ; y ; 0" : "x^2 ; y^2 ; 0";
    Scenario s = base_scenario(id, k == 1 ? "radial field (z1, z2, 0)" : "quadratic field (z1^2, z2^2, 0)",
                               PolyVectorField::parse(lit, M), AnalyticSetModel(3, {line_piece("z3-axis", 3, 2)}, true));
    s.transversal = true;
    s.ex32 = Ex32Spec{k, 2.0, 0.5};
    if (k == 1) {
        ChartFamily f;
        f.id = "radial";
        f.description = "(xi u1, xi u2, c) with max |u_j| = 1, punctured at xi = 0";
        auto chart_for = [](Complex u1, Complex u2, Complex c, Complex xi) {
            return affine_line_chart(fmt::format("radial(u=({:.6g}{:+.6g}i,{:.6g}{:+.6g}i),c={:.6g}{:+.6g}i)", u1.real(), u1.imag(),
                                                 u2.real(), u2.imag(), c.real(), c.imag()),
                                     P(0, 0, c), make_point({u1, u2, 0.0}), ModelDomain::punctured(1.0), xi);
        };
        f.classify = [chart_for](const Point& p) -> std::optional<LeafChart> {
            const int m = std::abs(p(0)) >= std::abs(p(1)) ? 0 : 1;
            const Complex xi = p(m);
            if (std::abs(xi) <= kZero) return std::nullopt;
            return chart_for(p(0) / xi, p(1) / xi, p(2), xi);
        };
        f.member = [chart_for](Complex c, Complex xi) -> std::optional<LeafChart> { return chart_for(1.0, Complex(0.0, 0.5), c, xi); };
        f.approach = [chart_for](const Point& e, double delta) -> std::optional<ChartApproach> {
            if (std::abs(e(0)) > 1e-12 || std::abs(e(1)) > 1e-12) return std::nullopt;
            return ChartApproach{chart_for(1.0, Complex(0.0, 0.5), e(2), delta), true};
        };
        f.param_min = -0.9;
        f.param_max = 0.9;
        s.families.push_back(std::move(f));
        s.rays.push_back(ray("radial (1, 0.5i) to (0,0,0.3)", P(0, 0, 0.3), make_point({1.0, Complex(0, 0.5), 0.0})));
        s.rays.push_back(ray("radial (0.6, 1) to (0,0,-0.2)", P(0, 0, -0.2), make_point({0.6, 1.0, 0.0})));
    } else {
        s.families.push_back(coordinate_lines({"x-lines", "(xi, 0, c), punctured at xi = 0", 3, 0, 2, false, ModelKind::punctured_disc, M.radii()}));
        s.families.push_back(coordinate_lines({"y-lines", "(0, xi, c), punctured at xi = 0", 3, 1, 2, false, ModelKind::punctured_disc, M.radii()}));
        s.families.push_back(punctured_line("diagonal", "(xi, xi, c), punctured at xi = 0", 3, make_point({1, 1, 0}), 1.0, 2));
        s.rays.push_back(ray("x-line to (0,0,0.3)", P(0, 0, 0.3), e1));
        s.rays.push_back(ray("y-line to (0,0,0.3)", P(0, 0, 0.3), e2));
        s.rays.push_back(ray("diagonal to (0,0,-0.2)", P(0, 0, -0.2), make_point({1, 1, 0})));
    }
    s.expectations.push_back(verdict_at("transversal along the z3-axis", {P(0, 0, 0.3)}, "transversal", std::nullopt,
                                        "E3.2: leaves stay in the levels of z3 while the singular set is the z3-axis"));
    Expectation b = expect("comparison constants", CheckKind::ex32_bounds,
                           k == 1 ? "E3.2 with k=1: |X| equals |pi| exactly" : "E3.2 with k=2: |X|/|pi|^2 ranges over [1/sqrt 2, 1]");
    b.expected = k == 1 ? 1.0 : 1.0 / std::sqrt(2.0);  // lower constant
    b.tolerance = 1e-12;
    b.literal = "1";  // upper constant
    s.expectations.push_back(b);
    s.expectations.push_back(simple("registered charts", CheckKind::charts, "valid", "E3.2: punctured lines through the z3-axis are leaves"));
    s.expectations.push_back(simple("numerical zeros on the model", CheckKind::singular_locus, "match", "E3.2: zeros are the z3-axis"));
    s.expectations.push_back(simple("rays to the z3-axis complete", CheckKind::completeness, "complete",
                                    "E3.2: the leafwise metric is complete at the singular set"));
    return s;
}

std::map<std::string, Scenario> build_registry()
{
    std::map<std::string, Scenario> m;
    for (Scenario s : {e13_1(), e13_2(), e13_3(), e14(), e15(), e114(), e115(), e116(), e117(), e118(), e32(1), e32(2)}) {
        const std::string id = s.id;
        m.emplace(id, std::move(s));
    }
    return m;
}

const std::map<std::string, Scenario>& registry()
{
    static const std::map<std::string, Scenario> reg = build_registry();
    return reg;
}

}  // namespace

const std::vector<std::string>& scenario_ids()
{
    static const std::vector<std::string> ids{"E1.3.1", "E1.3.2", "E1.3.3", "E1.4", "E1.5", "E1.14", "E1.15",
                                              "E1.16", "E1.17", "E1.18", "E3.2-k1", "E3.2-k2"};
    return ids;
}

const Scenario& scenario(const std::string& id)
{
    const auto& reg = registry();
    auto it = reg.find(id);
    if (it == reg.end()) throw std::invalid_argument("unknown scenario '" + id + "'");
    return it->second;
}

}  // namespace foliation
