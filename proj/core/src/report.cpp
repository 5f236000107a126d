#include "foliation/report.hpp"

#include "foliation/csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace foliation {

namespace {

std::string num(double v) { return csv_number(v); }

struct Outcome {
    bool ok = false;
    std::string measured;
    std::string expected;
    std::string reason;
};

CMatrix columns(const std::vector<Tangent>& vs, int n)
{
    CMatrix m(n, static_cast<Eigen::Index>(vs.size()));
    for (std::size_t i = 0; i < vs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vs[i];
    return m;
}

Outcome check_cone(const Scenario& sc, const Expectation& e, const ReportOptions& opts)
{
    const int n = sc.field.dim();
    Outcome o;
    const int want_dim = e.full_span ? n : static_cast<int>(e.span.size());
    o.expected = fmt::format("span dim {} with {} relations", want_dim, e.relations.size());
    double worst_resid = 0.0, worst_angle = 0.0;
    int worst_dim = want_dim;
    std::size_t worst_rel = e.relations.size();
    o.ok = true;
    for (std::size_t i = 0; i < e.points.size(); ++i) {
        ConeOptions co = opts.cone;
        co.seed = opts.seed + i;
        const ConeSet cone = estimate_foliation_cone(sc.field, sc.singular_set, e.points[i], co);
        worst_resid = std::max(worst_resid, cone.max_relation_residual);
        if (cone.relations.size() != e.relations.size()) {
            o.ok = false;
            worst_rel = cone.relations.size();
            o.reason = fmt::format("{} relations certified at {}", cone.relations.size(), format_point(e.points[i]));
            continue;
        }
        if (!cone.relations.empty()) {
            const CMatrix found = orthonormalize(columns(cone.relations, n));
            for (const auto& r : e.relations) worst_angle = std::max(worst_angle, angle_to_subspace(r, found));
        }
        if (!cone.span_hint) {
            o.ok = false;
            worst_dim = 0;
            o.reason = fmt::format("directions do not cover the relation null space at {}", format_point(e.points[i]));
            continue;
        }
        if (cone.span_hint->cols() != want_dim) {
            o.ok = false;
            worst_dim = static_cast<int>(cone.span_hint->cols());
            continue;
        }
        if (!e.full_span) worst_angle = std::max(worst_angle, subspace_angle(*cone.span_hint, orthonormalize(columns(e.span, n))));
    }
    if (worst_angle > 1e-6) {
        o.ok = false;
        if (o.reason.empty()) o.reason = "certified subspace differs from the expected one";
    }
    if (worst_resid > 1e-8) {
        o.ok = false;
        if (o.reason.empty()) o.reason = "relation residual above 1e-8";
    }
    o.measured = fmt::format("span dim {} with {} relations, angle {}, residual {}", worst_dim, worst_rel, num(worst_angle),
                             num(worst_resid));
    return o;
}

Outcome check_transversal(const Scenario& sc, const Expectation& e, const ReportOptions& opts)
{
    Outcome o;
    o.expected = e.verdict + (e.witness ? " with witness" : "");
    o.ok = true;
    std::string verdicts;
    double witness_angle = 0.0, min_angle = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < e.points.size(); ++i) {
        TransversalOptions to = opts.transversal;
        to.seed = opts.seed + i;
        const auto v = is_transversal_type(sc.field, sc.singular_set, e.points[i], to);
        verdicts += (i ? " " : "") + std::string(to_string(v.verdict));
        min_angle = std::min(min_angle, v.min_angle);
        if (to_string(v.verdict) != e.verdict) {
            o.ok = false;
            o.reason = fmt::format("verdict {} at {}", to_string(v.verdict), format_point(e.points[i]));
        }
        if (e.witness) {
            if (!v.witness) {
                o.ok = false;
                o.reason = fmt::format("no witness at {}", format_point(e.points[i]));
                continue;
            }
            witness_angle = std::max(witness_angle, line_angle(v.witness->direction, *e.witness));
        }
    }
    if (e.witness && witness_angle > 1e-3) {
        o.ok = false;
        if (o.reason.empty()) o.reason = "witness direction off by more than 1e-3 rad";
    }
    o.measured = verdicts;
    if (e.witness) o.measured += " witness angle " + num(witness_angle);
    else o.measured += " min angle " + num(min_angle);
    return o;
}

SequenceLimit limits_of(const Scenario& sc, const std::string& id, const ReportOptions& opts)
{
    const PointSequence& seq = sc.sequence(id);
    return eta_sequence_limits(sc, seq, opts.horizon > 0 ? opts.horizon : seq.horizon);
}

// uniformizer images at the horizon only approach leaf-or-E at the rate the sequence approaches its target
constexpr double kImageSlack = 1e-2;

Outcome check_sequence(const Scenario& sc, const Expectation& e, const ReportOptions& opts)
{
    const SequenceLimit lim = limits_of(sc, e.sequence, opts);
    Outcome o;
    o.expected = fmt::format("{} +- {}", num(e.expected), num(e.tolerance));
    o.measured = fmt::format("{} (tail oscillation {}, image distance {})", num(lim.limit), num(lim.tail_oscillation),
                             num(lim.image_distance));
    o.ok = std::abs(lim.limit - e.expected) <= e.tolerance && lim.image_distance <= kImageSlack;
    if (!o.ok) o.reason = lim.image_distance > kImageSlack ? "uniformizer image leaves the leaf" : "limit outside tolerance";
    return o;
}

Outcome check_gap(const Scenario& sc, const Expectation& e, const ReportOptions& opts)
{
    const double a = limits_of(sc, e.sequence, opts).limit;
    const double b = limits_of(sc, e.other_sequence, opts).limit;
    const double g = std::abs(a - b);
    Outcome o;
    o.measured = num(g);
    if (e.verdict == "at_least") {
        o.expected = ">= " + num(e.expected);
        o.ok = g >= e.expected;
    } else if (e.verdict == "at_most") {
        o.expected = "<= " + num(e.expected);
        o.ok = g <= e.expected;
    } else {
        throw std::invalid_argument("gap verdict must be at_least or at_most");
    }
    if (!o.ok) o.reason = "gap on the wrong side of the bound";
    return o;
}

Outcome check_scan(const Scenario& sc, const Expectation& e, const ReportOptions& opts)
{
    const ScanResult r = discontinuity_scan(sc, opts.scan);
    Outcome o;
    o.measured = fmt::format("{} flags, {} off separatrix, largest patch {}, {} skipped", r.flags, r.flags_off_separatrix,
                             r.largest_patch, r.skipped);
    if (e.verdict == "zero_flags") {
        o.expected = "0 flags";
        o.ok = r.flags == 0;
    } else if (e.verdict == "separatrix_only") {
        o.expected = "flags only next to separatrices, patch >= 5";
        o.ok = r.flags > 0 && r.flags_off_separatrix == 0 && r.largest_patch >= 5;
    } else {
        throw std::invalid_argument("scan verdict must be zero_flags or separatrix_only");
    }
    if (!o.ok) o.reason = "flag pattern does not match";
    return o;
}

Outcome check_completeness(const Scenario& sc, const Expectation& e, const ReportOptions& opts)
{
    const CompletenessReport r = completeness_probe(sc, opts.complete);
    Outcome o;
    o.expected = e.verdict;
    o.measured = to_string(r.verdict);
    double shortest = std::numeric_limits<double>::infinity();
    for (const auto& ray : r.rays)
        if (!ray.lengths.empty()) shortest = std::min(shortest, ray.lengths.back());
    o.measured += fmt::format(" over {} rays, shortest final length {}", r.rays.size(), num(shortest));
    o.ok = to_string(r.verdict) == e.verdict;
    if (!o.ok) o.reason = "completeness verdict differs";
    return o;
}

Outcome check_invariant(const Scenario& sc, const Expectation& e, const ReportOptions& opts)
{
    InvarianceOptions io;
    io.seed = opts.seed;
    const auto r = is_invariant_hypersurface(parse_scalar(e.literal, sc.field.dim()), sc.field, io);
    Outcome o;
    o.expected = e.verdict;
    o.measured = fmt::format("{} ({}, residual {})", to_string(r.verdict), r.exact ? "exact" : "sampled", num(r.max_residual));
    o.ok = to_string(r.verdict) == e.verdict;
    if (!o.ok) o.reason = "invariance verdict differs";
    return o;
}

Outcome check_singular_locus(const Scenario& sc, const Expectation&)
{
    const int density = sc.field.dim() == 2 ? 6 : 3;
    const SingularLocus loc = singular_locus(sc.field, density);
    double worst = 0.0;
    for (const auto& p : loc.points) worst = std::max(worst, sc.singular_set.distance(p));
    Outcome o;
    o.expected = "zeros within 1e-8 of the model";
    o.measured = fmt::format("{} zeros from {} seeds, max distance {}", loc.points.size(), loc.seeds, num(worst));
    o.ok = !loc.points.empty() && worst <= 1e-8;
    if (!o.ok) o.reason = loc.points.empty() ? "no zeros found" : "a zero lies off the model";
    return o;
}

Outcome check_charts(const Scenario& sc, const Expectation&, const ReportOptions& opts)
{
    Outcome o;
    o.expected = "injective, immersed, tangent";
    o.ok = true;
    int validated = 0;
    double worst_parallel = 0.0;
    for (std::size_t f = 0; f < sc.families.size(); ++f) {
        const ChartFamily& fam = sc.families[f];
        int here = 0;
        if (!fam.member) continue;
        for (int m = 0; m < 3; ++m) {
            const double c = fam.param_min + (fam.param_max - fam.param_min) * (m + 0.5) / 3.0;
            const auto chart = fam.member(c, 0.0);
            if (!chart) continue;
            const ChartValidation v = validate_chart(*chart, sc.field, opts.chart_samples, opts.seed + 31 * f + m);
            worst_parallel = std::max(worst_parallel, v.max_parallel_residual);
            ++here;
            if (!(v.injective && v.immersed && v.parallel)) {
                o.ok = false;
                o.reason = fmt::format("chart {} fails validation", chart->id);
            }
        }
        if (here == 0) {
            o.ok = false;
            o.reason = fmt::format("family {} produced no members", fam.id);
        }
        validated += here;
    }
    o.measured = fmt::format("{} charts, max parallel residual {}", validated, num(worst_parallel));
    return o;
}

Outcome check_ex32(const Scenario& sc, const Expectation& e)
{
    if (!sc.ex32) throw std::invalid_argument("scenario has no radial comparison data");
    const Ex32Bounds b = ex32_bounds_check(sc.field, sc.ex32->k, sc.ex32->rho);
    const double high = std::stod(e.literal);
    Outcome o;
    o.expected = fmt::format("C_low {} C_high {} +- {}", num(e.expected), num(high), num(e.tolerance));
    o.measured = fmt::format("C_low {} C_high {} C {} over {} points", num(b.c_low), num(b.c_high), num(b.constant), b.points);
    o.ok = std::abs(b.c_low - e.expected) <= e.tolerance && std::abs(b.c_high - high) <= e.tolerance;
    if (!o.ok) o.reason = "comparison constants differ";
    return o;
}

Outcome check_convergence(const Scenario& sc, const Expectation& e, const ReportOptions& opts)
{
    const bool meet = e.verdict == "meet_singular";
    if (!meet && e.verdict != "avoid_singular") throw std::invalid_argument("convergence verdict must be meet_singular or avoid_singular");
    const Polydisc& D = sc.domain();
    const Polydisc U(D.center(), D.radii() * opts.base_scale);
    std::vector<int> steps(static_cast<std::size_t>(opts.steps));
    std::iota(steps.begin(), steps.end(), 1);
    const std::vector<std::vector<Point>> compacts{default_compact(sc, U, meet)};
    const DomainFamily fam = opts.family;
    const ConvergenceReport r =
        convergence_experiment(sc, U, [&](int n) { return family_member(fam, U, n); }, steps, compacts);
    const double last = r.rows.back().sup_gap.front();
    Outcome o;
    o.expected = fmt::format("sup gap <= {} at n = {}{}", num(e.expected), opts.steps, meet ? ", monotone from n <= 8" : "");
    o.measured = fmt::format("sup gap {} at n = {}, monotone from {}, rho {}", num(last), r.rows.back().n, r.monotone_from,
                             num(r.rows.back().rho));
    o.ok = last <= e.expected && (!meet || (r.monotone_from >= 0 && r.monotone_from <= 8));
    if (meet && !r.compact_meets_singular_set.front()) {
        o.ok = false;
        o.reason = "compact does not meet the singular set";
    } else if (!o.ok) {
        o.reason = "restricted eta does not settle";
    }
    return o;
}

Outcome dispatch(const Scenario& sc, const Expectation& e, const ReportOptions& opts)
{
    switch (e.kind) {
    case CheckKind::cone_span: return check_cone(sc, e, opts);
    case CheckKind::transversal: return check_transversal(sc, e, opts);
    case CheckKind::eta_sequence: return check_sequence(sc, e, opts);
    case CheckKind::eta_gap: return check_gap(sc, e, opts);
    case CheckKind::scan: return check_scan(sc, e, opts);
    case CheckKind::completeness: return check_completeness(sc, e, opts);
    case CheckKind::invariant: return check_invariant(sc, e, opts);
    case CheckKind::singular_locus: return check_singular_locus(sc, e);
    case CheckKind::charts: return check_charts(sc, e, opts);
    case CheckKind::ex32_bounds: return check_ex32(sc, e);
    case CheckKind::convergence: return check_convergence(sc, e, opts);
    }
    throw std::logic_error("unhandled check kind");
}

}  // namespace

bool Report::passed() const { return failures() == 0; }

int Report::failures() const
{
    return static_cast<int>(std::count_if(lines.begin(), lines.end(), [](const auto& l) { return l.status == CheckStatus::fail; }));
}

ReportLine run_expectation(const Scenario& sc, const Expectation& e, const ReportOptions& opts)
{
    ReportLine line;
    line.scenario = sc.id;
    line.expectation = e.id;
    line.kind = e.kind;
    line.citation = e.citation;
    try {
        Outcome o = dispatch(sc, e, opts);
        line.measured = std::move(o.measured);
        line.expected = std::move(o.expected);
        line.status = o.ok ? CheckStatus::pass : CheckStatus::fail;
        line.reason = std::move(o.reason);
    } catch (const std::exception& ex) {
        line.status = CheckStatus::fail;
        line.reason = ex.what();
    }
    if (line.citation.empty()) {
        line.status = CheckStatus::fail;
        line.reason = "expectation has no citation";
    }
    return line;
}

Report run_report(const Scenario& sc, const ReportOptions& opts)
{
    Report r;
    for (const auto& e : sc.expectations) r.lines.push_back(run_expectation(sc, e, opts));
    return r;
}

void write_report_csv(std::ostream& out, const Report& report, bool header)
{
    const std::vector<std::string> cols{"scenario", "expectation", "kind", "status", "measured", "expected", "citation", "reason"};
    if (header) {
        CsvWriter w(out, cols);
        (void)w;
    }
    for (const auto& l : report.lines) {
        std::string row;
        const std::vector<std::string> cells{l.scenario, l.expectation, to_string(l.kind),
                                             l.status == CheckStatus::pass ? "PASS" : "FAIL",
                                             l.measured, l.expected, l.citation, l.reason};
        for (std::size_t i = 0; i < cells.size(); ++i) row += (i ? "," : "") + csv_field(cells[i]);
        out << row << '\n';
    }
}

void write_report_text(std::ostream& out, const Report& report)
{
    for (const auto& l : report.lines) {
        out << fmt::format("{} {} [{}] {}: measured {}; expected {}\n", l.status == CheckStatus::pass ? "PASS" : "FAIL",
                           l.scenario, to_string(l.kind), l.expectation, l.measured, l.expected);
        if (!l.reason.empty()) out << "    reason: " << l.reason << '\n';
        out << "    cite: " << l.citation << '\n';
    }
}

}  // namespace foliation
