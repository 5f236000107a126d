#include "commands.hpp"

#include "foliation/cone.hpp"
#include "foliation/csv.hpp"
#include "foliation/domain.hpp"
#include "foliation/eta.hpp"
#include "foliation/report.hpp"
#include "foliation/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace lab {

using namespace foliation;

namespace {

// Rows gathered before rendering, so csv and text share one code path.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void render(const Table& t, const RunConfig& cfg, std::ostream& out)
{
    out << cfg.echo();
    if (cfg.format == "csv") {
        CsvWriter w(out, t.header);
        for (const auto& r : t.rows) w.row(r);
        return;
    }
    std::vector<std::size_t> width(t.header.size());
    for (std::size_t c = 0; c < t.header.size(); ++c) width[c] = t.header[c].size();
    for (const auto& r : t.rows)
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t c = 0; c < cells.size(); ++c) s += fmt::format("{:<{}}", cells[c], width[c] + 2);
        while (!s.empty() && s.back() == ' ') s.pop_back();
        out << s << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

RVector parse_radii(const std::string& text, int n)
{
    RVector r = RVector::Ones(n);
    if (text.empty()) return r;
    std::stringstream ss(text);
    std::string item;
    int j = 0;
    while (std::getline(ss, item, ',')) {
        if (j >= n) throw std::invalid_argument("more radii than field components");
        r(j++) = std::stod(item);
    }
    if (j == 1) r.setConstant(r(0));
    else if (j != n) throw std::invalid_argument("radii must list one value or one per component");
    return r;
}

Scenario custom_scenario(const RunConfig& cfg)
{
    const int n = static_cast<int>(parse_components(cfg.field).size());
    Polydisc domain(Point::Zero(n), parse_radii(cfg.radii, n));
    PolyVectorField field = PolyVectorField::parse(cfg.field, domain);
    AnalyticSetModel set = cfg.singular_set.empty() ? AnalyticSetModel(n, {}, true) : AnalyticSetModel::parse(cfg.singular_set, n, true);
    return Scenario{"custom", "field from the config file", std::move(field), std::move(set), {}, {}, {}, {}, false, std::nullopt};
}

Scenario resolve(const RunConfig& cfg)
{
    if (cfg.scenario == "custom" || (cfg.scenario.empty() && !cfg.field.empty())) return custom_scenario(cfg);
    if (cfg.scenario.empty()) throw std::invalid_argument("no scenario selected; pass --scenario <id>");
    return scenario(cfg.scenario);
}

// Explicit point, else the first point named by a cone or transversality expectation.
Point base_point(const RunConfig& cfg, const Scenario& sc)
{
    if (!cfg.point.empty()) {
        Point p = parse_point(cfg.point);
        if (p.size() != sc.field.dim()) throw std::invalid_argument("point dimension does not match the field");
        return p;
    }
    for (const auto& e : sc.expectations)
        if ((e.kind == CheckKind::cone_span || e.kind == CheckKind::transversal) && !e.points.empty()) return e.points.front();
    throw std::invalid_argument("no base point; pass --point \"(...)\"");
}

ConeOptions cone_options(const RunConfig& cfg)
{
    ConeOptions o;
    o.scales = cfg.scales;
    o.samples_per_scale = cfg.samples_per_scale;
    o.relation_tol = cfg.relation_tol;
    o.coverage_eps = cfg.coverage_eps;
    o.seed = cfg.seed.value_or(1);
    return o;
}

TransversalOptions transversal_options(const RunConfig& cfg)
{
    TransversalOptions o;
    o.theta_min = cfg.theta_min;
    o.nbhd_radius = cfg.nbhd_radius;
    o.levels = cfg.levels;
    o.seed = cfg.seed.value_or(1);
    return o;
}

ScanOptions scan_options(const RunConfig& cfg)
{
    ScanOptions o;
    o.grid = cfg.grid;
    o.members = cfg.members;
    o.gap_fraction = cfg.gap_fraction;
    o.near_radius = cfg.near_radius;
    return o;
}

CompletenessOptions complete_options(const RunConfig& cfg)
{
    CompletenessOptions o;
    o.rungs = cfg.rungs;
    o.cauchy_tol = cfg.cauchy_tol;
    o.growth = cfg.growth;
    return o;
}

Polydisc scaled_domain(const Scenario& sc, double scale)
{
    return Polydisc(sc.domain().center(), sc.domain().radii() * scale);
}

int cmd_cone(const RunConfig& cfg, std::ostream& out)
{
    const Scenario sc = resolve(cfg);
    const Point p = base_point(cfg, sc);
    const ConeSet cone = estimate_foliation_cone(sc.field, sc.singular_set, p, cone_options(cfg));
    const int n = sc.field.dim();
    Table t{concat({"kind", "scale", "residual"}, point_header(n)), {}};
    for (const auto& d : cone.directions) t.rows.push_back(concat({"direction", csv_number(d.scale), ""}, point_cells(d.v)));
    for (const auto& r : cone.relations) t.rows.push_back(concat({"relation", "", csv_number(cone.max_relation_residual)}, point_cells(r)));
    if (cone.span_hint)
        for (Eigen::Index c = 0; c < cone.span_hint->cols(); ++c)
            t.rows.push_back(concat({"span", "", ""}, point_cells(cone.span_hint->col(c))));
    render(t, cfg, out);
    return 0;
}

int cmd_transversal(const RunConfig& cfg, std::ostream& out)
{
    const Scenario sc = resolve(cfg);
    const Point p = base_point(cfg, sc);
    const auto v = is_transversal_type(sc.field, sc.singular_set, p, transversal_options(cfg));
    const int n = sc.field.dim();
    Table t{concat(concat({"verdict", "min_angle", "points_checked", "witness_angle"}, point_header(n, "base_")),
                   point_header(n, "witness_")),
            {}};
    std::vector<std::string> row{to_string(v.verdict), csv_number(v.min_angle), std::to_string(v.points_checked)};
    if (v.witness) {
        row.push_back(csv_number(v.witness->angle));
        row = concat(concat(row, point_cells(v.witness->base)), point_cells(v.witness->direction));
    } else {
        row.push_back("");
        row = concat(row, point_cells(p));
        row.resize(t.header.size());
    }
    t.rows.push_back(row);
    render(t, cfg, out);
    return 0;
}

std::vector<std::string> eta_row(const EtaSample& e)
{
    return concat(point_cells(e.point), {csv_number(e.s), csv_number(e.eta), to_string(e.kind), e.leaf_ref,
                                         csv_number(e.lower), csv_number(e.upper)});
}

int cmd_eta(const RunConfig& cfg, std::ostream& out)
{
    const Scenario sc = resolve(cfg);
    if (cfg.point.empty()) throw std::invalid_argument("eta needs --point");
    const Point p = base_point(cfg, sc);
    Table t{concat(point_header(sc.field.dim()), {"s", "eta", "kind", "leaf_ref", "s_lower", "s_upper"}), {}};
    if (sc.singular_set.pieces().size() && sc.singular_set.distance(p) <= 1e-13) {
        t.rows.push_back(eta_row(eta_at(sc, p)));
    } else {
        if (auto chart = sc.chart_at(p)) t.rows.push_back(eta_row(eta_exact(*chart)));
        CertifiedRadiusOptions ro;
        ro.safety = cfg.safety;
        ro.rays = cfg.rays;
        t.rows.push_back(eta_row(eta_lower_flow(sc.field, p, ro)));
        t.rows.push_back(eta_row(eta_upper_ambient(sc.domain(), p)));
    }
    render(t, cfg, out);
    return 0;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out)
{
    const Scenario sc = resolve(cfg);
    const ScanResult r = discontinuity_scan(sc, scan_options(cfg));
    Table t{concat(point_header(sc.field.dim()), {"s", "eta", "kind", "leaf_ref", "flag", "gap", "separatrix_adjacent"}), {}};
    for (const auto& c : r.cells)
        t.rows.push_back(concat(point_cells(c.point), {csv_number(c.s), csv_number(c.s * c.s), "exact", c.leaf_ref,
                                                       c.flagged ? "1" : "0", csv_number(c.gap), c.separatrix_adjacent ? "1" : "0"}));
    render(t, cfg, out);
    return 0;
}

int cmd_complete(const RunConfig& cfg, std::ostream& out)
{
    const Scenario sc = resolve(cfg);
    if (sc.rays.empty()) throw std::invalid_argument("scenario has no probe rays");
    const CompletenessReport r = completeness_probe(sc, complete_options(cfg));
    Table t{{"ray", "rung", "delta", "length", "verdict"}, {}};
    for (const auto& ray : r.rays)
        for (std::size_t k = 0; k < ray.lengths.size(); ++k)
            t.rows.push_back({ray.ray, std::to_string(k), csv_number(ray.deltas[k]), csv_number(ray.lengths[k]), to_string(ray.verdict)});
    t.rows.push_back({"all", "", "", "", to_string(r.verdict)});
    render(t, cfg, out);
    return 0;
}

int cmd_converge(const RunConfig& cfg, std::ostream& out)
{
    const Scenario sc = resolve(cfg);
    if (cfg.steps < 1) throw std::invalid_argument("steps must be positive");
    const Polydisc U = scaled_domain(sc, cfg.base_scale);
    const DomainFamily fam = parse_domain_family(cfg.family);
    std::vector<int> steps;
    for (int n = 1; n <= cfg.steps; ++n) steps.push_back(n);
    const std::vector<std::vector<Point>> compacts{default_compact(sc, U, cfg.with_singular)};
    const ConvergenceReport r =
        convergence_experiment(sc, U, [&](int n) { return family_member(fam, U, n); }, steps, compacts);
    Table t{{"n", "rho"}, {}};
    for (std::size_t k = 0; k < compacts.size(); ++k) t.header.push_back(fmt::format("sup_gap_K{}", k + 1));
    for (const auto& row : r.rows) {
        std::vector<std::string> cells{std::to_string(row.n), csv_number(row.rho)};
        for (double g : row.sup_gap) cells.push_back(csv_number(g));
        t.rows.push_back(cells);
    }
    render(t, cfg, out);
    return 0;
}

int cmd_ex32(const RunConfig& cfg, std::ostream& out)
{
    const Scenario sc = resolve(cfg);
    const Ex32Bounds b = ex32_bounds_check(sc.field, cfg.k, cfg.rho, cfg.ex32_grid);
    Table t{{"k", "rho", "c_low", "c_high", "constant", "points", "density"}, {}};
    std::string density;
    if (!cfg.point.empty()) density = csv_number(ex32_density(base_point(cfg, sc), cfg.k, cfg.log_scale, sc.field));
    t.rows.push_back({std::to_string(cfg.k), csv_number(cfg.rho), csv_number(b.c_low), csv_number(b.c_high),
                      csv_number(b.constant), std::to_string(b.points), density});
    render(t, cfg, out);
    return 0;
}

int cmd_report(const RunConfig& cfg, std::ostream& out)
{
    std::vector<std::string> ids;
    if (cfg.scenario.empty() || cfg.scenario == "all") ids = scenario_ids();
    else ids.push_back(cfg.scenario);
    ReportOptions opts;
    opts.seed = *cfg.seed;
    opts.cone = cone_options(cfg);
    opts.transversal = transversal_options(cfg);
    opts.scan = scan_options(cfg);
    opts.complete = complete_options(cfg);
    opts.family = parse_domain_family(cfg.family);
    opts.steps = cfg.steps;
    opts.base_scale = cfg.base_scale;
    out << cfg.echo();
    int failures = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const Report r = run_report(scenario(ids[i]), opts);
        failures += r.failures();
        if (cfg.format == "csv") write_report_csv(out, r, i == 0);
        else write_report_text(out, r);
    }
    if (cfg.format == "text") out << fmt::format("{} failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}

int cmd_list(const RunConfig& cfg, std::ostream& out)
{
    Table t{{"id", "title", "expectations"}, {}};
    for (const auto& id : scenario_ids()) {
        const Scenario& sc = scenario(id);
        t.rows.push_back({id, sc.title, std::to_string(sc.expectations.size())});
    }
    if (cfg.format == "csv") {
        CsvWriter w(out, t.header);
        for (const auto& r : t.rows) w.row(r);
    } else {
        for (const auto& r : t.rows) out << fmt::format("{:<8} {}\n", r[0], r[1]);
    }
    return 0;
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out)
{
    const std::string& s = cfg.subcommand;
    if (s == "cone") return cmd_cone(cfg, out);
    if (s == "transversal") return cmd_transversal(cfg, out);
    if (s == "eta") return cmd_eta(cfg, out);
    if (s == "scan") return cmd_scan(cfg, out);
    if (s == "complete") return cmd_complete(cfg, out);
    if (s == "converge") return cmd_converge(cfg, out);
    if (s == "ex32") return cmd_ex32(cfg, out);
    if (s == "report") return cmd_report(cfg, out);
    if (s == "list-scenarios") return cmd_list(cfg, out);
    throw std::invalid_argument("unknown subcommand '" + s + "'");
}

}  // namespace lab
