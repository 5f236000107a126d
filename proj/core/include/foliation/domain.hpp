#pragma once

#include "foliation/eta.hpp"
#include "foliation/scenario.hpp"

#include <functional>
#include <string>
#include <vector>

namespace foliation {

struct RhoParts {
    double closure = 0.0;   // Hausdorff distance of the closures
    double boundary = 0.0;  // Hausdorff distance of the boundaries
    double total() const { return closure + boundary; }
};

// Exact for coordinate polydiscs: the distance to a product of closed discs, and to its boundary,
// depends on each coordinate only through its modulus offset, so both suprema sit at box corners.
RhoParts hausdorff_rho(const Polydisc& U, const Polydisc& V);

struct SampledRho {
    RhoParts parts;
    int density = 0;
    int refinements = 0;
};

// Sampled closures and boundaries (polar grids per coordinate), refined until two passes agree.
SampledRho hausdorff_rho_sampled(const Polydisc& U, const Polydisc& V, int density = 2, double agree = 1e-3,
                                 int max_refinements = 4);

// eta of the foliation restricted to U at p, through the component of leaf-and-U containing p.
EtaSample eta_restricted(const Scenario& sc, const Polydisc& U, const Point& p);

enum class DomainFamily { shrink, translate };
DomainFamily parse_domain_family(const std::string& name);
const char* to_string(DomainFamily f);
// U_n for the named family: radii r (1 + 1/n), or the centre moved by min radius / (4n) along the first axis.
Polydisc family_member(DomainFamily f, const Polydisc& U, int n);

struct ConvergenceRow {
    int n = 0;
    double rho = 0.0;
    std::vector<double> sup_gap;  // per compact, sup |eta_Un - eta_U|
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::vector<bool> compact_meets_singular_set;
    // first n from which every compact's gap is non-increasing; -1 when never
    int monotone_from = -1;
};

ConvergenceReport convergence_experiment(const Scenario& sc, const Polydisc& U, const std::function<Polydisc(int)>& family,
                                         const std::vector<int>& steps, const std::vector<std::vector<Point>>& compacts);

// Points on registered leaves inside the shrunk U, plus singular points when `with_singular` is set.
std::vector<Point> default_compact(const Scenario& sc, const Polydisc& U, bool with_singular, int per_family = 24);

}  // namespace foliation
