#pragma once

#include "foliation/field.hpp"
#include "foliation/leaf.hpp"
#include "foliation/variety.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace foliation {

enum class CheckKind {
    cone_span,           // certified relations and span at each point
    transversal,         // verdict at each point, optional witness direction
    eta_sequence,        // limit of eta along a named sequence
    eta_gap,             // gap between the limits of two named sequences
    scan,                // discontinuity scan: zero flags, or flags only next to separatrices
    completeness,        // completeness probe over the scenario rays
    invariant,           // hypersurface invariance
    singular_locus,      // numerical zeros of the field lie on the singular set model
    charts,              // every registered chart is injective, immersed and tangent to the field
    ex32_bounds,         // empirical comparison constants of |X| against |pi|^k
    convergence          // restriction to a converging domain family
};
const char* to_string(CheckKind k);

// One declarative expected outcome. Unused fields stay empty.
struct Expectation {
    std::string id;
    CheckKind kind = CheckKind::charts;
    std::vector<Point> points;
    std::vector<Tangent> span;       // expected span; empty with `full_span` means the whole space
    bool full_span = false;
    std::vector<Tangent> relations;  // relations that must be certified
    std::string verdict;
    std::optional<Tangent> witness;
    std::string sequence;
    std::string other_sequence;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string literal;
    std::string citation;
};

struct PointSequence {
    std::string id;
    std::function<Point(int)> at;
    int first = 1;
    int horizon = 10000;
    Point target;
};

// Path approaching a point of the singular set; `at(delta)` sits at parameter delta from it.
struct ProbeRay {
    std::string id;
    Point target;
    std::function<Point(double)> at;
    std::function<Tangent(double)> derivative;
    double delta_start = 0.5;
};

struct Ex32Spec {
    int k = 1;
    double r = 2.0;    // log scale of the comparison metric
    double rho = 0.5;  // radius of the region where the bounds are checked
};

struct Scenario {
    std::string id;
    std::string title;
    PolyVectorField field;
    AnalyticSetModel singular_set;
    std::vector<ChartFamily> families;
    std::vector<PointSequence> sequences;
    std::vector<ProbeRay> rays;
    std::vector<Expectation> expectations;
    bool transversal = false;  // foliation of transversal type on the whole domain
    std::optional<Ex32Spec> ex32;

    const Polydisc& domain() const { return field.domain(); }
    std::optional<LeafChart> chart_at(const Point& p) const { return classify_model_leaf(families, p); }
    const PointSequence& sequence(const std::string& id) const;
    const ChartFamily& family(const std::string& id) const;
};

const std::vector<std::string>& scenario_ids();
// Throws std::invalid_argument("unknown scenario ...") for an unregistered id.
const Scenario& scenario(const std::string& id);

}  // namespace foliation
