#pragma once

#include "foliation/field.hpp"
#include "foliation/integrator.hpp"
#include "foliation/variety.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace foliation {

// ----------------------------------------------------------------------- flow

struct FlowResult {
    Point endpoint;
    Complex t_used = 0.0;
    long step_count = 0;
    bool certified = false;  // whole segment stayed in the safety-shrunk domain
    FlowStatus status = FlowStatus::completed;
    double exit_fraction = 1.0;  // fraction of |t| travelled
};

// Solves dz/ds = X(z) along the segment s in [0, t] of complex time.
FlowResult flow(const PolyVectorField& field, const Point& p, Complex t, double tol = 1e-12, double safety = 0.9);

struct SupNormBound {
    double value = 0.0;
    double sampled_max = 0.0;
    double lipschitz_pad = 0.0;
};

// Grid estimate of sup |X| over a polydisc, padded by a Lipschitz term for the grid spacing.
SupNormBound estimate_sup_norm(const PolyVectorField& field, const Polydisc& region, int grid_per_coordinate = 6);

struct CertifiedRadiusOptions {
    double safety = 0.9;
    int rays = 48;
    int refine_iterations = 10;
    long max_chain_steps = 4000;
    double tau_cap = 1e4;
    double tol = 1e-12;
};

struct CertifiedRadius {
    double radius = 0.0;        // flow disc radius in complex time
    double base_radius = 0.0;   // single-step bound safety * d(p, dU') / M
    double limiting_angle = 0.0;
    long chain_steps = 0;
};

CertifiedRadius certified_flow_disc_radius(const PolyVectorField& field, const Point& p,
                                           const CertifiedRadiusOptions& opts = {});

// ---------------------------------------------------------------- model leaves

enum class ModelKind { disc, punctured_disc };
const char* to_string(ModelKind k);

// Disc D(center, radius); punctured variant removes `puncture`, which must lie inside.
struct ModelDomain {
    ModelKind kind = ModelKind::disc;
    Complex center = 0.0;
    double radius = 1.0;
    Complex puncture = 0.0;

    static ModelDomain disc(double r, Complex c = 0.0) { return {ModelKind::disc, c, r, 0.0}; }
    static ModelDomain punctured(double r, Complex c = 0.0) { return {ModelKind::punctured_disc, c, r, c}; }
    bool contains(Complex zeta) const;
    std::string to_string() const;
};

struct LeafChart {
    std::string id;
    ModelDomain model;
    std::function<Point(Complex)> map;
    std::function<Tangent(Complex)> derivative;
    Complex base_param = 0.0;
    // connected component through a model point of the chart restricted to a polydisc
    std::function<std::optional<ModelDomain>(const Polydisc&, Complex)> restrictor;

    Point point() const { return map(base_param); }
    LeafChart at(Complex zeta) const;
    std::optional<LeafChart> restrict_to(const Polydisc& U) const;
};

// zeta -> base + zeta * direction over a model; restriction handled by disc nesting.
LeafChart affine_line_chart(std::string id, Point base, Tangent direction, ModelDomain model, Complex base_param = 0.0);
// Model coordinate on an affine line chart for a point of that line, if it lies on it.
std::optional<Complex> affine_line_param(const Point& base, const Tangent& direction, const Point& p, double tol = 1e-12);

struct ChartApproach {
    LeafChart chart;    // chart at the approach point
    bool to_puncture;   // the approach tends to the model puncture (separatrix end)
};

// A family of leaves with closed-form charts.
struct ChartFamily {
    std::string id;
    std::string description;
    // chart through p when p lies on a member leaf
    std::function<std::optional<LeafChart>(const Point&)> classify;
    // member point about `delta` away from a singular point e, when the family accumulates there
    std::function<std::optional<ChartApproach>(const Point&, double)> approach;
    // member leaves parameterized for grid scans: chart of member `c` with model point zeta
    std::function<std::optional<LeafChart>(Complex c, Complex zeta)> member;
    // real parameter range of `c` used for scans
    double param_min = -1.0;
    double param_max = 1.0;
    bool param_is_radius = false;  // scan `c` over a disc instead of a real segment
};

struct ChartValidation {
    bool injective = true;
    bool immersed = true;
    double min_separation = 0.0;
    double max_parallel_residual = 0.0;
    bool parallel = true;
};

// Injectivity over sampled pairs, nonvanishing derivative, and tangency to the field.
ChartValidation validate_chart(const LeafChart& chart, const PolyVectorField& field, int samples = 1000,
                               std::uint64_t seed = 11);

// Cross-product residual between the field and the chart derivative, normalized.
double parallel_residual(const Tangent& a, const Tangent& b);

std::optional<LeafChart> classify_model_leaf(const std::vector<ChartFamily>& registry, const Point& p);

}  // namespace foliation
