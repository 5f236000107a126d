#pragma once

#include "foliation/leaf.hpp"
#include "foliation/scenario.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace foliation {

enum class EtaKind { exact, lower, upper, interval };
const char* to_string(EtaKind k);

// s is the extremal derivative of discs into the leaf, eta = s * s.
struct EtaSample {
    Point point;
    double s = 0.0;
    double eta = 0.0;
    EtaKind kind = EtaKind::exact;
    double lower = 0.0;  // bounds on s; equal to s unless kind is interval
    double upper = 0.0;
    std::string leaf_ref;

    static EtaSample make(Point p, double s, EtaKind kind, std::string ref = {});
    static EtaSample bracket(Point p, double lo, double hi, std::string ref = {});
};

// Largest |phi'(0)| over holomorphic phi from the unit disc into the model with phi(0) = zeta.
double extremal_radius(const ModelDomain& model, Complex zeta);

// Holomorphic covering of the model by the unit disc sending 0 to `base`, evaluated at u.
Complex model_covering(const ModelDomain& model, Complex base, Complex u);

// Uniformization of the chart's leaf centred at its base point.
Point uniformize(const LeafChart& chart, Complex u);

EtaSample eta_exact(const LeafChart& chart, Complex zeta);
inline EtaSample eta_exact(const LeafChart& chart) { return eta_exact(chart, chart.base_param); }

EtaSample eta_lower_flow(const PolyVectorField& field, const Point& p, const CertifiedRadiusOptions& opts = {});

EtaSample eta_upper_ambient(const Polydisc& U, const Point& p);

// Exact value on a registered leaf, zero on the singular set, otherwise the flow/ambient bracket.
EtaSample eta_at(const Scenario& sc, const Point& p, const CertifiedRadiusOptions& flow_opts = {});

// ------------------------------------------------------------ sequences

struct SequenceLimit {
    std::vector<int> indices;
    std::vector<EtaSample> samples;
    double limit = 0.0;         // eta at the last index
    double tail_oscillation = 0.0;  // max - min of eta over the last quarter of the indices
    double image_distance = 0.0;    // uniformizer images of the last element to leaf-or-singular-set
};

// Indices 1..horizon are thinned to a geometric ladder when `stride_log` is set.
SequenceLimit eta_sequence_limits(const Scenario& sc, const PointSequence& seq, int horizon, bool stride_log = false);

// --------------------------------------------------------------- scanning

struct ScanOptions {
    int grid = 12;           // model grid per axis
    int members = 12;        // family members
    double near_radius = 0;  // 0: a fifth of the smallest domain radius
    double gap_tol = 0;      // 0: gap_fraction * max s over the grid
    double gap_fraction = 0.1;
    int ladder = 14;
};

struct ScanCell {
    std::string family;
    int member = 0;
    int i = 0;
    int j = 0;
    Point point;
    double s = 0.0;
    std::string leaf_ref;
    bool probed = false;      // close enough to the singular set to be probed
    bool flagged = false;
    bool separatrix_adjacent = false;
    double gap = 0.0;
    Point singular_point;
    std::vector<std::pair<std::string, double>> limits;  // approach label, limiting s
};

struct ScanResult {
    std::vector<ScanCell> cells;
    double gap_tol = 0.0;
    double max_s = 0.0;
    int flags = 0;
    int skipped = 0;
    int flags_off_separatrix = 0;
    int largest_patch = 0;  // largest 4-connected flagged patch in one member's grid
};

ScanResult discontinuity_scan(const Scenario& sc, const ScanOptions& opts = {});

// ------------------------------------------------------- lengths and completeness

struct PathSpec {
    std::function<Point(double)> map;
    std::function<Tangent(double)> derivative;
    std::string leaf_ref;
};

struct MetricLength {
    double length = 0.0;
    std::vector<std::pair<double, double>> ladder;  // (delta, length over [0, 1 - delta])
};

// Integral of 2|path'(u)| / s(path(u)) over [0, 1 - delta] for each delta (or [0,1] when empty).
MetricLength metric_length(const std::function<double(const Point&)>& s_of, const PathSpec& path,
                           const std::vector<double>& deltas = {}, double tol = 1e-12);

// s from the scenario's registered charts; throws when no chart covers the point.
double chart_s(const Scenario& sc, const Point& p);

enum class Completeness { complete, incomplete, inconclusive };
const char* to_string(Completeness c);

struct RayLengths {
    std::string ray;
    std::vector<double> deltas;
    std::vector<double> lengths;
    Completeness verdict = Completeness::inconclusive;
};

struct CompletenessReport {
    Completeness verdict = Completeness::inconclusive;
    std::vector<RayLengths> rays;
};

struct CompletenessOptions {
    int rungs = 20;
    double cauchy_tol = 1e-3;
    double growth = 0.5;  // rung k must add at least growth / k
};

CompletenessReport completeness_probe(const std::function<double(const Point&)>& s_of, const std::vector<ProbeRay>& rays,
                                      const CompletenessOptions& opts = {});
CompletenessReport completeness_probe(const Scenario& sc, const CompletenessOptions& opts = {});

// ---------------------------------------------------------- radial density

double ex32_density(const Point& z, int k, double r, const PolyVectorField& field);

struct Ex32Bounds {
    double c_low = 0.0;
    double c_high = 0.0;
    double constant = 0.0;  // max(1 / c_low, c_high)
    int points = 0;
};

// Extremes of |X(z)| / |pi(z)|^k over a grid of 0 < |pi(z)| < rho, |z3| < rho.
Ex32Bounds ex32_bounds_check(const PolyVectorField& field, int k, double rho, int grid = 9);

}  // namespace foliation
