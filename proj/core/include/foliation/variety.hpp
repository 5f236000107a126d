#pragma once

#include "foliation/expr.hpp"
#include "foliation/field.hpp"
#include "foliation/sampling.hpp"
#include "foliation/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace foliation {

// ------------------------------------------------------------------ directions

// Unit norm, first nonzero component real and positive. Throws on the zero vector.
Tangent canonicalize(const Tangent& v);
// Angle between complex lines, in [0, pi/2].
double line_angle(const Tangent& u, const Tangent& v);
// Angle between a line and a subspace with orthonormal basis columns.
double angle_to_subspace(const Tangent& v, const CMatrix& basis);
// Smallest principal angle between two subspaces (orthonormal bases).
double subspace_angle(const CMatrix& a, const CMatrix& b);
CMatrix orthonormalize(const CMatrix& span, double rank_tol = 1e-12);
// Orthonormal basis of {v : l . v = 0 for every relation l} (bilinear pairing).
CMatrix null_space_of_relations(const std::vector<Tangent>& relations, int n);
// Keeps one representative per cell of angular size `tol`; input order decides the survivor.
std::vector<std::size_t> dedupe_directions(const std::vector<Tangent>& unit_directions, double tol);

struct ConeDirection {
    Tangent v;
    double scale = 0.0;
};

// Finite model of a tangent cone: canonical directions, certified relations, known subspaces.
struct ConeSet {
    int dim = 0;
    std::vector<ConeDirection> directions;
    std::vector<Tangent> relations;
    std::optional<CMatrix> span_hint;
    std::vector<CMatrix> components;
    std::vector<int> skipped_scales;
    std::size_t samples_used = 0;
    double max_relation_residual = 0.0;

    bool empty() const { return directions.empty() && components.empty(); }
    // Smallest angle from v to the cone's directions and components.
    double angle_to(const Tangent& v) const;
};

// Smallest angle between any direction/component of `a` and any of `b`. Empty cone gives pi/2.
double cone_angle(const ConeSet& a, const ConeSet& b);

// -------------------------------------------------------------- analytic sets

struct LinearPiece {
    Point base;
    CMatrix basis;  // orthonormal columns; zero columns for a point
};

struct ChartPiece {
    int param_dim = 1;
    double param_radius = 1.0;
    std::function<Point(const CVector&)> map;
    std::function<CMatrix(const CVector&)> derivative;
};

struct SetPiece {
    std::string label;
    std::variant<LinearPiece, ChartPiece> shape;
    int dim() const;
};

struct SetProjection {
    double distance = 0.0;
    int piece = -1;
    Point nearest;
    CVector param;  // chart parameter of `nearest` (chart pieces only)
};

// "(a, b, c)" with constant expression entries, e.g. "(0, 0.5*i, 1/3)".
Point parse_point(std::string_view text);

class AnalyticSetModel {
public:
    AnalyticSetModel() = default;
    AnalyticSetModel(int ambient_dim, std::vector<SetPiece> pieces, bool singular_set);

    // Pieces separated by ';', e.g. `linear base=(0,0,0) span=(0,1,0) label=y-axis`.
    static AnalyticSetModel parse(std::string_view literal, int ambient_dim, bool singular_set);
    static SetPiece linear(std::string label, Point base, const std::vector<Tangent>& span);

    int ambient_dim() const { return n_; }
    bool singular_set() const { return singular_; }
    const std::vector<SetPiece>& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }

    SetProjection project(int piece, const Point& p) const;
    SetProjection nearest(const Point& p) const;
    double distance(const Point& p) const;
    std::vector<int> pieces_through(const Point& p, double tol = 1e-8) const;
    // Orthonormal tangent basis of a piece at one of its points.
    CMatrix tangent_space(int piece, const Point& q) const;
    // Point of the piece at Euclidean distance about `radius` from `near` (which lies on the piece).
    std::optional<Point> sample_near(int piece, const Point& near, double radius, Rng& rng) const;
    // Piece points inside a polydisc.
    std::vector<Point> sample_in(const Polydisc& region, int per_piece, Rng& rng) const;

    void validate_inside(const Polydisc& domain) const;
    std::string to_string() const;

private:
    int n_ = 0;
    bool singular_ = false;
    std::vector<SetPiece> pieces_;
};

// ------------------------------------------------------------------ operations

struct SingularLocusOptions {
    int max_iterations = 100;
    double residual_tol = 1e-10;
    double dedupe_tol = 1e-6;
};

struct SingularLocus {
    std::vector<Point> points;
    std::size_t seeds = 0;
    std::size_t dropped = 0;
};

SingularLocus singular_locus(const PolyVectorField& field, int grid_density, const SingularLocusOptions& opts = {});

struct SetConeOptions {
    int scales = 21;
    double r0 = 0.0;  // 0 means a quarter of the distance to the domain boundary, else 0.25
    int samples_per_scale = 16;
    double dedupe_tol = 1e-3;
    std::uint64_t seed = 1;
};

ConeSet tangent_cone_of_set(const AnalyticSetModel& set, const Point& p, const SetConeOptions& opts = {});

enum class Invariance { invariant, not_invariant, inconclusive };
const char* to_string(Invariance v);

struct InvarianceOptions {
    int samples = 200;
    double tol = 1e-9;
    std::uint64_t seed = 7;
};

struct InvarianceResult {
    Invariance verdict = Invariance::inconclusive;
    bool exact = false;
    int points_tested = 0;
    double max_residual = 0.0;
};

InvarianceResult is_invariant_hypersurface(const Scalar& f, const PolyVectorField& field, const InvarianceOptions& opts = {});

}  // namespace foliation
