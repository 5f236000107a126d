#pragma once

#include "foliation/field.hpp"
#include "foliation/variety.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace foliation {

struct ConeOptions {
    int scales = 21;
    double r0 = 0.0;  // 0: half the distance from p to the domain boundary
    int samples_per_scale = 8000;
    double relation_tol = 1e-8;
    double coverage_eps = 0.05;
    double dedupe_tol = 1e-3;
    std::uint64_t seed = 1;
};

// Directions of the field at non-singular points approaching p, with certified linear relations.
ConeSet estimate_foliation_cone(const PolyVectorField& field, const AnalyticSetModel& set, const Point& p,
                                const ConeOptions& opts = {});

// True when the unit directions, expressed in the orthonormal basis, are eps-dense in its projective sphere.
bool directions_cover_subspace(const std::vector<Tangent>& directions, const CMatrix& basis, double eps, std::uint64_t seed);

enum class Verdict { transversal, not_transversal, inconclusive };
const char* to_string(Verdict v);

struct Witness {
    Point base;                  // point of the singular set
    Tangent direction;           // shared direction, taken from the set's cone
    Tangent foliation_direction; // field direction at the closest approach point
    std::vector<Point> approach; // regular points converging to base
    double angle = 0.0;          // angle between the two directions at the finest approach
};

struct TransversalityVerdict {
    Verdict verdict = Verdict::inconclusive;
    std::optional<Witness> witness;
    double min_angle = 0.0;
    Polydisc neighborhood;
    int points_checked = 0;
};

struct TransversalOptions {
    double theta_min = 0.1;
    double nbhd_radius = 0.0;  // 0: a quarter of the smallest domain radius
    int levels = 5;
    int set_samples_per_piece = 3;
    int cone_samples_per_scale = 300;
    int cone_scales = 21;
    double witness_angle = 1e-3;
    int witness_scales = 12;
    std::uint64_t seed = 1;
};

TransversalityVerdict is_transversal_type(const PolyVectorField& field, const AnalyticSetModel& set, const Point& p,
                                          const TransversalOptions& opts = {});

// Searches regular points near q whose field direction matches w; empty when none is realized.
std::optional<Witness> find_witness(const PolyVectorField& field, const AnalyticSetModel& set, const Point& q,
                                    const Tangent& w, double r0, const TransversalOptions& opts);

}  // namespace foliation
