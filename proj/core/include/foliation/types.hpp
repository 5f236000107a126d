#pragma once

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <string>

namespace foliation {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// Points and tangent vectors share a representation; the alias only documents intent.
using Point = CVector;
using Tangent = CVector;

Point make_point(std::initializer_list<Complex> coords);

// Open polydisc: product of discs D(center_j, radii_j).
class Polydisc {
public:
    Polydisc() = default;
    Polydisc(Point center, RVector radii);

    static Polydisc unit(int n);
    static Polydisc centered(int n, double radius);

    int dim() const { return static_cast<int>(center_.size()); }
    const Point& center() const { return center_; }
    const RVector& radii() const { return radii_; }
    double min_radius() const { return radii_.minCoeff(); }

    bool contains(const Point& p) const;
    bool contains_closed(const Point& p, double slack = 0.0) const;
    // Euclidean distance from an interior point to the complement; negative outside.
    double distance_to_boundary(const Point& p) const;
    Polydisc shrunk(double factor) const;
    // True when this polydisc's closure lies in `outer` (coordinatewise disc inclusion).
    bool inside(const Polydisc& outer) const;

    std::string to_string() const;

private:
    Point center_;
    RVector radii_;
};

std::string format_point(const Point& p);

}  // namespace foliation
