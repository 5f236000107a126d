#include "foliation/types.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace foliation {

Point make_point(std::initializer_list<Complex> coords)
{
    Point p(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (const auto& c : coords) p(i++) = c;
    return p;
}

Polydisc::Polydisc(Point center, RVector radii) : center_(std::move(center)), radii_(std::move(radii))
{
    if (center_.size() == 0) throw std::invalid_argument("polydisc needs dimension >= 1");
    if (center_.size() != radii_.size()) throw std::invalid_argument("polydisc center/radii dimension mismatch");
    for (Eigen::Index j = 0; j < radii_.size(); ++j) {
        if (!(radii_(j) > 0.0) || !std::isfinite(radii_(j)))
            throw std::invalid_argument("polydisc radii must be positive and finite");
        if (!std::isfinite(center_(j).real()) || !std::isfinite(center_(j).imag()))
            throw std::invalid_argument("polydisc center must be finite");
    }
}

Polydisc Polydisc::unit(int n) { return centered(n, 1.0); }

Polydisc Polydisc::centered(int n, double radius)
{
    return Polydisc(Point::Zero(n), RVector::Constant(n, radius));
}

bool Polydisc::contains(const Point& p) const
{
    if (p.size() != center_.size()) return false;
    for (Eigen::Index j = 0; j < p.size(); ++j)
        if (!(std::abs(p(j) - center_(j)) < radii_(j))) return false;
    return true;
}

bool Polydisc::contains_closed(const Point& p, double slack) const
{
    if (p.size() != center_.size()) return false;
    for (Eigen::Index j = 0; j < p.size(); ++j)
        if (std::abs(p(j) - center_(j)) > radii_(j) + slack) return false;
    return true;
}

double Polydisc::distance_to_boundary(const Point& p) const
{
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < p.size(); ++j) d = std::min(d, radii_(j) - std::abs(p(j) - center_(j)));
    return d;
}

Polydisc Polydisc::shrunk(double factor) const { return Polydisc(center_, radii_ * factor); }

bool Polydisc::inside(const Polydisc& outer) const
{
    if (outer.dim() != dim()) return false;
    for (int j = 0; j < dim(); ++j)
        if (std::abs(center_(j) - outer.center_(j)) + radii_(j) > outer.radii_(j) + 1e-15) return false;
    return true;
}

std::string Polydisc::to_string() const
{
    std::string out = "P(center=" + format_point(center_) + ", radii=(";
    for (int j = 0; j < dim(); ++j) out += fmt::format("{}{:.6g}", j ? "," : "", radii_(j));
    return out + "))";
}

std::string format_point(const Point& p)
{
    std::string out = "(";
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        if (j) out += ",";
        const double re = p(j).real(), im = p(j).imag();
        if (im == 0.0)
            out += fmt::format("{:.6g}", re);
        else
            out += fmt::format("{:.6g}{:+.6g}i", re, im);
    }
    return out + ")";
}

}  // namespace foliation
