#include "foliation/sampling.hpp"

#include <cmath>
#include <numbers>

namespace foliation {

Complex random_phase(Rng& rng) { return std::polar(1.0, 2.0 * std::numbers::pi * uniform01(rng)); }

Complex random_in_disc(Rng& rng, double radius)
{
    return std::polar(radius * std::sqrt(uniform01(rng)), 2.0 * std::numbers::pi * uniform01(rng));
}

CVector random_unit_vector(Rng& rng, int n)
{
    std::normal_distribution<double> g(0.0, 1.0);
    CVector v(n);
    do {
        for (int j = 0; j < n; ++j) v(j) = Complex(g(rng), g(rng));
    } while (v.norm() < 1e-12);
    return v / v.norm();
}

Point random_in_polydisc(Rng& rng, const Polydisc& d)
{
    Point p(d.dim());
    for (int j = 0; j < d.dim(); ++j) p(j) = d.center()(j) + random_in_disc(rng, d.radii()(j));
    return p;
}

Rng substream(std::uint64_t seed, std::uint64_t tag)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32), 0x5eedu};
    return Rng(seq);
}

}  // namespace foliation
