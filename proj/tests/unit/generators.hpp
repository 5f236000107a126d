#pragma once

// Hand-rolled generators for property tests. Every generator draws from an explicit Rng so that
// a failing case can be replayed from its seed.

#include "foliation/field.hpp"
#include "foliation/sampling.hpp"

#include <cmath>
#include <vector>

namespace gen {

using namespace foliation;

inline Complex complex_in(Rng& rng, double radius) { return random_in_disc(rng, radius); }

// Interior point whose coordinates stay at least `margin` (relative) away from each circle.
inline Point interior_point(Rng& rng, const Polydisc& d, double margin = 0.1)
{
    Point p(d.dim());
    for (int j = 0; j < d.dim(); ++j) p(j) = d.center()(j) + random_in_disc(rng, (1.0 - margin) * d.radii()(j));
    return p;
}

// Random sparse polynomial of total degree <= deg with coefficients in the disc of radius `scale`.
inline Polynomial polynomial(Rng& rng, int nvars, int deg, int terms, double scale = 1.0)
{
    Polynomial p(nvars);
    for (int t = 0; t < terms; ++t) {
        Polynomial::Exponent e(static_cast<std::size_t>(nvars), 0);
        int budget = static_cast<int>(uniform01(rng) * (deg + 1));
        for (int j = 0; j < nvars && budget > 0; ++j) {
            const int k = static_cast<int>(uniform01(rng) * (budget + 1));
            e[static_cast<std::size_t>(j)] = k;
            budget -= k;
        }
        p.add_term(e, random_in_disc(rng, scale));
    }
    return p;
}

inline PolyVectorField polynomial_field(Rng& rng, int n, int deg = 3, int terms = 5)
{
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) comps.push_back(polynomial(rng, n, deg, terms));
    return PolyVectorField::from_polynomials(comps, Polydisc::unit(n));
}

inline Complex unit_scalar(Rng& rng) { return random_phase(rng); }

}  // namespace gen
