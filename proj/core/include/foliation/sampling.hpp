#pragma once

#include "foliation/types.hpp"

#include <random>

namespace foliation {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

Complex random_phase(Rng& rng);
Complex random_in_disc(Rng& rng, double radius);
// Gaussian vector normalized to the unit sphere of C^n.
CVector random_unit_vector(Rng& rng, int n);
// Uniform point of the polydisc.
Point random_in_polydisc(Rng& rng, const Polydisc& d);

// Derive an independent stream for a labelled subtask without consuming the parent.
Rng substream(std::uint64_t seed, std::uint64_t tag);

}  // namespace foliation
