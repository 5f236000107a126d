#pragma once

#include "foliation/types.hpp"

#include <functional>

namespace foliation {

enum class FlowStatus { completed, exited_domain, step_underflow, step_limit };
const char* to_string(FlowStatus s);

struct Dop853Options {
    double rtol = 1e-12;
    double atol = 1e-12;
    long max_steps = 200000;
};

struct RayIntegration {
    CVector state;
    double tau = 0.0;  // real ray parameter reached
    long steps = 0;
    FlowStatus status = FlowStatus::completed;
    bool stayed_inside = true;
};

using ComplexRhs = std::function<void(const CVector&, CVector&)>;
using Region = std::function<bool(const CVector&)>;

// Integrates w' = rhs(w) for real tau in [0, length] with the 8(5,3) Dormand-Prince pair.
// Accepted states must satisfy `inside`; a step leaving it is shortened until the exit is located.
RayIntegration dop853_integrate(const ComplexRhs& rhs, CVector w0, double length, const Dop853Options& opts,
                                const Region& inside = {});

}  // namespace foliation
