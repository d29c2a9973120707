#pragma once

#include "evsched/core/environment.hpp"
#include "evsched/errors.hpp"

namespace evsched {

// Grid-side energy needed to raise the battery from its current state of
// charge to soc_target, accounting for charging losses.
inline double energy_requirement(double soc_target, const EnvironmentSnapshot& env) {
    if (soc_target < env.soc_init)
        throw TargetBelowCurrent("soc target " + std::to_string(soc_target) +
                                 " is below current soc " + std::to_string(env.soc_init));
    if (soc_target > env.soc_max + 1e-12)
        throw Error("soc target exceeds soc_max");
    return (soc_target - env.soc_init) * env.battery_capacity_kwh / env.efficiency;
}

}  // namespace evsched
