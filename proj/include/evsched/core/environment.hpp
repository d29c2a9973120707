#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evsched/core/types.hpp"
#include "evsched/errors.hpp"

namespace evsched {

// Smart-meter view of the world: everything the parser agent can read about
// the physical system without asking the user.
struct EnvironmentSnapshot {
    TimeGrid grid;
    std::vector<double> prices;             // currency per kWh, one per slot
    std::vector<double> non_flexible_load;  // kW, one per slot
    PowerBounds bounds;                     // charger limits, x_max = P_max
    double battery_capacity_kwh = 0.0;
    double soc_init = 0.0;  // fractions of capacity
    double soc_min = 0.0;
    double soc_max = 1.0;
    double efficiency = 1.0;  // grid-to-battery, in (0, 1]
    Timestamp reference_clock;  // "now" for resolving relative times
};

inline void validate(const EnvironmentSnapshot& env) {
    validate(env.grid);
    validate(env.bounds);
    const auto n = static_cast<size_t>(env.grid.num_slots);
    if (env.prices.size() != n || env.non_flexible_load.size() != n)
        throw DimensionMismatch("environment arrays must have length num_slots");
    for (double p : env.prices)
        if (!(p >= 0)) throw Error("environment: prices must be >= 0");
    for (double l : env.non_flexible_load)
        if (!(l >= 0)) throw Error("environment: non-flexible load must be >= 0");
    if (!(env.battery_capacity_kwh > 0)) throw Error("environment: battery capacity must be > 0");
    if (!(0 <= env.soc_min && env.soc_min <= env.soc_init && env.soc_init <= env.soc_max &&
          env.soc_max <= 1.0))
        throw Error("environment: need 0 <= soc_min <= soc_init <= soc_max <= 1");
    if (!(env.efficiency > 0 && env.efficiency <= 1.0))
        throw Error("environment: efficiency must be in (0, 1]");
}

inline void from_json(const nlohmann::json& j, EnvironmentSnapshot& env) {
    env.grid.start = Timestamp::parse(j.at("start").get<std::string>());
    env.grid.delta_t = j.at("delta_t").get<double>();
    env.grid.num_slots = j.at("num_slots").get<int>();
    env.prices = j.at("prices").get<std::vector<double>>();
    env.non_flexible_load = j.at("non_flexible_load").get<std::vector<double>>();
    env.bounds.x_min = j.at("x_min").get<double>();
    env.bounds.x_max = j.at("x_max").get<double>();
    env.battery_capacity_kwh = j.at("battery_capacity_kwh").get<double>();
    env.soc_init = j.at("soc_init").get<double>();
    env.soc_min = j.at("soc_min").get<double>();
    env.soc_max = j.at("soc_max").get<double>();
    env.efficiency = j.at("efficiency").get<double>();
    env.reference_clock = Timestamp::parse(j.at("reference_clock").get<std::string>());
    validate(env);
}

inline void to_json(nlohmann::json& j, const EnvironmentSnapshot& env) {
    j = nlohmann::json{{"start", env.grid.start.to_string()},
                       {"delta_t", env.grid.delta_t},
                       {"num_slots", env.grid.num_slots},
                       {"prices", env.prices},
                       {"non_flexible_load", env.non_flexible_load},
                       {"x_min", env.bounds.x_min},
                       {"x_max", env.bounds.x_max},
                       {"battery_capacity_kwh", env.battery_capacity_kwh},
                       {"soc_init", env.soc_init},
                       {"soc_min", env.soc_min},
                       {"soc_max", env.soc_max},
                       {"efficiency", env.efficiency},
                       {"reference_clock", env.reference_clock.to_string()}};
}

inline EnvironmentSnapshot load_environment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open environment fixture: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("bad environment fixture " + path + ": " + e.what());
    }
    return j.get<EnvironmentSnapshot>();
}

}  // namespace evsched
