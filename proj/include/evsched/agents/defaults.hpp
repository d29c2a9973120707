#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "evsched/errors.hpp"

namespace evsched::agents {

// Common-knowledge parameter store (Type 3). Kept as a local file instead of
// live lookups so runs stay deterministic and offline.
struct DefaultsBook {
    std::map<std::string, double> values;

    double get(const std::string& name) const {
        auto it = values.find(name);
        if (it == values.end())
            throw MissingParameter("Type 3 parameter '" + name + "' missing from defaults");
        return it->second;
    }

    double soc_target() const { return get("default_soc_target"); }
    double duration_hours() const { return get("default_duration_hours"); }
    int morning_hour() const { return static_cast<int>(get("morning_hour")); }
    int evening_hour() const { return static_cast<int>(get("evening_hour")); }
    double grid_damage_exponent() const { return get("grid_damage_exponent"); }
    double lqr_input_weight() const { return get("lqr_input_weight"); }

    static DefaultsBook standard() {
        return DefaultsBook{{{"default_soc_target", 0.8},
                             {"default_duration_hours", 8.0},
                             {"morning_hour", 8.0},
                             {"evening_hour", 20.0},
                             {"grid_damage_exponent", 3.0},
                             {"lqr_input_weight", 1.0}}};
    }
};

inline void validate(const DefaultsBook& d) {
    for (const auto& [k, v] : d.values)
        if (!std::isfinite(v) || v <= 0)
            throw Error("defaults: '" + k + "' must be finite and positive");
}

inline void from_json(const nlohmann::json& j, DefaultsBook& d) {
    d.values.clear();
    for (const auto& [k, v] : j.items()) d.values[k] = v.get<double>();
    validate(d);
}

inline void to_json(nlohmann::json& j, const DefaultsBook& d) {
    j = nlohmann::json::object();
    for (const auto& [k, v] : d.values) j[k] = v;
}

inline DefaultsBook load_defaults(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open defaults file: " + path);
    nlohmann::json j;
    in >> j;
    return j.get<DefaultsBook>();
}

}  // namespace evsched::agents
