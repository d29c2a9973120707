#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "evsched/errors.hpp"
#include "evsched/timestamp.hpp"

namespace evsched {

// Discrete scheduling horizon: num_slots slots of delta_t hours starting at
// a wall-clock instant.
struct TimeGrid {
    Timestamp start;
    double delta_t = 1.0;  // slot length in hours
    int num_slots = 1;

    double horizon_hours() const { return delta_t * num_slots; }
    Timestamp end() const { return start.add_hours(horizon_hours()); }
    bool operator==(const TimeGrid&) const = default;
};

inline void validate(const TimeGrid& g) {
    if (!(g.delta_t > 0)) throw Error("time grid: delta_t must be positive");
    if (g.num_slots < 1) throw Error("time grid: num_slots must be >= 1");
}

struct PowerBounds {
    double x_min = 0.0;  // kW
    double x_max = 0.0;  // kW
    bool operator==(const PowerBounds&) const = default;
};

inline void validate(const PowerBounds& b) {
    if (!(0.0 <= b.x_min && b.x_min <= b.x_max))
        throw Error("power bounds: need 0 <= x_min <= x_max");
}

// Per-slot power vector on a grid.
struct PowerSchedule {
    TimeGrid grid;
    std::vector<double> values;  // kW, one per slot
};

inline void validate(const PowerSchedule& s) {
    validate(s.grid);
    if (static_cast<int>(s.values.size()) != s.grid.num_slots)
        throw DimensionMismatch("schedule length does not match grid");
    for (double v : s.values)
        if (!std::isfinite(v)) throw Error("schedule contains a non-finite value");
}

// User-facing performance metric categories.
enum class PerformanceMetric { CC, CT, EI, PP, PV, GD };

// Problem classes the classifier can pick from.
enum class OpClass { LP, QP, MM, CP, LMT, LQR };

inline const std::array<OpClass, 6>& all_op_classes() {
    static const std::array<OpClass, 6> a
        {OpClass::LP, OpClass::QP, OpClass::MM, OpClass::CP, OpClass::LMT, OpClass::LQR};
    return a;
}

inline const std::array<PerformanceMetric, 6>& all_metrics() {
    static const std::array<PerformanceMetric, 6> a
        {PerformanceMetric::CC, PerformanceMetric::CT, PerformanceMetric::EI,
         PerformanceMetric::PP, PerformanceMetric::PV, PerformanceMetric::GD};
    return a;
}

// Metrics that map to a problem class (everything except EI).
inline const std::array<PerformanceMetric, 5>& mapped_metrics() {
    static const std::array<PerformanceMetric, 5> a
        {PerformanceMetric::CC, PerformanceMetric::CT, PerformanceMetric::PP,
         PerformanceMetric::PV, PerformanceMetric::GD};
    return a;
}

inline std::string to_string(OpClass c) {
    switch (c) {
        case OpClass::LP: return "LP";
        case OpClass::QP: return "QP";
        case OpClass::MM: return "MM";
        case OpClass::CP: return "CP";
        case OpClass::LMT: return "LMT";
        case OpClass::LQR: return "LQR";
    }
    return "?";
}

inline std::string to_string(PerformanceMetric m) {
    switch (m) {
        case PerformanceMetric::CC: return "CC";
        case PerformanceMetric::CT: return "CT";
        case PerformanceMetric::EI: return "EI";
        case PerformanceMetric::PP: return "PP";
        case PerformanceMetric::PV: return "PV";
        case PerformanceMetric::GD: return "GD";
    }
    return "?";
}

inline std::optional<OpClass> parse_op_class(const std::string& s) {
    for (OpClass c : all_op_classes())
        if (to_string(c) == s) return c;
    return std::nullopt;
}

inline std::optional<PerformanceMetric> parse_metric(const std::string& s) {
    for (PerformanceMetric m : all_metrics())
        if (to_string(m) == s) return m;
    return std::nullopt;
}

// Metric -> most suitable problem class. EI is deliberately unmapped: its
// requests fall outside the classifier's knowledge base.
inline std::optional<OpClass> metric_to_class(PerformanceMetric m) {
    switch (m) {
        case PerformanceMetric::CC: return OpClass::LP;
        case PerformanceMetric::CT: return OpClass::LMT;
        case PerformanceMetric::PP: return OpClass::MM;
        case PerformanceMetric::PV: return OpClass::QP;
        case PerformanceMetric::GD: return OpClass::CP;
        case PerformanceMetric::EI: return std::nullopt;
    }
    return std::nullopt;
}

inline std::optional<PerformanceMetric> class_to_metric(OpClass c) {
    switch (c) {
        case OpClass::LP: return PerformanceMetric::CC;
        case OpClass::LMT: return PerformanceMetric::CT;
        case OpClass::MM: return PerformanceMetric::PP;
        case OpClass::QP: return PerformanceMetric::PV;
        case OpClass::CP: return PerformanceMetric::GD;
        case OpClass::LQR: return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace evsched
