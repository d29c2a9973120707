#pragma once

#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "evsched/agents/defaults.hpp"
#include "evsched/errors.hpp"
#include "evsched/llm/client.hpp"
#include "evsched/timestamp.hpp"

namespace evsched::agents {

// Resolved scheduling window. Exactly one of end/duration_hours is the
// authoritative extent; both present must agree.
struct TimeParameters {
    Timestamp start;
    std::optional<Timestamp> end;
    std::optional<double> duration_hours;
    std::vector<std::string> source_phrases;

    double window_hours() const {
        if (end) return hours_between(start, *end);
        return duration_hours.value_or(0.0);
    }
};

inline void validate(const TimeParameters& t) {
    const double w = t.window_hours();
    if (!(w > 0)) throw UnresolvableTime("scheduling window must be positive");
    if (w > 7.0 * 24.0) throw UnresolvableTime("scheduling window exceeds 7 days");
}

// Relative-phrase convention: tomorrow = next calendar day; morning/evening
// map to the hours in the defaults book; a bare clock time means its next
// occurrence after the reference clock.
inline Timestamp resolve_time_expression(const std::string& expr_raw, Timestamp ref,
                                         const DefaultsBook& defaults) {
    std::string expr = llm::detail::lowercase(expr_raw);
    // trim
    while (!expr.empty() && expr.front() == ' ') expr.erase(expr.begin());
    while (!expr.empty() && expr.back() == ' ') expr.pop_back();

    if (auto iso = Timestamp::try_parse(expr_raw)) return *iso;

    std::smatch m;
    static const std::regex tomorrow_clock(R"(^tomorrow\s+(\d{1,2}):(\d{2})$)");
    if (std::regex_match(expr, m, tomorrow_clock))
        return ref.add_days(1).at_time(std::stoi(m[1].str()), std::stoi(m[2].str()));
    if (expr == "tomorrow morning") return ref.add_days(1).at_time(defaults.morning_hour(), 0);
    if (expr == "tomorrow evening" || expr == "tomorrow night")
        return ref.add_days(1).at_time(defaults.evening_hour(), 0);
    if (expr == "tomorrow") return ref.add_days(1).at_time(defaults.morning_hour(), 0);
    if (expr == "tonight") {
        const Timestamp t = ref.at_time(defaults.evening_hour(), 0);
        return t > ref ? t : t.add_days(1);
    }
    if (expr == "morning" || expr == "this morning") {
        const Timestamp t = ref.at_time(defaults.morning_hour(), 0);
        return t > ref ? t : t.add_days(1);
    }
    static const std::regex next_clock(R"(^(?:next\s+)?(\d{1,2}):(\d{2})$)");
    if (std::regex_match(expr, m, next_clock)) {
        const Timestamp t = ref.at_time(std::stoi(m[1].str()), std::stoi(m[2].str()));
        return t > ref ? t : t.add_days(1);
    }
    throw UnresolvableTime("cannot resolve time expression '" + expr_raw + "'");
}

inline llm::ToolSpec time_tool_spec() {
    return llm::ToolSpec{
        "set_time_parameters",
        "Report the scheduling time information found in the request: a start, an end "
        "(ISO timestamp or a relative phrase such as 'tomorrow 06:00', 'tomorrow morning', "
        "'tonight'), and/or a duration in hours. Omit anything the request does not state.",
        nlohmann::json{
            {"type", "object"},
            {"properties",
             {{"start", {{"type", "string"}}},
              {"end", {{"type", "string"}}},
              {"duration_hours", {{"type", "number"}}}}},
            {"required", nlohmann::json::array()}}};
}

// One chat round extracting the time window (Type 1), resolved against the
// reference clock. Missing information falls back to the defaults book.
inline TimeParameters extract_time_parameters(const std::string& request_text,
                                              Timestamp reference_clock,
                                              const llm::BackendConfig& backend,
                                              const DefaultsBook& defaults) {
    const llm::ToolSpec tool = time_tool_spec();
    const std::vector<llm::ChatMessage> messages{
        llm::system_message("You extract scheduling time parameters from EV charging "
                            "requests. The reference clock (now) is " +
                            reference_clock.to_string() +
                            ". Call set_time_parameters with what the request states."),
        llm::user_message(request_text)};
    const llm::ChatMessage reply = llm::chat(backend, messages, {tool});
    const llm::ToolCall call = llm::extract_tool_call(reply, tool);

    TimeParameters out;
    out.start = reference_clock;
    if (call.arguments.contains("start")) {
        const std::string s = call.arguments["start"].get<std::string>();
        out.start = resolve_time_expression(s, reference_clock, defaults);
        out.source_phrases.push_back(s);
    }
    std::optional<Timestamp> end;
    std::optional<double> duration;
    if (call.arguments.contains("end")) {
        const std::string s = call.arguments["end"].get<std::string>();
        end = resolve_time_expression(s, reference_clock, defaults);
        out.source_phrases.push_back(s);
    }
    if (call.arguments.contains("duration_hours")) {
        duration = call.arguments["duration_hours"].get<double>();
        out.source_phrases.push_back(std::to_string(*duration) + "h");
    }

    if (end && duration) {
        const double implied = hours_between(out.start, *end);
        if (std::abs(implied - *duration) > 1.0 / 60.0)
            throw UnresolvableTime("end time and duration contradict each other");
        out.end = end;
    } else if (end) {
        out.end = end;
    } else if (duration) {
        out.duration_hours = duration;
    } else {
        out.duration_hours = defaults.duration_hours();
    }
    validate(out);
    return out;
}

// Deterministic Type-1 extraction of the state-of-charge target ("to 80%",
// "at 80 percent", "full charge").
inline std::optional<double> extract_soc_target(const std::string& request_text) {
    const std::string text = llm::detail::lowercase(request_text);
    static const std::regex pct(R"((\d{1,3})(?:\.\d+)?\s*(?:%|percent))");
    std::smatch m;
    if (std::regex_search(text, m, pct)) {
        const double v = std::stod(m[1].str());
        if (v > 0 && v <= 100) return v / 100.0;
    }
    if (llm::detail::contains_keyword(text, "full")) return 1.0;
    return std::nullopt;
}

// Optional explicit peak cap in kW ("keep the draw under 5 kW").
inline std::optional<double> extract_peak_cap_kw(const std::string& request_text) {
    const std::string text = llm::detail::lowercase(request_text);
    static const std::regex cap(R"((?:under|below|at most|max(?:imum)? of)\s+(\d+(?:\.\d+)?)\s*kw)");
    std::smatch m;
    if (std::regex_search(text, m, cap)) return std::stod(m[1].str());
    return std::nullopt;
}

}  // namespace evsched::agents
