#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <regex>
#include <string>
#include <vector>

#include "evsched/core/types.hpp"
#include "evsched/llm/chat.hpp"

namespace evsched::llm {

namespace detail {

inline std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Keyword match at a word start; the suffix is free so "cheap" also hits
// "cheapest" and "cost" hits "costs" (but "time" does not hit "lifetime").
inline bool contains_keyword(const std::string& text_lower, const std::string& kw) {
    size_t pos = 0;
    while ((pos = text_lower.find(kw, pos)) != std::string::npos) {
        if (pos == 0 || !word_char(text_lower[pos - 1])) return true;
        ++pos;
    }
    return false;
}

inline const std::vector<std::pair<OpClass, std::vector<std::string>>>& mock_keyword_table() {
    static const std::vector<std::pair<OpClass, std::vector<std::string>>> table = {
        {OpClass::LP, {"cost", "price", "bill", "cheap"}},
        {OpClass::LMT, {"time", "fast", "quick", "asap"}},
        {OpClass::MM, {"peak", "breaker", "installation limit"}},
        {OpClass::QP, {"smooth", "variation", "fluctuation"}},
        {OpClass::CP, {"grid", "damage", "transformer", "aging"}},
        {OpClass::LQR, {"target tracking", "regulate"}},
    };
    return table;
}

}  // namespace detail

// Deterministic keyword classifier standing in for a live model: first hit in
// the fixed keyword-priority order wins, restricted to the candidate set; with
// no hit, the first candidate in canonical class order is returned.
inline OpClass mock_rules(const std::string& request_text, const std::vector<OpClass>& candidates,
                          const std::vector<std::pair<OpClass, std::string>>& extra = {}) {
    const std::string text = detail::lowercase(request_text);
    auto in_set = [&](OpClass c) {
        return std::find(candidates.begin(), candidates.end(), c) != candidates.end();
    };
    for (const auto& [cls, words] : detail::mock_keyword_table()) {
        if (!in_set(cls)) continue;
        for (const auto& w : words)
            if (detail::contains_keyword(text, w)) return cls;
        for (const auto& [ecls, ew] : extra)
            if (ecls == cls && detail::contains_keyword(text, detail::lowercase(ew))) return cls;
    }
    for (OpClass c : all_op_classes())
        if (in_set(c)) return c;
    return candidates.front();
}

namespace detail {

inline const ChatMessage* last_user_message(const std::vector<ChatMessage>& messages) {
    for (auto it = messages.rbegin(); it != messages.rend(); ++it)
        if (it->role == Role::user) return &*it;
    return nullptr;
}

// Time-phrase extraction mirroring the explicit template grammar. Emits
// phrases, not timestamps; the parser agent resolves them against the
// reference clock.
inline nlohmann::json mock_time_arguments(const std::string& text_raw) {
    const std::string text = lowercase(text_raw);
    nlohmann::json args = nlohmann::json::object();

    // "24h", "8 hours", "in the next 10 hrs"
    static const std::regex dur_re(R"((\d+(?:\.\d+)?)\s*(?:h\b|hours?\b|hrs?\b))");
    std::smatch m;
    if (std::regex_search(text, m, dur_re)) {
        args["duration_hours"] = std::stod(m[1].str());
        return args;
    }

    static const std::regex tomorrow_clock_re(
        R"(tomorrow\s+(?:at\s+)?(\d{1,2})(?::(\d{2}))?\s*(a\.?m\.?|p\.?m\.?)?)");
    if (std::regex_search(text, m, tomorrow_clock_re)) {
        int hour = std::stoi(m[1].str());
        const int minute = m[2].matched ? std::stoi(m[2].str()) : 0;
        const std::string ap = m[3].matched ? m[3].str() : "";
        if (!ap.empty() && ap[0] == 'p' && hour < 12) hour += 12;
        if (!ap.empty() && ap[0] == 'a' && hour == 12) hour = 0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "tomorrow %02d:%02d", hour, minute);
        args["end"] = std::string(buf);
        return args;
    }
    if (text.find("tomorrow morning") != std::string::npos) {
        args["end"] = "tomorrow morning";
        return args;
    }
    if (text.find("tomorrow evening") != std::string::npos ||
        text.find("tomorrow night") != std::string::npos) {
        args["end"] = "tomorrow evening";
        return args;
    }
    static const std::regex by_clock_re(
        R"(by\s+(\d{1,2})(?::(\d{2}))?\s*(a\.?m\.?|p\.?m\.?))");
    if (std::regex_search(text, m, by_clock_re)) {
        int hour = std::stoi(m[1].str());
        const int minute = m[2].matched ? std::stoi(m[2].str()) : 0;
        if (m[3].str()[0] == 'p' && hour < 12) hour += 12;
        if (m[3].str()[0] == 'a' && hour == 12) hour = 0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "next %02d:%02d", hour, minute);
        args["end"] = std::string(buf);
        return args;
    }
    if (text.find("tonight") != std::string::npos) {
        args["end"] = "tonight";
        return args;
    }
    return args;  // nothing found: the agent falls back to defaults
}

// Uniform starting point computed from the compact hint the pipeline embeds
// in its prompt: {"num_slots": T, "delta_t": dt, "energy_kwh": E}.
inline nlohmann::json mock_start_arguments(const std::string& text) {
    const auto open = text.find('{');
    const auto close = text.rfind('}');
    nlohmann::json args = nlohmann::json::object();
    if (open == std::string::npos || close == std::string::npos || close <= open) return args;
    nlohmann::json hint = nlohmann::json::parse(text.substr(open, close - open + 1), nullptr, false);
    if (hint.is_discarded() || !hint.contains("num_slots")) return args;
    const int t = hint["num_slots"].get<int>();
    const double dt = hint.value("delta_t", 1.0);
    const double e = hint.value("energy_kwh", 0.0);
    std::vector<double> values(static_cast<size_t>(t), t > 0 ? e / (t * dt) : 0.0);
    args["values"] = values;
    return args;
}

}  // namespace detail

// In-process deterministic backend: a pure function of (messages, tools).
inline ChatMessage mock_chat(const std::vector<ChatMessage>& messages,
                             const std::vector<ToolSpec>& tools,
                             const std::vector<std::pair<OpClass, std::string>>& extra_keywords) {
    ChatMessage reply;
    reply.role = Role::assistant;
    const ChatMessage* user = detail::last_user_message(messages);
    const std::string text = user ? user->content : "";

    for (const auto& tool : tools) {
        if (tool.name == "classify_op") {
            std::vector<OpClass> candidates;
            if (tool.parameters.contains("properties") &&
                tool.parameters["properties"].contains("op_class") &&
                tool.parameters["properties"]["op_class"].contains("enum")) {
                for (const auto& v :
                     tool.parameters["properties"]["op_class"]["enum"])
                    if (auto c = parse_op_class(v.get<std::string>())) candidates.push_back(*c);
            }
            if (candidates.empty())
                for (OpClass c : all_op_classes()) candidates.push_back(c);
            const OpClass cls = mock_rules(text, candidates, extra_keywords);
            reply.tool_calls.push_back(
                {"mock-1", "classify_op", nlohmann::json{{"op_class", to_string(cls)}}});
            return reply;
        }
        if (tool.name == "set_time_parameters") {
            reply.tool_calls.push_back(
                {"mock-1", "set_time_parameters", detail::mock_time_arguments(text)});
            return reply;
        }
        if (tool.name == "suggest_start") {
            reply.tool_calls.push_back(
                {"mock-1", "suggest_start", detail::mock_start_arguments(text)});
            return reply;
        }
    }
    reply.content = "ok";
    return reply;
}

}  // namespace evsched::llm
