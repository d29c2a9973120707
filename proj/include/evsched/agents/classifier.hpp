#pragma once

#include <string>
#include <vector>

#include "evsched/agents/knowledge.hpp"
#include "evsched/core/types.hpp"
#include "evsched/errors.hpp"
#include "evsched/llm/client.hpp"

namespace evsched::agents {

enum class PromptScenario { basic, contextualized, error_informed };

inline std::string to_string(PromptScenario s) {
    switch (s) {
        case PromptScenario::basic: return "basic";
        case PromptScenario::contextualized: return "contextualized";
        case PromptScenario::error_informed: return "error-informed";
    }
    return "?";
}

inline std::optional<PromptScenario> parse_scenario(const std::string& s) {
    if (s == "basic") return PromptScenario::basic;
    if (s == "contextualized") return PromptScenario::contextualized;
    if (s == "error-informed" || s == "error_informed") return PromptScenario::error_informed;
    return std::nullopt;
}

struct ClassifierConfig {
    std::vector<OpClass> candidate_set;  // non-empty, ordered
    PromptScenario scenario = PromptScenario::contextualized;
    llm::BackendConfig backend;
};

struct ClassificationResult {
    OpClass op_class = OpClass::LP;
    llm::ChatMessage raw_response;
    PromptScenario scenario = PromptScenario::basic;
    std::vector<OpClass> candidate_set;
};

namespace detail {

inline std::string tool_instruction(const std::vector<OpClass>& candidates) {
    std::string s =
        "Classify the user's request by calling the classify_op function with op_class set "
        "to exactly one of:";
    for (OpClass c : candidates) s += " " + evsched::to_string(c);
    s += ".\n";
    return s;
}

}  // namespace detail

// Scenario prompts grow strictly by appending: each richer scenario adds its
// knowledge section after the previous prompt and restates the tool
// instruction, so the basic prompt is a prefix of the contextualized one and
// that of the error-informed one, while every variant still ends with the
// instruction.
inline std::string build_system_prompt(const ClassifierConfig& cfg, const KnowledgeBase& kb) {
    if (cfg.candidate_set.empty()) throw Error("classifier: candidate set must be non-empty");
    for (OpClass c : cfg.candidate_set) {
        const KnowledgeBlocks* b = kb.find(c);
        if (!b || !b->math)
            throw MissingKnowledge("no math block for candidate class " + evsched::to_string(c));
    }

    std::string s =
        "You turn a user's EV charging request into one optimization problem class.\n"
        "The available classes are:\n\n";
    for (OpClass c : cfg.candidate_set)
        s += "## " + evsched::to_string(c) + "\n" + *kb.find(c)->math + "\n";
    const std::string instruction = detail::tool_instruction(cfg.candidate_set);
    s += instruction;

    if (cfg.scenario == PromptScenario::basic) return s;

    s += "\n# EV charging context\n\n";
    for (OpClass c : cfg.candidate_set) {
        const KnowledgeBlocks* b = kb.find(c);
        if (b->ev_context) s += "## " + evsched::to_string(c) + "\n" + *b->ev_context + "\n";
    }
    s += instruction;

    if (cfg.scenario == PromptScenario::contextualized) return s;

    s += "\n# Additional guidance\n\n";
    for (OpClass c : cfg.candidate_set) {
        const KnowledgeBlocks* b = kb.find(c);
        if (b->remarks) s += "## " + evsched::to_string(c) + "\n" + *b->remarks + "\n";
    }
    s += instruction;
    return s;
}

inline llm::ToolSpec classify_tool_spec(const std::vector<OpClass>& candidates) {
    nlohmann::json enum_values = nlohmann::json::array();
    for (OpClass c : candidates) enum_values.push_back(evsched::to_string(c));
    return llm::ToolSpec{
        "classify_op",
        "Report the optimization problem class that best models the request.",
        nlohmann::json{{"type", "object"},
                       {"properties",
                        {{"op_class", {{"type", "string"}, {"enum", enum_values}}}}},
                       {"required", nlohmann::json::array({"op_class"})}}};
}

// Single-shot classification: one chat round, one validated tool call. A
// class outside the candidate set surfaces as OutOfSet, never remapped.
inline ClassificationResult classify(const std::string& request_text, const ClassifierConfig& cfg,
                                     const KnowledgeBase& kb) {
    if (request_text.empty()) throw Error("classify: request text must be non-empty");
    const llm::ToolSpec tool = classify_tool_spec(cfg.candidate_set);
    const std::vector<llm::ChatMessage> messages{
        llm::system_message(build_system_prompt(cfg, kb)), llm::user_message(request_text)};
    llm::ChatMessage reply = llm::chat(cfg.backend, messages, {tool});

    llm::ToolCall call;
    try {
        call = llm::extract_tool_call(reply, tool);
    } catch (const SchemaViolation& e) {
        // Distinguish "a known class outside the offered set" from garbage.
        for (const auto& c : reply.tool_calls) {
            if (c.name != "classify_op" || !c.arguments.is_object()) continue;
            if (!c.arguments.contains("op_class") || !c.arguments["op_class"].is_string())
                continue;
            if (auto cls = parse_op_class(c.arguments["op_class"].get<std::string>())) {
                if (std::find(cfg.candidate_set.begin(), cfg.candidate_set.end(), *cls) ==
                    cfg.candidate_set.end())
                    throw OutOfSet("model chose " + evsched::to_string(*cls) +
                                   ", which is outside the candidate set");
            }
        }
        throw;
    }

    const auto cls = parse_op_class(call.arguments.at("op_class").get<std::string>());
    if (!cls) throw OutOfSet("model returned an unknown class");
    if (std::find(cfg.candidate_set.begin(), cfg.candidate_set.end(), *cls) ==
        cfg.candidate_set.end())
        throw OutOfSet("model chose " + evsched::to_string(*cls) +
                       ", which is outside the candidate set");
    return ClassificationResult{*cls, std::move(reply), cfg.scenario, cfg.candidate_set};
}

}  // namespace evsched::agents
