#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "evsched/core/types.hpp"

namespace evsched::llm {

enum class Role { system, user, assistant, tool };

inline std::string to_string(Role r) {
    switch (r) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
        case Role::tool: return "tool";
    }
    return "?";
}

struct ToolCall {
    std::string id;
    std::string name;
    nlohmann::json arguments;  // always a parsed JSON object
};

struct ChatMessage {
    Role role = Role::user;
    std::string content;
    std::vector<ToolCall> tool_calls;
    std::string tool_call_id;  // set on tool-role messages, references a prior call
};

inline ChatMessage system_message(std::string text) {
    return {Role::system, std::move(text), {}, {}};
}
inline ChatMessage user_message(std::string text) { return {Role::user, std::move(text), {}, {}}; }

// Function-calling surface published to the model. `parameters` follows the
// JSON-schema object convention: {"type":"object","properties":{...},"required":[...]}.
struct ToolSpec {
    std::string name;
    std::string description;
    nlohmann::json parameters;
};

enum class BackendKind { mock, openai_compatible, ollama_native };

inline std::string to_string(BackendKind k) {
    switch (k) {
        case BackendKind::mock: return "mock";
        case BackendKind::openai_compatible: return "openai_compatible";
        case BackendKind::ollama_native: return "ollama_native";
    }
    return "?";
}

struct BackendConfig {
    BackendKind kind = BackendKind::mock;
    std::string base_url;      // e.g. http://localhost:11434
    std::string model_name;
    double temperature = 0.0;  // deterministic decoding by default
    double timeout_seconds = 30.0;
    int max_retries = 2;
    int max_inflight = 4;      // per-backend concurrency cap

    // Extra classification keywords honored by the mock backend only; lets
    // tests and offline runs extend the keyword table without a live model.
    std::vector<std::pair<OpClass, std::string>> mock_extra_keywords;
};

// Fills base_url/model_name from LLM_BASE_URL / LLM_MODEL when unset. Callers
// that received explicit flags skip this (flags win over environment).
inline BackendConfig with_env_overrides(BackendConfig cfg) {
    if (cfg.base_url.empty())
        if (const char* v = std::getenv("LLM_BASE_URL")) cfg.base_url = v;
    if (cfg.model_name.empty())
        if (const char* v = std::getenv("LLM_MODEL")) cfg.model_name = v;
    return cfg;
}

}  // namespace evsched::llm
