#pragma once

#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#ifdef _res
#undef _res  // glibc resolv.h macro; it mangles Eigen parameter names
#endif
#include <nlohmann/json.hpp>

#include "evsched/errors.hpp"
#include "evsched/llm/chat.hpp"
#include "evsched/llm/mock.hpp"

namespace evsched::llm {

namespace detail {

// Counting semaphore capping in-flight requests per backend URL. The mock
// backend never touches it.
class Limiter {
  public:
    explicit Limiter(int slots) : slots_(slots) {}
    void acquire() {
        std::unique_lock<std::mutex> lk(m_);
        cv_.wait(lk, [&] { return slots_ > 0; });
        --slots_;
    }
    void release() {
        {
            std::lock_guard<std::mutex> lk(m_);
            ++slots_;
        }
        cv_.notify_one();
    }

  private:
    std::mutex m_;
    std::condition_variable cv_;
    int slots_;
};

inline std::shared_ptr<Limiter> limiter_for(const BackendConfig& cfg) {
    static std::mutex reg_mutex;
    static std::map<std::string, std::shared_ptr<Limiter>> registry;
    std::lock_guard<std::mutex> lk(reg_mutex);
    auto& slot = registry[cfg.base_url];
    if (!slot) slot = std::make_shared<Limiter>(std::max(cfg.max_inflight, 1));
    return slot;
}

struct LimiterGuard {
    std::shared_ptr<Limiter> l;
    explicit LimiterGuard(std::shared_ptr<Limiter> lim) : l(std::move(lim)) { l->acquire(); }
    ~LimiterGuard() { l->release(); }
};

inline nlohmann::json messages_to_json(const std::vector<ChatMessage>& messages,
                                       bool arguments_as_string) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : messages) {
        nlohmann::json jm{{"role", to_string(m.role)}, {"content", m.content}};
        if (!m.tool_calls.empty()) {
            nlohmann::json calls = nlohmann::json::array();
            for (const auto& c : m.tool_calls) {
                nlohmann::json fn{{"name", c.name}};
                fn["arguments"] = arguments_as_string ? nlohmann::json(c.arguments.dump())
                                                      : c.arguments;
                calls.push_back({{"id", c.id}, {"type", "function"}, {"function", fn}});
            }
            jm["tool_calls"] = calls;
        }
        if (!m.tool_call_id.empty()) jm["tool_call_id"] = m.tool_call_id;
        arr.push_back(jm);
    }
    return arr;
}

inline nlohmann::json tools_to_json(const std::vector<ToolSpec>& tools) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : tools)
        arr.push_back({{"type", "function"},
                       {"function",
                        {{"name", t.name}, {"description", t.description},
                         {"parameters", t.parameters}}}});
    return arr;
}

inline ToolCall parse_tool_call(const nlohmann::json& jc) {
    ToolCall call;
    call.id = jc.value("id", "");
    const auto& fn = jc.at("function");
    call.name = fn.at("name").get<std::string>();
    const auto& args = fn.at("arguments");
    if (args.is_string()) {
        call.arguments = nlohmann::json::parse(args.get<std::string>(), nullptr, false);
        if (call.arguments.is_discarded())
            throw ProtocolError("tool call arguments are not valid JSON");
    } else {
        call.arguments = args;
    }
    return call;
}

inline ChatMessage http_chat(const BackendConfig& cfg, const std::vector<ChatMessage>& messages,
                             const std::vector<ToolSpec>& tools) {
    const bool openai = cfg.kind == BackendKind::openai_compatible;
    nlohmann::json body;
    std::string path;
    if (openai) {
        path = "/v1/chat/completions";
        body = {{"model", cfg.model_name},
                {"temperature", cfg.temperature},
                {"messages", messages_to_json(messages, true)}};
    } else {
        path = "/api/chat";
        body = {{"model", cfg.model_name},
                {"options", {{"temperature", cfg.temperature}}},
                {"stream", false},
                {"messages", messages_to_json(messages, false)}};
    }
    if (!tools.empty()) body["tools"] = tools_to_json(tools);

    httplib::Client cli(cfg.base_url);
    cli.set_connection_timeout(std::chrono::milliseconds(
        static_cast<int64_t>(cfg.timeout_seconds * 1000)));
    cli.set_read_timeout(std::chrono::milliseconds(
        static_cast<int64_t>(cfg.timeout_seconds * 1000)));

    httplib::Result res;
    std::string last_error;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(100LL << (attempt - 1)));
        res = cli.Post(path, body.dump(), "application/json");
        if (!res) {
            last_error = "connection to " + cfg.base_url + " failed";
            continue;
        }
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        break;
    }
    if (!res || res->status >= 500)
        throw TransportError("chat request failed after retries: " + last_error);
    if (res->status >= 400)
        throw ProtocolError("chat request rejected: HTTP " + std::to_string(res->status));

    nlohmann::json resp = nlohmann::json::parse(res->body, nullptr, false);
    if (resp.is_discarded()) throw ProtocolError("backend returned malformed JSON");

    ChatMessage out;
    out.role = Role::assistant;
    try {
        const nlohmann::json& msg =
            openai ? resp.at("choices").at(0).at("message") : resp.at("message");
        if (msg.contains("content") && msg["content"].is_string())
            out.content = msg["content"].get<std::string>();
        if (msg.contains("tool_calls"))
            for (const auto& jc : msg["tool_calls"]) out.tool_calls.push_back(parse_tool_call(jc));
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("unexpected response shape: ") + e.what());
    }
    if (out.content.empty() && out.tool_calls.empty())
        throw ModelRefusal("model returned neither content nor a tool call");
    return out;
}

}  // namespace detail

// One chat round against the configured backend. Mock runs in-process and is
// a pure function of (messages, tools); HTTP backends retry transport
// failures with exponential backoff.
inline ChatMessage chat(const BackendConfig& cfg, const std::vector<ChatMessage>& messages,
                        const std::vector<ToolSpec>& tools = {}) {
    if (messages.empty() || messages.front().role != Role::system)
        throw Error("chat: messages must be non-empty and start with a system message");
    if (cfg.kind == BackendKind::mock) return mock_chat(messages, tools, cfg.mock_extra_keywords);
    detail::LimiterGuard guard(detail::limiter_for(cfg));
    return detail::http_chat(cfg, messages, tools);
}

// Structural validation of tool-call arguments against a declared schema.
// Returns one message per offending field.
inline std::vector<std::string> validate_tool_arguments(const nlohmann::json& schema,
                                                        const nlohmann::json& args) {
    std::vector<std::string> problems;
    if (!args.is_object()) {
        problems.push_back("arguments: expected a JSON object");
        return problems;
    }
    if (schema.contains("required"))
        for (const auto& req : schema["required"])
            if (!args.contains(req.get<std::string>()))
                problems.push_back(req.get<std::string>() + ": required key missing");
    if (!schema.contains("properties")) return problems;
    for (const auto& [key, spec] : schema["properties"].items()) {
        if (!args.contains(key)) continue;
        const auto& v = args[key];
        const std::string type = spec.value("type", "");
        const bool ok = type == "string"    ? v.is_string()
                        : type == "number"  ? v.is_number()
                        : type == "integer" ? v.is_number_integer()
                        : type == "boolean" ? v.is_boolean()
                        : type == "array"   ? v.is_array()
                        : type == "object"  ? v.is_object()
                                            : true;
        if (!ok) {
            problems.push_back(key + ": expected " + type);
            continue;
        }
        if (spec.contains("enum")) {
            bool found = false;
            for (const auto& e : spec["enum"])
                if (e == v) found = true;
            if (!found) problems.push_back(key + ": value not in enum");
        }
    }
    return problems;
}

// First tool call on `msg` matching the expected tool, with arguments
// validated against the declared schema.
inline ToolCall extract_tool_call(const ChatMessage& msg, const ToolSpec& expected) {
    for (const auto& call : msg.tool_calls) {
        if (call.name != expected.name) continue;
        auto problems = validate_tool_arguments(expected.parameters, call.arguments);
        if (!problems.empty()) {
            std::string what = "tool call " + call.name + " violates its schema:";
            for (const auto& p : problems) what += " [" + p + "]";
            throw SchemaViolation(what, std::move(problems));
        }
        return call;
    }
    throw NoToolCall("no tool call named " + expected.name + " in the assistant message");
}

}  // namespace evsched::llm
