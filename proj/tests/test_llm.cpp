#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <thread>

#include "evsched/llm/client.hpp"
#include "evsched/rng.hpp"

using namespace evsched;
using namespace evsched::llm;

namespace {

ToolSpec classify_spec(std::vector<std::string> enum_values) {
    nlohmann::json ev = nlohmann::json::array();
    for (auto& v : enum_values) ev.push_back(v);
    return {"classify_op",
            "pick a class",
            nlohmann::json{{"type", "object"},
                           {"properties", {{"op_class", {{"type", "string"}, {"enum", ev}}}}},
                           {"required", nlohmann::json::array({"op_class"})}}};
}

// Tiny stub server for the wire tests. Serves canned bodies and captures the
// last request payload.
struct StubServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> hits{0};
    nlohmann::json last_request;
    std::mutex m;

    StubServer(const std::string& path, int status, std::string body) {
        server.Post(path, [this, status, body](const httplib::Request& req,
                                               httplib::Response& res) {
            {
                std::lock_guard<std::mutex> lk(m);
                last_request = nlohmann::json::parse(req.body, nullptr, false);
            }
            ++hits;
            res.status = status;
            res.set_content(body, "application/json");
        });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~StubServer() {
        server.stop();
        thread.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

}  // namespace

TEST_CASE("mock_rules: keyword table and priority order") {
    const std::vector<OpClass> three{OpClass::LP, OpClass::LMT, OpClass::MM};
    CHECK(mock_rules("Charge my EV while minimizing the electricity cost", three) == OpClass::LP);
    CHECK(mock_rules("asap please", {OpClass::LP, OpClass::LMT}) == OpClass::LMT);
    CHECK(mock_rules("hello", {OpClass::LP, OpClass::LMT}) == OpClass::LP);  // fallback
    // priority: cost keyword beats time keyword in the same sentence
    CHECK(mock_rules("charge fast but keep the cost down", three) == OpClass::LP);
    // candidate filtering: with LP absent the time keyword decides
    CHECK(mock_rules("charge fast but keep the cost down", {OpClass::LMT, OpClass::MM}) ==
          OpClass::LMT);
    // word-start matching: "lifetime" must not trip the time keyword
    CHECK(mock_rules("manage its battery lifetime", {OpClass::LP, OpClass::LMT}) == OpClass::LP);
    CHECK(mock_rules("find the cheapest hours", {OpClass::LP, OpClass::LMT}) == OpClass::LP);
    // extra keywords extend a class's list
    CHECK(mock_rules("only when it's financially wise", {OpClass::LP, OpClass::LMT},
                     {{OpClass::LP, "financially"}}) == OpClass::LP);
}

TEST_CASE("mock chat: classify tool call derived from the schema enum") {
    const std::vector<ChatMessage> messages{system_message("sys"),
                                            user_message("minimize my charging cost")};
    BackendConfig cfg;  // mock
    const ChatMessage reply = chat(cfg, messages, {classify_spec({"LP", "LMT"})});
    REQUIRE(reply.tool_calls.size() == 1);
    CHECK(reply.tool_calls[0].name == "classify_op");
    CHECK(reply.tool_calls[0].arguments["op_class"] == "LP");
}

TEST_CASE("mock chat is a pure function of messages and tools") {
    BackendConfig cfg;
    const std::vector<ChatMessage> messages{system_message("sys"), user_message("charge cheap")};
    const auto a = chat(cfg, messages, {classify_spec({"LP", "QP"})});
    const auto b = chat(cfg, messages, {classify_spec({"LP", "QP"})});
    CHECK(a.tool_calls[0].arguments == b.tool_calls[0].arguments);
    CHECK(a.content == b.content);
}

TEST_CASE("chat requires a leading system message") {
    BackendConfig cfg;
    CHECK_THROWS_AS(chat(cfg, {}, {}), Error);
    CHECK_THROWS_AS(chat(cfg, {user_message("hi")}, {}), Error);
}

TEST_CASE("extract_tool_call: direct hit, wrong name, enum violation") {
    const ToolSpec spec = classify_spec({"LP", "QP", "MM"});
    ChatMessage msg;
    msg.role = Role::assistant;
    msg.tool_calls.push_back({"1", "classify_op", {{"op_class", "MM"}}});
    CHECK(extract_tool_call(msg, spec).arguments["op_class"] == "MM");

    ChatMessage wrong;
    wrong.role = Role::assistant;
    wrong.tool_calls.push_back({"1", "other_tool", {{"op_class", "MM"}}});
    CHECK_THROWS_AS(extract_tool_call(wrong, spec), NoToolCall);

    ChatMessage bad;
    bad.role = Role::assistant;
    bad.tool_calls.push_back({"1", "classify_op", {{"op_class", "XX"}}});
    CHECK_THROWS_AS(extract_tool_call(bad, spec), SchemaViolation);
}

TEST_CASE("schema validation rejects every mutated payload") {
    const nlohmann::json schema{
        {"type", "object"},
        {"properties",
         {{"op_class", {{"type", "string"}, {"enum", nlohmann::json::array({"LP", "QP"})}}},
          {"count", {{"type", "integer"}}},
          {"scale", {{"type", "number"}}}}},
        {"required", nlohmann::json::array({"op_class", "count"})}};
    const nlohmann::json valid{{"op_class", "LP"}, {"count", 3}, {"scale", 1.5}};
    CHECK(validate_tool_arguments(schema, valid).empty());

    Rng rng(97);
    for (int k = 0; k < 300; ++k) {
        nlohmann::json mutated = valid;
        switch (rng.uniform_int(0, 3)) {
            case 0: mutated.erase("op_class"); break;
            case 1: mutated.erase("count"); break;
            case 2: mutated["op_class"] = rng.uniform_int(0, 1) ? "ZZ" : "lp"; break;
            case 3: mutated["count"] = rng.uniform(0.1, 0.9); break;
        }
        CHECK_FALSE(validate_tool_arguments(schema, mutated).empty());
    }
}

TEST_CASE("openai dialect: canned tool call surfaces unchanged, temperature 0 on the wire") {
    const nlohmann::json canned{
        {"choices",
         nlohmann::json::array(
             {{{"message",
                {{"role", "assistant"},
                 {"content", nullptr},
                 {"tool_calls",
                  nlohmann::json::array(
                      {{{"id", "call-7"},
                        {"type", "function"},
                        {"function",
                         {{"name", "classify_op"},
                          {"arguments", "{\"op_class\": \"MM\"}"}}}}})}}}}})}};
    StubServer stub("/v1/chat/completions", 200, canned.dump());

    BackendConfig cfg;
    cfg.kind = BackendKind::openai_compatible;
    cfg.base_url = stub.url();
    cfg.model_name = "test-model";
    const auto reply =
        chat(cfg, {system_message("sys"), user_message("hi")}, {classify_spec({"LP", "MM"})});
    REQUIRE(reply.tool_calls.size() == 1);
    CHECK(reply.tool_calls[0].id == "call-7");
    CHECK(reply.tool_calls[0].arguments["op_class"] == "MM");

    std::lock_guard<std::mutex> lk(stub.m);
    CHECK(stub.last_request["temperature"] == 0.0);
    CHECK(stub.last_request["model"] == "test-model");
    CHECK(stub.last_request["messages"][0]["role"] == "system");
    CHECK(stub.last_request["tools"][0]["function"]["name"] == "classify_op");
}

TEST_CASE("ollama dialect: native arguments object and options.temperature") {
    const nlohmann::json canned{
        {"message",
         {{"role", "assistant"},
          {"content", ""},
          {"tool_calls",
           nlohmann::json::array(
               {{{"function",
                  {{"name", "classify_op"}, {"arguments", {{"op_class", "LP"}}}}}}})}}}};
    StubServer stub("/api/chat", 200, canned.dump());

    BackendConfig cfg;
    cfg.kind = BackendKind::ollama_native;
    cfg.base_url = stub.url();
    cfg.model_name = "llama3";
    const auto reply =
        chat(cfg, {system_message("sys"), user_message("hi")}, {classify_spec({"LP", "MM"})});
    REQUIRE(reply.tool_calls.size() == 1);
    CHECK(reply.tool_calls[0].arguments["op_class"] == "LP");

    std::lock_guard<std::mutex> lk(stub.m);
    CHECK(stub.last_request["options"]["temperature"] == 0.0);
    CHECK(stub.last_request["stream"] == false);
}

TEST_CASE("persistent HTTP 500 exhausts retries into TransportError") {
    StubServer stub("/v1/chat/completions", 500, "{}");
    BackendConfig cfg;
    cfg.kind = BackendKind::openai_compatible;
    cfg.base_url = stub.url();
    cfg.max_retries = 2;
    CHECK_THROWS_AS(chat(cfg, {system_message("s"), user_message("u")}, {}), TransportError);
    CHECK(stub.hits == 3);  // initial try + 2 retries
}

TEST_CASE("4xx is a protocol error without retries") {
    StubServer stub("/v1/chat/completions", 400, "{}");
    BackendConfig cfg;
    cfg.kind = BackendKind::openai_compatible;
    cfg.base_url = stub.url();
    cfg.max_retries = 2;
    CHECK_THROWS_AS(chat(cfg, {system_message("s"), user_message("u")}, {}), ProtocolError);
    CHECK(stub.hits == 1);
}

TEST_CASE("empty reply is a model refusal; garbage is a protocol error") {
    {
        StubServer stub("/v1/chat/completions", 200,
                        R"({"choices":[{"message":{"role":"assistant","content":""}}]})");
        BackendConfig cfg;
        cfg.kind = BackendKind::openai_compatible;
        cfg.base_url = stub.url();
        CHECK_THROWS_AS(chat(cfg, {system_message("s"), user_message("u")}, {}), ModelRefusal);
    }
    {
        StubServer stub("/v1/chat/completions", 200, "this is not json");
        BackendConfig cfg;
        cfg.kind = BackendKind::openai_compatible;
        cfg.base_url = stub.url();
        CHECK_THROWS_AS(chat(cfg, {system_message("s"), user_message("u")}, {}), ProtocolError);
    }
}

TEST_CASE("environment variables override only unset backend fields") {
    setenv("LLM_BASE_URL", "http://envhost:1", 1);
    setenv("LLM_MODEL", "env-model", 1);
    BackendConfig cfg;
    cfg.base_url = "";
    cfg.model_name = "";
    const auto resolved = with_env_overrides(cfg);
    CHECK(resolved.base_url == "http://envhost:1");
    CHECK(resolved.model_name == "env-model");
    BackendConfig fixed;
    fixed.base_url = "http://flag:2";
    fixed.model_name = "flag-model";
    const auto kept = with_env_overrides(fixed);
    CHECK(kept.base_url == "http://flag:2");
    CHECK(kept.model_name == "flag-model");
    unsetenv("LLM_BASE_URL");
    unsetenv("LLM_MODEL");
}
