#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "tsqa/http_backend.hpp"

#include <cstdlib>

#include "tsqa/error.hpp"

namespace tsqa {

nlohmann::json build_chat_request(const Conversation& conversation, const nlohmann::json& tools,
                                  const AgentConfig& config) {
    nlohmann::json messages = nlohmann::json::array();
    for (const Turn& turn : conversation) {
        nlohmann::json msg{{"role", to_string(turn.role)}};
        switch (turn.role) {
            case Turn::Role::assistant: {
                msg["content"] = turn.text.empty() ? nlohmann::json() : nlohmann::json(turn.text);
                if (!turn.tool_calls.empty()) {
                    nlohmann::json calls = nlohmann::json::array();
                    for (const auto& ref : turn.tool_calls) {
                        calls.push_back(
                            {{"id", ref.id},
                             {"type", "function"},
                             {"function",
                              {{"name", ref.call.tool_name},
                               // arguments travel as a JSON-encoded string
                               {"arguments", ref.call.raw_args.dump()}}}});
                    }
                    msg["tool_calls"] = calls;
                }
                break;
            }
            case Turn::Role::tool:
                msg["tool_call_id"] = turn.tool_call_id;
                msg["content"] = turn.text;
                break;
            default:
                msg["content"] = turn.text;
        }
        messages.push_back(std::move(msg));
    }

    nlohmann::json body{{"model", config.model},
                        {"messages", std::move(messages)},
                        {"temperature", config.temperature},
                        {"seed", config.seed},
                        {"max_tokens", config.max_generated_tokens}};
    if (!tools.empty()) {
        // Strip the local "returns" extension before it reaches the wire.
        nlohmann::json wire_tools = nlohmann::json::array();
        for (const auto& t : tools) {
            nlohmann::json copy = t;
            if (copy.contains("function")) copy["function"].erase("returns");
            wire_tools.push_back(std::move(copy));
        }
        body["tools"] = std::move(wire_tools);
    }
    return body;
}

BackendReply parse_chat_response(const nlohmann::json& body) {
    if (!body.contains("choices") || !body["choices"].is_array() || body["choices"].empty())
        throw transport_error("chat response has no choices: " + body.dump().substr(0, 200));
    const auto& message = body["choices"][0].at("message");
    BackendReply reply;
    if (message.contains("content") && message["content"].is_string())
        reply.text = message["content"].get<std::string>();
    if (message.contains("tool_calls")) {
        for (const auto& c : message["tool_calls"]) {
            ToolCallRef ref;
            ref.id = c.value("id", "call_" + std::to_string(reply.tool_calls.size()));
            const auto& fn = c.at("function");
            ref.call.tool_name = fn.at("name").get<std::string>();
            const std::string arguments = fn.value("arguments", "{}");
            try {
                ref.call.raw_args =
                    arguments.empty() ? nlohmann::json::object() : nlohmann::json::parse(arguments);
            } catch (const nlohmann::json::exception& e) {
                throw transport_error("unparseable tool_call arguments for " +
                                      ref.call.tool_name + ": " + e.what());
            }
            reply.tool_calls.push_back(std::move(ref));
        }
    }
    return reply;
}

struct HttpBackend::Impl {
    std::string base_url;
    std::string path;
    std::string model;
    std::string api_key;
};

namespace {

// Splits "http://host:port/v1" into client root and request path.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    if (endpoint.empty()) throw usage_error("real backend needs an endpoint URL");
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos)
        throw usage_error("endpoint must include a scheme, got '" + endpoint + "'");
    const auto path_start = endpoint.find('/', scheme_end + 3);
    std::string root = path_start == std::string::npos ? endpoint : endpoint.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "" : endpoint.substr(path_start);
    while (!path.empty() && path.back() == '/') path.pop_back();
    if (!path.ends_with("/chat/completions")) path += "/chat/completions";
    return {std::move(root), std::move(path)};
}

}  // namespace

HttpBackend::HttpBackend(const AgentConfig& config) : impl_(std::make_unique<Impl>()) {
    auto [root, path] = split_endpoint(config.endpoint);
    impl_->base_url = std::move(root);
    impl_->path = std::move(path);
    impl_->model = config.model;
    if (!config.credential_env.empty()) {
        const char* key = std::getenv(config.credential_env.c_str());
        if (key) impl_->api_key = key;
    }
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::name() const {
    return impl_->model.empty() ? "http" : impl_->model;
}

BackendReply HttpBackend::complete(const Conversation& conversation, const nlohmann::json& tools,
                                   const AgentConfig& config) {
    const nlohmann::json body = build_chat_request(conversation, tools, config);

    httplib::Client client(impl_->base_url);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(180, 0);
    httplib::Headers headers;
    if (!impl_->api_key.empty())
        headers.emplace("Authorization", "Bearer " + impl_->api_key);

    const auto res = client.Post(impl_->path, headers, body.dump(), "application/json");
    if (!res)
        throw transport_error("cannot reach " + impl_->base_url + impl_->path + ": " +
                              httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw transport_error("backend returned HTTP " + std::to_string(res->status) + ": " +
                              res->body.substr(0, 300));
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw transport_error(std::string("unparseable backend response: ") + e.what());
    }
    return parse_chat_response(parsed);
}

}  // namespace tsqa
