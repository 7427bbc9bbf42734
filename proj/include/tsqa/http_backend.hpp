#pragma once

#include <memory>
#include <string>

#include "tsqa/chat_backend.hpp"

namespace tsqa {

// Builds the chat-completions request body (messages, tools, temperature,
// seed, max_tokens) for a conversation. Exposed for wire-format tests.
nlohmann::json build_chat_request(const Conversation& conversation, const nlohmann::json& tools,
                                  const AgentConfig& config);

// Parses choices[0].message into text and/or tool calls. Throws a transport
// error on malformed payloads.
BackendReply parse_chat_response(const nlohmann::json& body);

// JSON-over-HTTP client for any chat-completions endpoint with function
// calling. The endpoint is a base URL ("http://host:port/v1"); the
// /chat/completions path is appended unless already present. The API key is
// read from the environment variable named in AgentConfig::credential_env.
class HttpBackend : public ChatBackend {
public:
    explicit HttpBackend(const AgentConfig& config);
    ~HttpBackend() override;

    BackendReply complete(const Conversation& conversation, const nlohmann::json& tools,
                          const AgentConfig& config) override;

    std::string name() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace tsqa
