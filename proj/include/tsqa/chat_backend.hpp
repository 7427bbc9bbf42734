#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsqa/agent_config.hpp"
#include "tsqa/tool_call.hpp"

namespace tsqa {

// One tool invocation inside an assistant turn, carrying the wire id that
// the matching tool-result turn references.
struct ToolCallRef {
    std::string id;
    ToolCall call;
};

struct Turn {
    enum class Role { system, user, assistant, tool };

    Role role = Role::user;
    std::string text;
    std::vector<ToolCallRef> tool_calls;  // assistant turns only
    std::string tool_call_id;             // tool turns only
};

using Conversation = std::vector<Turn>;

const char* to_string(Turn::Role role);

// What the model produced for one request: tool calls to run, or final text.
struct BackendReply {
    std::string text;
    std::vector<ToolCallRef> tool_calls;

    bool wants_tools() const { return !tool_calls.empty(); }
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;

    // Sends the conversation plus tool declarations; throws transport errors.
    virtual BackendReply complete(const Conversation& conversation,
                                  const nlohmann::json& tools, const AgentConfig& config) = 0;

    virtual std::string name() const = 0;
};

}  // namespace tsqa
