#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tsqa/chat_backend.hpp"

namespace tsqa {

// One scripted exchange: when the user turn equals `match` (an NLQ or an
// item id used as the NLQ in tests), emit `calls`, then `final_text`.
// The failure knobs drive the retry and multi-seed harness paths.
struct MockScriptEntry {
    std::string match;
    std::vector<ToolCall> calls;          // raw args, as an agent would emit them
    std::string final_text;

    int empty_attempts = 0;               // first N attempts return empty text
    bool always_empty = false;
    double flake_empty_prob = 0.0;        // seeded chance of empty text per attempt
    std::string corrupt_param;            // when set, mangle this arg on the first call
};

using MockScript = std::vector<MockScriptEntry>;

// Loads a JSON array of script entries
// [{match, calls, final_text, empty_attempts?, always_empty?, flake_empty_prob?,
//   corrupt_param?}].
MockScript load_mock_script(const std::string& path);

// Deterministic scripted backend. Per-entry randomness is derived from
// (seed, match, attempt), so runs are reproducible regardless of query
// order or parallelism.
class MockBackend : public ChatBackend {
public:
    explicit MockBackend(MockScript script, uint64_t seed = 1);

    BackendReply complete(const Conversation& conversation, const nlohmann::json& tools,
                          const AgentConfig& config) override;

    std::string name() const override { return "mock"; }

    void reset_attempts();

private:
    const MockScriptEntry& entry_for(const Conversation& conversation) const;
    bool roll_empty(const MockScriptEntry& entry, int attempt) const;

    std::map<std::string, MockScriptEntry> entries_;
    uint64_t seed_;
    std::map<std::string, int> attempts_;
    mutable std::mutex mutex_;
};

}  // namespace tsqa
