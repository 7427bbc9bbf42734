#include "tsqa/mock_backend.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

#include "tsqa/error.hpp"

namespace tsqa {

MockScript load_mock_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open mock script: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(path + ": " + e.what());
    }
    if (!doc.is_array()) throw data_error(path + ": expected a JSON array of script entries");
    MockScript script;
    for (const auto& rec : doc) {
        MockScriptEntry entry;
        entry.match = rec.at("match").get<std::string>();
        entry.final_text = rec.value("final_text", "");
        if (rec.contains("calls"))
            for (const auto& c : rec["calls"]) entry.calls.push_back(c.get<ToolCall>());
        entry.empty_attempts = rec.value("empty_attempts", 0);
        entry.always_empty = rec.value("always_empty", false);
        entry.flake_empty_prob = rec.value("flake_empty_prob", 0.0);
        entry.corrupt_param = rec.value("corrupt_param", "");
        script.push_back(std::move(entry));
    }
    return script;
}

MockBackend::MockBackend(MockScript script, uint64_t seed) : seed_(seed) {
    for (auto& entry : script) {
        const std::string match = entry.match;
        entries_[match] = std::move(entry);
    }
}

const MockScriptEntry& MockBackend::entry_for(const Conversation& conversation) const {
    for (auto it = conversation.rbegin(); it != conversation.rend(); ++it) {
        if (it->role != Turn::Role::user) continue;
        const auto found = entries_.find(it->text);
        if (found == entries_.end())
            throw transport_error("mock backend: no script entry matches NLQ '" + it->text + "'");
        return found->second;
    }
    throw transport_error("mock backend: conversation has no user turn");
}

bool MockBackend::roll_empty(const MockScriptEntry& entry, int attempt) const {
    if (entry.always_empty) return true;
    if (attempt <= entry.empty_attempts) return true;
    if (entry.flake_empty_prob <= 0.0) return false;
    // Hash-derived uniform draw; independent of call order across items.
    const size_t h = std::hash<std::string>{}(entry.match + "#" + std::to_string(attempt) + "#" +
                                              std::to_string(seed_));
    const double u = static_cast<double>(h % 1000003) / 1000003.0;
    return u < entry.flake_empty_prob;
}

namespace {

nlohmann::json corrupt(const nlohmann::json& value) {
    if (value.is_number_integer() || value.is_number_unsigned())
        return value.get<int64_t>() + 91;
    if (value.is_number_float()) return value.get<double>() + 91.0;
    if (value.is_string()) return value.get<std::string>() + "X";
    return value;
}

}  // namespace

BackendReply MockBackend::complete(const Conversation& conversation, const nlohmann::json&,
                                   const AgentConfig&) {
    const MockScriptEntry& entry = entry_for(conversation);

    const bool calls_already_made =
        std::any_of(conversation.begin(), conversation.end(),
                    [](const Turn& t) { return t.role == Turn::Role::assistant &&
                                               !t.tool_calls.empty(); });

    int attempt = 0;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (!calls_already_made) ++attempts_[entry.match];
        attempt = attempts_[entry.match];
    }

    BackendReply reply;
    if (!entry.calls.empty() && !calls_already_made) {
        int index = 0;
        for (const auto& call : entry.calls) {
            ToolCallRef ref;
            ref.id = "call_" + std::to_string(index++);
            ref.call = call;
            if (!entry.corrupt_param.empty() && index == 1) {
                auto& raw = ref.call.raw_args;
                raw[entry.corrupt_param] = raw.contains(entry.corrupt_param)
                                               ? corrupt(raw[entry.corrupt_param])
                                               : nlohmann::json(9991);
            }
            reply.tool_calls.push_back(std::move(ref));
        }
        return reply;
    }

    reply.text = roll_empty(entry, attempt) ? "" : entry.final_text;
    return reply;
}

void MockBackend::reset_attempts() {
    std::lock_guard<std::mutex> lock(mutex_);
    attempts_.clear();
}

}  // namespace tsqa
