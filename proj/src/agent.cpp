#include "tsqa/agent.hpp"

#include <chrono>
#include <istream>
#include <ostream>

#include "tsqa/error.hpp"

namespace tsqa {

namespace {

bool is_blank(const std::string& text) {
    return text.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

const char* to_string(Turn::Role role) {
    switch (role) {
        case Turn::Role::system: return "system";
        case Turn::Role::user: return "user";
        case Turn::Role::assistant: return "assistant";
        case Turn::Role::tool: return "tool";
    }
    return "user";
}

std::vector<std::string> AgentConfig::validate() const {
    if (temperature < 0.0 || temperature > 2.0)
        throw usage_error("temperature must be in [0, 2]");
    if (transport_retries < 0 || empty_output_retries < 0)
        throw usage_error("retry counts must be non-negative");
    if (max_generated_tokens <= 0) throw usage_error("max_generated_tokens must be positive");
    if (context_budget_tokens <= 0) throw usage_error("context_budget_tokens must be positive");
    std::vector<std::string> warnings;
    if (context_budget_tokens < 8192)
        warnings.push_back("context budget " + std::to_string(context_budget_tokens) +
                           " is below 8192; tool parameters may not fit the context");
    return warnings;
}

void to_json(nlohmann::json& j, const QueryOutcome& o) {
    j = nlohmann::json{{"nlq", o.nlq},
                       {"nlr", o.nlr},
                       {"calls", o.calls},
                       {"results", o.results},
                       {"warnings", o.warnings},
                       {"wall_seconds", o.wall_seconds},
                       {"attempts", o.attempts}};
    if (o.failure) j["failure"] = *o.failure;
}

void from_json(const nlohmann::json& j, QueryOutcome& o) {
    j.at("nlq").get_to(o.nlq);
    j.at("nlr").get_to(o.nlr);
    o.calls = j.value("calls", std::vector<ToolCall>{});
    o.results = j.value("results", std::vector<ToolResult>{});
    o.warnings = j.value("warnings", std::vector<std::string>{});
    o.wall_seconds = j.value("wall_seconds", 0.0);
    o.attempts = j.value("attempts", 0);
    if (j.contains("failure")) o.failure = j["failure"].get<std::string>();
}

std::string build_system_prompt(const ToolRegistry&) {
    return "You are a financial time-series analysis assistant. Answer each question by "
           "calling the provided tools and then state the result in one or two clear "
           "sentences. Every quantitative value in your answer must come from a tool result; "
           "never invent numbers. If no tool applies, say so briefly.";
}

int estimate_tokens(std::string_view text) {
    return static_cast<int>((text.size() + 3) / 4);
}

std::optional<std::string> context_budget_warning(const ToolRegistry& registry,
                                                  const AgentConfig& config) {
    const int estimate = estimate_tokens(build_system_prompt(registry)) +
                         estimate_tokens(registry.export_schemas().dump());
    if (estimate < config.context_budget_tokens) return std::nullopt;
    return "system prompt plus tool schemas estimate to " + std::to_string(estimate) +
           " tokens, at or above the context budget of " +
           std::to_string(config.context_budget_tokens);
}

namespace {

BackendReply complete_with_retries(AgentContext& ctx, const Conversation& conversation,
                                   const nlohmann::json& tools) {
    int remaining = ctx.config.transport_retries;
    for (;;) {
        try {
            return ctx.backend->complete(conversation, tools, ctx.config);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::transport || remaining == 0) throw;
            --remaining;
        }
    }
}

}  // namespace

QueryOutcome answer(AgentContext& ctx, const std::string& nlq,
                    const std::optional<std::string>& item_id) {
    const auto started = std::chrono::steady_clock::now();

    QueryOutcome outcome;
    outcome.nlq = nlq;

    const nlohmann::json tools = ctx.registry->export_schemas();
    if (const auto warning = context_budget_warning(*ctx.registry, ctx.config))
        outcome.warnings.push_back(*warning);

    // item id resolution for stub routing: explicit id wins, else NLQ lookup
    std::optional<std::string> effective_item = item_id;
    if (!effective_item && ctx.router.mode() == ToolMode::stub && ctx.router.stubs())
        effective_item = ctx.router.stubs()->item_for_nlq(nlq);

    const int max_attempts = 1 + ctx.config.empty_output_retries;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        outcome.attempts = attempt;
        outcome.calls.clear();
        outcome.results.clear();
        outcome.failure.reset();

        Conversation conversation;
        conversation.push_back({Turn::Role::system, build_system_prompt(*ctx.registry), {}, {}});
        conversation.push_back({Turn::Role::user, nlq, {}, {}});

        std::string final_text;
        try {
            for (int round = 0; round <= ctx.config.max_tool_rounds; ++round) {
                BackendReply reply = complete_with_retries(ctx, conversation, tools);
                if (!reply.wants_tools()) {
                    final_text = reply.text;
                    break;
                }
                if (round == ctx.config.max_tool_rounds) {
                    outcome.warnings.push_back("tool round limit (" +
                                               std::to_string(ctx.config.max_tool_rounds) +
                                               ") reached; stopping this attempt");
                    break;
                }

                Turn assistant{Turn::Role::assistant, reply.text, {}, {}};
                std::vector<std::pair<std::string, std::string>> result_texts;
                for (auto& ref : reply.tool_calls) {
                    std::string result_text;
                    try {
                        ref.call = ctx.registry->make_call(ref.call.tool_name, ref.call.raw_args,
                                                           &outcome.warnings);
                        RoutedResult routed = ctx.router.route(ref.call, effective_item);
                        for (auto& w : routed.warnings) outcome.warnings.push_back(std::move(w));
                        result_text = routed.result.payload.dump();
                        outcome.calls.push_back(ref.call);
                        outcome.results.push_back(std::move(routed.result));
                    } catch (const Error& e) {
                        // Tool failures flow back to the model as the result
                        // text so it can still synthesize a response. A call
                        // that failed validation keeps its raw arguments, so
                        // it can never pose as a correctly filled one.
                        result_text = std::string("ERROR: ") + e.what();
                        if (ref.call.args.empty()) ref.call.args = ref.call.raw_args;
                        outcome.calls.push_back(ref.call);
                        ToolResult failed;
                        failed.tool_name = ref.call.tool_name;
                        failed.payload = {{"error", e.what()}};
                        outcome.results.push_back(std::move(failed));
                        outcome.warnings.push_back(ref.call.tool_name +
                                                   " failed: " + e.what());
                    }
                    assistant.tool_calls.push_back(ref);
                    result_texts.emplace_back(ref.id, std::move(result_text));
                }
                conversation.push_back(std::move(assistant));
                for (auto& [id, text] : result_texts)
                    conversation.push_back({Turn::Role::tool, std::move(text), {}, id});
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::transport) {
                outcome.failure = std::string("transport: ") + e.what();
                break;  // retrying empty output will not fix an unreachable backend
            }
            outcome.failure = e.what();
            break;
        }

        if (!is_blank(final_text)) {
            outcome.nlr = final_text;
            break;
        }
        outcome.failure = "empty output after " + std::to_string(attempt) + " attempt(s)";
    }

    outcome.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return outcome;
}

void chat_repl(AgentContext& ctx, std::istream& in, std::ostream& out, bool verbose) {
    out << "type a question, /quit to exit\n";
    std::string line;
    while (out << "> " << std::flush, std::getline(in, line)) {
        if (is_blank(line)) continue;
        if (line == "/quit" || line == "/exit") break;
        QueryOutcome outcome = answer(ctx, line);
        if (verbose) {
            for (size_t i = 0; i < outcome.calls.size(); ++i) {
                out << "[tool] " << outcome.calls[i].tool_name << " "
                    << outcome.calls[i].args.dump() << "\n";
                out << "       -> " << outcome.results[i].payload.dump() << "\n";
            }
            for (const auto& w : outcome.warnings) out << "[warn] " << w << "\n";
        }
        if (outcome.failure)
            out << "error: " << *outcome.failure << "\n";
        else
            out << outcome.nlr << "\n";
    }
    out << "bye\n";
}

}  // namespace tsqa
