#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tsqa {

// Generation settings for one agent. Defaults follow the values that proved
// sufficient in benchmarking: an 8192-token context, 512 generated tokens,
// 2 transport retries and 5 whole-query retries on empty output.
struct AgentConfig {
    double temperature = 0.0;
    uint64_t seed = 1;
    int context_budget_tokens = 8192;
    int max_generated_tokens = 512;
    int transport_retries = 2;
    int empty_output_retries = 5;
    int max_tool_rounds = 4;

    std::string endpoint;             // chat-completions base URL (real backend)
    std::string model;                // model name sent on the wire
    std::string credential_env;       // environment variable holding the API key

    // Hard-validates ranges and returns soft warnings (e.g. a context budget
    // below 8192, which drops tool parameters on real backends).
    std::vector<std::string> validate() const;
};

}  // namespace tsqa
