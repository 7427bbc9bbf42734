#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsqa/agent.hpp"
#include "tsqa/benchmark.hpp"

namespace tsqa {

// --------------------------------------------------------------------------
// Text helpers shared by the deterministic scorers
// --------------------------------------------------------------------------

// Lowercase word/number tokens; numbers keep '.', '-' and '+' so "−12.5"
// survives as one token.
std::vector<std::string> tokenize(const std::string& text);

std::optional<double> parse_number_token(const std::string& token);

// Shortest round-trip decimal form, so "5", "5.0" and "5.00" coincide.
std::string canonical_number(double value);

// Case-insensitive substring match; a keyword that parses as a number is
// instead matched against the canonicalized numbers found in the text.
bool text_contains_keyword(const std::string& text, const std::string& keyword);

// --------------------------------------------------------------------------
// Metrics
// --------------------------------------------------------------------------

// 1.0 iff the response is non-blank after trimming whitespace.
double metric_rr(const QueryOutcome& outcome);

// 1.0 iff the multiset of the agent's filled calls equals the ground-truth
// multiset (expected calls are filled through the registry first).
double metric_ma(const QueryOutcome& outcome, const BenchmarkItem& item,
                 const ToolRegistry& registry);

// Deterministic fallbacks: keyword coverage for accuracy, unsupported
// content-token fraction for divergence.
double fallback_la(const std::string& actual_nlr, const std::vector<std::string>& keywords);
double fallback_hr(const std::string& actual_nlr, const std::string& expected_nlr,
                   const std::vector<ToolResult>& stub_results);

// Optional judge: scores come from a model; nullopt means "fall back".
class Judge {
public:
    virtual ~Judge() = default;
    virtual std::optional<double> assess_accuracy(const std::string& actual,
                                                  const std::string& expected) = 0;
    virtual std::optional<double> assess_divergence(const std::string& actual,
                                                    const std::string& expected,
                                                    const std::string& context) = 0;
};

// Judge backed by a chat backend and two rubric prompts. The placeholders
// {{actual}}, {{expected}} and {{context}} are substituted; the reply must
// contain a score in [0, 1] (first number found). Transport failures yield
// nullopt so callers can fall back.
class LlmJudge : public Judge {
public:
    LlmJudge(ChatBackend& backend, AgentConfig config, std::string accuracy_rubric,
             std::string divergence_rubric);

    std::optional<double> assess_accuracy(const std::string& actual,
                                          const std::string& expected) override;
    std::optional<double> assess_divergence(const std::string& actual,
                                            const std::string& expected,
                                            const std::string& context) override;

private:
    std::optional<double> run_rubric(const std::string& rubric, const std::string& actual,
                                     const std::string& expected, const std::string& context);

    ChatBackend* backend_;
    AgentConfig config_;
    std::string accuracy_rubric_;
    std::string divergence_rubric_;
};

struct JudgedScore {
    double score = 0.0;
    bool used_fallback = true;
};

// Judge-mode accuracy with deterministic fallback; judge == nullptr means
// fallback only. Callers must ensure rr = 1 before scoring.
JudgedScore metric_la(const QueryOutcome& outcome, const BenchmarkItem& item, Judge* judge);
JudgedScore metric_hr(const QueryOutcome& outcome, const BenchmarkItem& item, Judge* judge);

}  // namespace tsqa
