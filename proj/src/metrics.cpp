#include "tsqa/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <set>

#include "tsqa/error.hpp"

namespace tsqa {

namespace {

bool is_blank(const std::string& text) {
    return text.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

// Small embedded stop-word list; enough to keep glue words out of the
// divergence denominator.
const std::set<std::string>& stop_words() {
    static const std::set<std::string> words{
        "a",    "an",   "and",  "are",  "as",    "at",   "be",   "been", "between", "by",
        "for",  "from", "has",  "have", "in",    "is",   "it",   "its",  "of",      "on",
        "or",   "over", "past", "per",  "the",   "their", "there", "this", "to",     "under",
        "was",  "were", "with", "within", "during", "across", "that", "than", "these", "which"};
    return words;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.empty()) return;
        // strip sign/dot punctuation that isn't part of a number
        while (!current.empty() && (current.back() == '.' || current.back() == '-' ||
                                    current.back() == '+'))
            current.pop_back();
        while (!current.empty() && (current.front() == '.' || current.front() == '+'))
            current.erase(current.begin());
        if (!current.empty() && current != "-") tokens.push_back(lower(current));
        current.clear();
    };
    for (const char ch : text) {
        const auto uch = static_cast<unsigned char>(ch);
        if (std::isalnum(uch) || ch == '.' || ch == '-' || ch == '+') {
            current.push_back(ch);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::optional<double> parse_number_token(const std::string& token) {
    if (token.empty()) return std::nullopt;
    std::string t = token;
    if (t.front() == '+') t.erase(t.begin());
    double value = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) return std::nullopt;
    return value;
}

std::string canonical_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

bool text_contains_keyword(const std::string& text, const std::string& keyword) {
    if (const auto number = parse_number_token(keyword)) {
        const std::string canon = canonical_number(*number);
        for (const auto& token : tokenize(text)) {
            if (const auto v = parse_number_token(token))
                if (canonical_number(*v) == canon) return true;
        }
        return false;
    }
    const std::string haystack = lower(text);
    const std::string needle = lower(keyword);
    return haystack.find(needle) != std::string::npos;
}

double metric_rr(const QueryOutcome& outcome) { return is_blank(outcome.nlr) ? 0.0 : 1.0; }

double metric_ma(const QueryOutcome& outcome, const BenchmarkItem& item,
                 const ToolRegistry& registry) {
    std::vector<std::string> expected;
    for (const auto& call : item.expected_calls) {
        try {
            expected.push_back(
                canonical_signature(registry.make_call(call.tool_name, call.raw_args)));
        } catch (const Error&) {
            // a ground-truth call that does not validate can never be matched
            expected.push_back("invalid:" + call.tool_name);
        }
    }
    std::vector<std::string> actual;
    for (const auto& call : outcome.calls) actual.push_back(canonical_signature(call));

    std::sort(expected.begin(), expected.end());
    std::sort(actual.begin(), actual.end());
    return expected == actual ? 1.0 : 0.0;
}

double fallback_la(const std::string& actual_nlr, const std::vector<std::string>& keywords) {
    if (keywords.empty()) return 1.0;
    size_t hits = 0;
    for (const auto& kw : keywords)
        if (text_contains_keyword(actual_nlr, kw)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(keywords.size());
}

namespace {

// All tokens a faithful answer may draw from: the expected response plus the
// canned tool payloads (numbers canonicalized).
std::set<std::string> supported_tokens(const std::string& expected_nlr,
                                       const std::vector<ToolResult>& stub_results) {
    std::set<std::string> supported;
    auto add_tokens = [&](const std::string& text) {
        for (auto& token : tokenize(text)) {
            if (const auto v = parse_number_token(token))
                supported.insert(canonical_number(*v));
            else
                supported.insert(std::move(token));
        }
    };
    add_tokens(expected_nlr);
    for (const auto& result : stub_results) {
        add_tokens(result.tool_name);
        // flatten payload values into text
        std::function<void(const nlohmann::json&)> walk = [&](const nlohmann::json& v) {
            if (v.is_string()) {
                add_tokens(v.get<std::string>());
            } else if (v.is_number()) {
                supported.insert(canonical_number(v.get<double>()));
            } else if (v.is_array()) {
                for (const auto& e : v) walk(e);
            } else if (v.is_object()) {
                for (const auto& [k, e] : v.items()) {
                    add_tokens(k);
                    walk(e);
                }
            }
        };
        walk(result.payload);
    }
    return supported;
}

}  // namespace

double fallback_hr(const std::string& actual_nlr, const std::string& expected_nlr,
                   const std::vector<ToolResult>& stub_results) {
    const auto supported = supported_tokens(expected_nlr, stub_results);
    size_t content = 0;
    size_t unsupported = 0;
    for (auto& token : tokenize(actual_nlr)) {
        std::string canon = token;
        if (const auto v = parse_number_token(token)) canon = canonical_number(*v);
        else if (stop_words().count(token)) continue;
        ++content;
        if (!supported.count(canon)) ++unsupported;
    }
    if (content == 0) return 0.0;  // nothing asserted, nothing diverged
    return static_cast<double>(unsupported) / static_cast<double>(content);
}

LlmJudge::LlmJudge(ChatBackend& backend, AgentConfig config, std::string accuracy_rubric,
                   std::string divergence_rubric)
    : backend_(&backend),
      config_(std::move(config)),
      accuracy_rubric_(std::move(accuracy_rubric)),
      divergence_rubric_(std::move(divergence_rubric)) {}

namespace {

std::string substitute(std::string text, const std::string& placeholder,
                       const std::string& value) {
    const std::string token = "{{" + placeholder + "}}";
    size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
    }
    return text;
}

std::optional<double> first_score(const std::string& reply) {
    for (const auto& token : tokenize(reply)) {
        if (const auto v = parse_number_token(token)) {
            if (*v >= 0.0 && *v <= 1.0) return *v;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<double> LlmJudge::run_rubric(const std::string& rubric, const std::string& actual,
                                           const std::string& expected,
                                           const std::string& context) {
    std::string prompt = substitute(rubric, "actual", actual);
    prompt = substitute(prompt, "expected", expected);
    prompt = substitute(prompt, "context", context);
    Conversation conversation;
    conversation.push_back({Turn::Role::user, prompt, {}, {}});
    try {
        const BackendReply reply =
            backend_->complete(conversation, nlohmann::json::array(), config_);
        return first_score(reply.text);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::transport) return std::nullopt;
        throw;
    }
}

std::optional<double> LlmJudge::assess_accuracy(const std::string& actual,
                                                const std::string& expected) {
    return run_rubric(accuracy_rubric_, actual, expected, "");
}

std::optional<double> LlmJudge::assess_divergence(const std::string& actual,
                                                  const std::string& expected,
                                                  const std::string& context) {
    return run_rubric(divergence_rubric_, actual, expected, context);
}

JudgedScore metric_la(const QueryOutcome& outcome, const BenchmarkItem& item, Judge* judge) {
    if (judge) {
        if (const auto score = judge->assess_accuracy(outcome.nlr, item.expected_nlr))
            return {std::clamp(*score, 0.0, 1.0), false};
    }
    return {fallback_la(outcome.nlr, item.expected_keywords), true};
}

JudgedScore metric_hr(const QueryOutcome& outcome, const BenchmarkItem& item, Judge* judge) {
    if (judge) {
        std::string context = item.expected_nlr;
        for (const auto& r : item.stub_results) context += "\n" + r.payload.dump();
        if (const auto score = judge->assess_divergence(outcome.nlr, item.expected_nlr, context))
            return {std::clamp(*score, 0.0, 1.0), false};
    }
    return {fallback_hr(outcome.nlr, item.expected_nlr, item.stub_results), true};
}

}  // namespace tsqa
