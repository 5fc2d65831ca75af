#include "slarag/preprocess.hpp"

#include <algorithm>
#include <array>

#include "slarag/error.hpp"
#include "slarag/text.hpp"

namespace slarag {

namespace {

constexpr std::array<std::pair<PreprocessKind, std::string_view>, 5> kKindNames{{
    {PreprocessKind::ThresholdControl, "threshold_control"},
    {PreprocessKind::VerticalThreshold, "vertical_threshold"},
    {PreprocessKind::AggressiveThreshold, "aggressive_threshold"},
    {PreprocessKind::RerankThenThreshold, "rerank_threshold"},
    {PreprocessKind::RerankThenVerticalThreshold, "rerank_vertical_threshold"},
}};

struct Candidate {
    const Document* doc;
    double rank_score;
};

} // namespace

std::string_view to_string(PreprocessKind kind) {
    for (const auto& [k, n] : kKindNames)
        if (k == kind) return n;
    return "threshold_control";
}

std::optional<PreprocessKind> preprocess_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames)
        if (n == name) return k;
    return std::nullopt;
}

bool is_rerank(PreprocessKind kind) {
    return kind == PreprocessKind::RerankThenThreshold || kind == PreprocessKind::RerankThenVerticalThreshold;
}

bool is_vertical(PreprocessKind kind) {
    return kind == PreprocessKind::VerticalThreshold || kind == PreprocessKind::RerankThenVerticalThreshold;
}

PreprocessStrategy PreprocessStrategy::defaults(PreprocessKind kind) {
    PreprocessStrategy s;
    s.kind = kind;
    s.token_budget = kind == PreprocessKind::AggressiveThreshold ? 6000 : 8000;
    if (is_vertical(kind)) s.vertical_limit = 2;
    return s;
}

std::vector<std::string> whitespace_tokens(std::string_view text) {
    auto views = text::split_whitespace(text);
    return {views.begin(), views.end()};
}

std::size_t count_tokens(std::string_view text) { return text::split_whitespace(text).size(); }

std::size_t count_tokens(std::string_view text, const TokenSplitter& splitter) { return splitter(text).size(); }

std::string ContextEntry::text() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

std::vector<std::int64_t> ContextWindow::uids() const {
    std::vector<std::int64_t> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.uid);
    return out;
}

ContextWindow apply_strategy(std::string_view query, const VerticalResults& results,
                             const PreprocessStrategy& strategy, const RelevanceScorer* scorer,
                             const TokenSplitter& splitter) {
    if (is_rerank(strategy.kind) && scorer == nullptr)
        throw Error(ErrorCode::MissingScorer, std::string(to_string(strategy.kind)) + " needs a relevance scorer");

    std::size_t vertical_count = results.verticals.size();
    if (is_vertical(strategy.kind))
        vertical_count = std::min(vertical_count, strategy.effective_vertical_limit());

    std::vector<Candidate> order;
    for (std::size_t v = 0; v < vertical_count; ++v)
        for (const auto& hit : results.verticals[v].docs) order.push_back({hit.doc, hit.score});

    if (is_rerank(strategy.kind)) {
        for (auto& c : order) c.rank_score = scorer->score(query, c.doc->body);
        std::stable_sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
            if (a.rank_score != b.rank_score) return a.rank_score > b.rank_score;
            return a.doc->uid < b.doc->uid;
        });
    }

    ContextWindow window;
    for (const auto& c : order) {
        if (window.total_tokens >= strategy.token_budget) break;
        auto tokens = splitter(c.doc->body);
        if (tokens.empty()) continue;
        std::size_t room = strategy.token_budget - window.total_tokens;
        if (tokens.size() > room) tokens.resize(room);
        window.total_tokens += tokens.size();
        window.entries.push_back({c.doc->uid, c.doc->vertical, std::move(tokens)});
    }
    return window;
}

} // namespace slarag
