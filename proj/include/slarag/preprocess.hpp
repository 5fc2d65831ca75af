#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slarag/relevance.hpp"
#include "slarag/retrieval.hpp"

namespace slarag {

enum class PreprocessKind {
    ThresholdControl,
    VerticalThreshold,
    AggressiveThreshold,
    RerankThenThreshold,
    RerankThenVerticalThreshold,
};

std::string_view to_string(PreprocessKind kind);
std::optional<PreprocessKind> preprocess_kind_from_string(std::string_view name);

bool is_rerank(PreprocessKind kind);
bool is_vertical(PreprocessKind kind);

struct PreprocessStrategy {
    PreprocessKind kind = PreprocessKind::ThresholdControl;
    std::size_t token_budget = 8000;
    std::optional<std::size_t> vertical_limit;

    /// Budget 8000 (6000 for AggressiveThreshold); vertical kinds keep the top 2 verticals.
    static PreprocessStrategy defaults(PreprocessKind kind);
    std::size_t effective_vertical_limit() const { return vertical_limit.value_or(2); }
};

// Splits text into tokens; the default is whitespace splitting.
using TokenSplitter = std::function<std::vector<std::string>(std::string_view)>;

std::vector<std::string> whitespace_tokens(std::string_view text);
std::size_t count_tokens(std::string_view text);
std::size_t count_tokens(std::string_view text, const TokenSplitter& splitter);

struct ContextEntry {
    std::int64_t uid;
    std::string vertical;
    std::vector<std::string> tokens;

    std::string text() const;
};

struct ContextWindow {
    std::vector<ContextEntry> entries;
    std::size_t total_tokens = 0;

    std::vector<std::int64_t> uids() const;
};

/// Fits retrieved documents into the strategy's token budget. Documents are
/// taken in vertical-rank order (or relevance order for the rerank kinds) and
/// the document that crosses the budget is cut mid-document. Rerank kinds
/// require a scorer (MissingScorer otherwise).
ContextWindow apply_strategy(std::string_view query, const VerticalResults& results,
                             const PreprocessStrategy& strategy, const RelevanceScorer* scorer = nullptr,
                             const TokenSplitter& splitter = whitespace_tokens);

} // namespace slarag
