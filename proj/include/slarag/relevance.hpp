#pragma once

#include <string_view>

namespace slarag {

// Scores how relevant a candidate text (a document body or an answer) is to
// a query. Implementations return values in [0,1] and must be safe to call
// concurrently.
class RelevanceScorer {
public:
    virtual ~RelevanceScorer() = default;
    virtual double score(std::string_view query, std::string_view candidate) const = 0;
};

/// Jaccard similarity of the lowercased unique token sets; 0 when both are empty.
double surrogate_relevance(std::string_view query, std::string_view answer);

class JaccardScorer final : public RelevanceScorer {
public:
    double score(std::string_view query, std::string_view candidate) const override {
        return surrogate_relevance(query, candidate);
    }
};

class ConstantScorer final : public RelevanceScorer {
public:
    explicit ConstantScorer(double value) : value_(value) {}
    double score(std::string_view, std::string_view) const override { return value_; }

private:
    double value_;
};

} // namespace slarag
