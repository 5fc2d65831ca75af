#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace slarag {

using Embedding = std::vector<double>;

struct Document {
    std::int64_t uid = 0;
    std::string vertical;
    std::string body;
    std::optional<Embedding> embedding;
};

/// Hashed bag-of-tokens embedding, L2-normalised. Deterministic; the zero
/// vector for text without tokens. dim must be >= 8.
Embedding embed(std::string_view text, std::size_t dim);

/// q.d / (|q||d|), clamped to [-1,1]; 0 when either side is the zero vector.
double cosine_similarity(std::span<const double> q, std::span<const double> d);

// An immutable collection of embedded documents under one policy label
// (e.g. "public", "sensitive").
class DocumentStore {
public:
    /// Embeds documents lacking an embedding; validates uid uniqueness,
    /// dimension and unit norm of supplied embeddings.
    DocumentStore(std::string label, std::vector<Document> docs, std::size_t dim);

    const std::string& label() const { return label_; }
    std::size_t dim() const { return dim_; }
    const std::vector<Document>& documents() const { return docs_; }
    bool empty() const { return docs_.empty(); }

private:
    std::string label_;
    std::size_t dim_;
    std::vector<Document> docs_;
};

DocumentStore read_store(std::istream& in, std::string label, std::size_t dim);
DocumentStore load_store(const std::filesystem::path& path, std::string label, std::size_t dim);
void write_store(std::ostream& out, const DocumentStore& store, bool with_embeddings = false);

// Points into the searched stores; valid while they are alive.
struct ScoredDocument {
    const Document* doc;
    double score;
};

struct VerticalHits {
    std::string label;
    std::vector<ScoredDocument> docs;
};

// Verticals ordered by descending best score (ties: label); docs by
// descending score (ties: ascending uid).
struct VerticalResults {
    std::vector<VerticalHits> verticals;

    std::size_t doc_count() const;
};

/// Exhaustive cosine scan over every store; keeps the top_k documents of each
/// vertical. Throws EmptyStore when no documents are searchable.
VerticalResults search(std::string_view query, std::span<const DocumentStore* const> stores,
                       std::size_t top_k_per_vertical);
VerticalResults search(std::string_view query, const DocumentStore& store, std::size_t top_k_per_vertical);

} // namespace slarag
