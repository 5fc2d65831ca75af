#include "slarag/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "slarag/error.hpp"
#include "slarag/text.hpp"

namespace slarag {

using nlohmann::json;

Embedding embed(std::string_view input, std::size_t dim) {
    if (dim < 8) throw Error(ErrorCode::ValidationError, "embedding dimension must be >= 8");
    Embedding signed_v(dim, 0.0);
    Embedding unsigned_v(dim, 0.0);
    auto tokens = text::word_tokens(input);
    if (tokens.empty()) return signed_v;
    for (const auto& tok : tokens) {
        std::uint64_t h = text::fnv1a64(tok);
        std::size_t bucket = h % dim;
        signed_v[bucket] += (h >> 63) ? -1.0 : 1.0;
        unsigned_v[bucket] += 1.0;
    }
    double norm = 0.0;
    for (double x : signed_v) norm += x * x;
    // Opposite-signed collisions can cancel completely; unsigned counts never do.
    Embedding& v = norm > 0.0 ? signed_v : unsigned_v;
    if (norm == 0.0)
        for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

double cosine_similarity(std::span<const double> q, std::span<const double> d) {
    if (q.size() != d.size())
        throw Error(ErrorCode::DimensionMismatch,
                    std::to_string(q.size()) + " vs " + std::to_string(d.size()));
    double dot = 0.0, nq = 0.0, nd = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        dot += q[i] * d[i];
        nq += q[i] * q[i];
        nd += d[i] * d[i];
    }
    if (nq == 0.0 || nd == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(nq) * std::sqrt(nd)), -1.0, 1.0);
}

DocumentStore::DocumentStore(std::string label, std::vector<Document> docs, std::size_t dim)
    : label_(std::move(label)), dim_(dim), docs_(std::move(docs)) {
    std::set<std::int64_t> uids;
    for (auto& doc : docs_) {
        if (!uids.insert(doc.uid).second)
            throw Error(ErrorCode::ValidationError, "duplicate uid " + std::to_string(doc.uid) + " in store " + label_);
        if (!doc.embedding) {
            doc.embedding = embed(doc.body, dim_);
            continue;
        }
        if (doc.embedding->size() != dim_)
            throw Error(ErrorCode::DimensionMismatch, "uid " + std::to_string(doc.uid) + " embedding has dimension " +
                                                          std::to_string(doc.embedding->size()));
        double norm = 0.0;
        for (double x : *doc.embedding) norm += x * x;
        norm = std::sqrt(norm);
        if (norm != 0.0 && std::abs(norm - 1.0) > 1e-9)
            throw Error(ErrorCode::ValidationError, "uid " + std::to_string(doc.uid) + " embedding is not unit norm");
    }
}

DocumentStore read_store(std::istream& in, std::string label, std::size_t dim) {
    std::vector<Document> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto j = json::parse(line);
            Document d;
            d.uid = j.at("uid").get<std::int64_t>();
            d.vertical = j.at("vertical").get<std::string>();
            d.body = j.at("body").get<std::string>();
            if (auto it = j.find("embedding"); it != j.end() && !it->is_null())
                d.embedding = it->get<Embedding>();
            docs.push_back(std::move(d));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return DocumentStore(std::move(label), std::move(docs), dim);
}

DocumentStore load_store(const std::filesystem::path& path, std::string label, std::size_t dim) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_store(in, std::move(label), dim);
}

void write_store(std::ostream& out, const DocumentStore& store, bool with_embeddings) {
    for (const auto& d : store.documents()) {
        json j{{"uid", d.uid}, {"vertical", d.vertical}, {"body", d.body}};
        if (with_embeddings && d.embedding) j["embedding"] = *d.embedding;
        out << j.dump() << '\n';
    }
}

std::size_t VerticalResults::doc_count() const {
    std::size_t n = 0;
    for (const auto& v : verticals) n += v.docs.size();
    return n;
}

VerticalResults search(std::string_view query, std::span<const DocumentStore* const> stores,
                       std::size_t top_k_per_vertical) {
    std::size_t dim = 0;
    bool any = false;
    for (const auto* s : stores) {
        if (s->empty()) continue;
        if (any && s->dim() != dim)
            throw Error(ErrorCode::DimensionMismatch, "stores disagree on embedding dimension");
        dim = s->dim();
        any = true;
    }
    if (!any) throw Error(ErrorCode::EmptyStore, "no documents to search");

    auto q = embed(query, dim);
    std::map<std::string, std::vector<ScoredDocument>> by_vertical;
    for (const auto* s : stores)
        for (const auto& doc : s->documents())
            by_vertical[doc.vertical].push_back({&doc, cosine_similarity(q, *doc.embedding)});

    VerticalResults out;
    for (auto& [label, docs] : by_vertical) {
        std::sort(docs.begin(), docs.end(), [](const ScoredDocument& a, const ScoredDocument& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.doc->uid < b.doc->uid;
        });
        if (docs.size() > top_k_per_vertical) docs.resize(top_k_per_vertical);
        if (!docs.empty()) out.verticals.push_back({label, std::move(docs)});
    }
    // Stable sort keeps label order (from the map) among equal best scores.
    std::stable_sort(out.verticals.begin(), out.verticals.end(), [](const VerticalHits& a, const VerticalHits& b) {
        return a.docs.front().score > b.docs.front().score;
    });
    return out;
}

VerticalResults search(std::string_view query, const DocumentStore& store, std::size_t top_k_per_vertical) {
    const DocumentStore* one[] = {&store};
    return search(query, std::span<const DocumentStore* const>(one), top_k_per_vertical);
}

} // namespace slarag
