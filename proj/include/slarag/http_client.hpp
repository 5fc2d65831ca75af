#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "slarag/relevance.hpp"

namespace slarag {

struct HttpEndpoint {
    std::string base_url;  // e.g. "http://127.0.0.1:8080"
    int timeout_ms = 30000;
    int retries = 0;
};

/// POSTs a JSON body and returns the parsed JSON reply. Connection failures
/// are retried `retries` times; a non-2xx status or an unparseable body is a
/// TransportError.
nlohmann::json post_json(const HttpEndpoint& endpoint, const std::string& path, const nlohmann::json& body);

// POST /generate {"prompt"} -> {"text"}
class HttpReasoner {
public:
    explicit HttpReasoner(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
    std::string generate(std::string_view prompt) const;

private:
    HttpEndpoint endpoint_;
};

// POST /score {"query","candidate"} -> {"score"}, clamped to [0,1]
class HttpScorer final : public RelevanceScorer {
public:
    explicit HttpScorer(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
    double score(std::string_view query, std::string_view candidate) const override;

private:
    HttpEndpoint endpoint_;
};

} // namespace slarag
