#include "slarag/http_client.hpp"

#include <algorithm>

#include <httplib.h>

#include "slarag/error.hpp"

namespace slarag {

using nlohmann::json;

json post_json(const HttpEndpoint& endpoint, const std::string& path, const json& body) {
    httplib::Client client(endpoint.base_url);
    auto seconds = endpoint.timeout_ms / 1000;
    auto micros = (endpoint.timeout_ms % 1000) * 1000;
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);

    std::string payload = body.dump();
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= std::max(0, endpoint.retries); ++attempt) {
        auto res = client.Post(path, payload, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300)
            throw Error(ErrorCode::TransportError,
                        endpoint.base_url + path + " returned HTTP " + std::to_string(res->status));
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::TransportError, endpoint.base_url + path + " sent invalid JSON: " + e.what());
        }
    }
    throw Error(ErrorCode::TransportError, endpoint.base_url + path + ": " + last_error);
}

std::string HttpReasoner::generate(std::string_view prompt) const {
    auto reply = post_json(endpoint_, "/generate", json{{"prompt", std::string(prompt)}});
    auto it = reply.find("text");
    if (it == reply.end() || !it->is_string())
        throw Error(ErrorCode::TransportError, "/generate reply lacks a string 'text' field");
    return it->get<std::string>();
}

double HttpScorer::score(std::string_view query, std::string_view candidate) const {
    auto reply = post_json(endpoint_, "/score", json{{"query", std::string(query)}, {"candidate", std::string(candidate)}});
    auto it = reply.find("score");
    if (it == reply.end() || !it->is_number())
        throw Error(ErrorCode::TransportError, "/score reply lacks a numeric 'score' field");
    return std::clamp(it->get<double>(), 0.0, 1.0);
}

} // namespace slarag
