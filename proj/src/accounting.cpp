#include "slarag/accounting.hpp"

#include <algorithm>

#include "slarag/error.hpp"

namespace slarag {

void AccountingParams::validate() const {
    if (!(overhead_cost >= 0.0) || !(overhead_latency_ms >= 0.0))
        throw Error(ErrorCode::ValidationError, "overheads must be >= 0");
    for (const auto& fn : {arbitration_cost, arbitration_latency_ms})
        if (!(fn.fixed >= 0.0) || !(fn.per_agent >= 0.0))
            throw Error(ErrorCode::ValidationError, "arbitration cost/latency terms must be >= 0");
}

double cost_of(std::span<const CandidateResponse> candidates, const AccountingParams& params) {
    double agents = 0.0;
    for (const auto& c : candidates) agents += c.cost;
    return params.overhead_cost + agents + params.arbitration_cost(candidates.size());
}

double latency_of(std::span<const CandidateResponse> candidates, const AccountingParams& params) {
    double slowest = 0.0;
    for (const auto& c : candidates) slowest = std::max(slowest, c.latency_ms);
    return params.overhead_latency_ms + slowest + params.arbitration_latency_ms(candidates.size());
}

} // namespace slarag
