#pragma once

#include <span>

#include "slarag/agents.hpp"

namespace slarag {

// fixed + per_agent * N
struct LinearInN {
    double fixed = 0.0;
    double per_agent = 0.0;

    double operator()(std::size_t n) const { return fixed + per_agent * static_cast<double>(n); }
};

struct AccountingParams {
    double overhead_cost = 0.0;
    double overhead_latency_ms = 0.0;
    LinearInN arbitration_cost;
    LinearInN arbitration_latency_ms;

    void validate() const;  // ValidationError on negative terms
};

// C_sys = overhead + sum of agent costs + arbitration cost(N)
double cost_of(std::span<const CandidateResponse> candidates, const AccountingParams& params);
// L_sys = overhead + max agent latency + arbitration latency(N)
double latency_of(std::span<const CandidateResponse> candidates, const AccountingParams& params);

} // namespace slarag
