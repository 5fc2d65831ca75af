#pragma once

namespace slarag {

// Outcome probabilities of one agent: how often it answers, and how an
// answer splits into correct / hallucinated / incongruent.
struct AgentProfile {
    double p_affirmative = 1.0;
    double p_correct = 1.0;
    double p_hallucination = 0.0;
    double p_incongruent = 0.0;

    bool operator==(const AgentProfile&) const = default;
};

/// ValidationError unless every value is in [0,1] and the three conditional
/// probabilities sum to 1 within 1e-9.
void validate_profile(const AgentProfile& profile);

} // namespace slarag
