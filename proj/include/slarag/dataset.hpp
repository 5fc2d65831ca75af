#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace slarag {

enum class IntentLabel {
    DirectlyAnswerable,
    RequestForSummarization,
    NonQuestionStatement,
    RequestForList,
    SalesInquiry,
    Other,
};

std::string_view to_string(IntentLabel label);
std::optional<IntentLabel> intent_from_string(std::string_view name);

enum class ContextAvailability { AnswerExistsInContext, AnswerDoesNotExist };
enum class AnswerProvision { AnswerProvided, NoAnswerProvided };
enum class AnswerQuality { Correct, Hallucination, Incongruent };

std::string_view to_string(ContextAvailability v);
std::string_view to_string(AnswerProvision v);
std::string_view to_string(AnswerQuality v);
std::optional<AnswerQuality> answer_quality_from_string(std::string_view name);

struct AnswerAnnotation {
    ContextAvailability context_availability = ContextAvailability::AnswerDoesNotExist;
    AnswerProvision answer_provision = AnswerProvision::NoAnswerProvided;
    std::optional<AnswerQuality> answer_quality;

    bool operator==(const AnswerAnnotation&) const = default;
};

// One (query, context, answer) triple as produced by one agent.
struct AnnotatedRecord {
    std::string query_id;
    std::string agent_id;
    std::string query;
    IntentLabel intent = IntentLabel::DirectlyAnswerable;
    std::vector<std::int64_t> context_uids;
    std::optional<std::string> answer_text;
    AnswerAnnotation annotation;

    bool operator==(const AnnotatedRecord&) const = default;
};

class AnnotatedDataset {
public:
    AnnotatedDataset() = default;
    /// Validates every record and the (query_id, agent_id) uniqueness rule.
    explicit AnnotatedDataset(std::vector<AnnotatedRecord> records);

    const std::vector<AnnotatedRecord>& records() const { return records_; }
    const std::map<std::string, bool>& global_context_index() const { return global_context_; }

    bool global_context_hit(const std::string& query_id) const;
    const AnnotatedRecord* find(std::string_view query_id, std::string_view agent_id) const;

    // Query ids in order of first appearance.
    const std::vector<std::string>& query_ids() const { return query_order_; }
    // The first record seen for the query (query text and intent).
    const AnnotatedRecord& representative(const std::string& query_id) const;

private:
    std::vector<AnnotatedRecord> records_;
    std::map<std::string, bool> global_context_;
    std::map<std::pair<std::string, std::string>, std::size_t, std::less<>> by_key_;
    std::map<std::string, std::size_t> first_record_;
    std::vector<std::string> query_order_;
};

/// Throws ValidationError naming the first violated field.
void validate_record(const AnnotatedRecord& record);

AnnotatedRecord record_from_json(const nlohmann::json& j);
nlohmann::json record_to_json(const AnnotatedRecord& record);

/// Reads JSONL; ParseError carries the 1-based line number.
AnnotatedDataset read_dataset(std::istream& in);
AnnotatedDataset load_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const AnnotatedDataset& dataset);

} // namespace slarag
