#include "slarag/dataset.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "slarag/error.hpp"

namespace slarag {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<IntentLabel, std::string_view>, 6> kIntentNames{{
    {IntentLabel::DirectlyAnswerable, "directly_answerable"},
    {IntentLabel::RequestForSummarization, "request_for_summarization"},
    {IntentLabel::NonQuestionStatement, "non_question_statement"},
    {IntentLabel::RequestForList, "request_for_list"},
    {IntentLabel::SalesInquiry, "sales_inquiry"},
    {IntentLabel::Other, "other"},
}};

std::string record_id(const AnnotatedRecord& r) { return r.query_id + "/" + r.agent_id; }

[[noreturn]] void invalid(const AnnotatedRecord& r, const std::string& field, const std::string& why) {
    throw Error(ErrorCode::ValidationError, record_id(r) + ": " + field + " " + why);
}

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
    return *it;
}

} // namespace

std::string_view to_string(IntentLabel label) {
    for (const auto& [l, n] : kIntentNames)
        if (l == label) return n;
    return "other";
}

std::optional<IntentLabel> intent_from_string(std::string_view name) {
    for (const auto& [l, n] : kIntentNames)
        if (n == name) return l;
    return std::nullopt;
}

std::string_view to_string(ContextAvailability v) {
    return v == ContextAvailability::AnswerExistsInContext ? "exists" : "not_exists";
}

std::string_view to_string(AnswerProvision v) {
    return v == AnswerProvision::AnswerProvided ? "provided" : "not_provided";
}

std::string_view to_string(AnswerQuality v) {
    switch (v) {
        case AnswerQuality::Correct:       return "correct";
        case AnswerQuality::Hallucination: return "hallucination";
        case AnswerQuality::Incongruent:   return "incongruent";
    }
    return "correct";
}

std::optional<AnswerQuality> answer_quality_from_string(std::string_view name) {
    if (name == "correct") return AnswerQuality::Correct;
    if (name == "hallucination") return AnswerQuality::Hallucination;
    if (name == "incongruent") return AnswerQuality::Incongruent;
    return std::nullopt;
}

void validate_record(const AnnotatedRecord& r) {
    if (r.query_id.empty()) invalid(r, "query_id", "must be non-empty");
    if (r.agent_id.empty()) invalid(r, "agent_id", "must be non-empty");
    bool provided = r.annotation.answer_provision == AnswerProvision::AnswerProvided;
    if (provided != r.annotation.answer_quality.has_value())
        invalid(r, "answer_quality", provided ? "required when an answer is provided"
                                              : "must be null when no answer is provided");
    if (provided != r.answer_text.has_value())
        invalid(r, "answer_text", provided ? "required when an answer is provided"
                                           : "must be null when no answer is provided");
}

AnnotatedDataset::AnnotatedDataset(std::vector<AnnotatedRecord> records) : records_(std::move(records)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        validate_record(r);
        if (!by_key_.emplace(std::make_pair(r.query_id, r.agent_id), i).second)
            invalid(r, "query_id+agent_id", "is duplicated");
        bool exists = r.annotation.context_availability == ContextAvailability::AnswerExistsInContext;
        auto [it, inserted] = global_context_.emplace(r.query_id, exists);
        if (inserted) {
            query_order_.push_back(r.query_id);
            first_record_.emplace(r.query_id, i);
        } else {
            it->second = it->second || exists;
        }
    }
}

bool AnnotatedDataset::global_context_hit(const std::string& query_id) const {
    auto it = global_context_.find(query_id);
    return it != global_context_.end() && it->second;
}

const AnnotatedRecord* AnnotatedDataset::find(std::string_view query_id, std::string_view agent_id) const {
    auto it = by_key_.find(std::make_pair(std::string(query_id), std::string(agent_id)));
    return it == by_key_.end() ? nullptr : &records_[it->second];
}

const AnnotatedRecord& AnnotatedDataset::representative(const std::string& query_id) const {
    auto it = first_record_.find(query_id);
    if (it == first_record_.end()) throw Error(ErrorCode::MissingRecord, query_id);
    return records_[it->second];
}

AnnotatedRecord record_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "record must be a JSON object");
    AnnotatedRecord r;
    try {
        r.query_id = require(j, "query_id").get<std::string>();
        r.agent_id = require(j, "agent_id").get<std::string>();
        r.query = require(j, "query").get<std::string>();
        auto intent_name = require(j, "intent").get<std::string>();
        auto intent = intent_from_string(intent_name);
        if (!intent) throw Error(ErrorCode::ParseError, "unknown intent '" + intent_name + "'");
        r.intent = *intent;
        r.context_uids = require(j, "context_uids").get<std::vector<std::int64_t>>();
        const auto& text = require(j, "answer_text");
        if (!text.is_null()) r.answer_text = text.get<std::string>();

        auto ctx = require(j, "context_availability").get<std::string>();
        if (ctx == "exists") r.annotation.context_availability = ContextAvailability::AnswerExistsInContext;
        else if (ctx == "not_exists") r.annotation.context_availability = ContextAvailability::AnswerDoesNotExist;
        else throw Error(ErrorCode::ParseError, "bad context_availability '" + ctx + "'");

        auto prov = require(j, "answer_provision").get<std::string>();
        if (prov == "provided") r.annotation.answer_provision = AnswerProvision::AnswerProvided;
        else if (prov == "not_provided") r.annotation.answer_provision = AnswerProvision::NoAnswerProvided;
        else throw Error(ErrorCode::ParseError, "bad answer_provision '" + prov + "'");

        const auto& quality = require(j, "answer_quality");
        if (!quality.is_null()) {
            auto name = quality.get<std::string>();
            auto q = answer_quality_from_string(name);
            if (!q) throw Error(ErrorCode::ParseError, "bad answer_quality '" + name + "'");
            r.annotation.answer_quality = *q;
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return r;
}

json record_to_json(const AnnotatedRecord& r) {
    json j;
    j["query_id"] = r.query_id;
    j["agent_id"] = r.agent_id;
    j["query"] = r.query;
    j["intent"] = to_string(r.intent);
    j["context_uids"] = r.context_uids;
    j["answer_text"] = r.answer_text ? json(*r.answer_text) : json(nullptr);
    j["context_availability"] = to_string(r.annotation.context_availability);
    j["answer_provision"] = to_string(r.annotation.answer_provision);
    j["answer_quality"] = r.annotation.answer_quality ? json(to_string(*r.annotation.answer_quality))
                                                      : json(nullptr);
    return j;
}

AnnotatedDataset read_dataset(std::istream& in) {
    std::vector<AnnotatedRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto j = json::parse(line);
            records.push_back(record_from_json(j));
            validate_record(records.back());
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.message());
        }
    }
    return AnnotatedDataset(std::move(records));
}

AnnotatedDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_dataset(in);
}

void write_dataset(std::ostream& out, const AnnotatedDataset& dataset) {
    for (const auto& r : dataset.records()) out << record_to_json(r).dump() << '\n';
}

} // namespace slarag
