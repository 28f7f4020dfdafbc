#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "drs/search.hpp"

namespace drs {

struct ScoredCandidate {
    CandidateQuestion candidate;
    bool answerable_final = false;
    double overlap_score = 0.0;  // |cand ∩ orig| / |orig| on canonical forms
    size_t discovery_index = 0;
};

struct ReformulationOutcome {
    enum class Status { reformulated, failed };
    Status status = Status::failed;
    std::optional<std::string> final_question;  // present iff status == reformulated
    std::string failure_reason;                 // set when failed
    std::vector<nlohmann::json> trace;          // pipeline events for this record
};

// Exact set-intersection ratio on canonical entity forms.
// original_entities must be non-empty.
double overlap_score(const std::set<std::string>& candidate_entities,
                     const std::set<std::string>& original_entities);

// Re-judges each candidate's answerability and scores entity overlap against
// the original question's filtered entities. Both values are recorded even for
// candidates judged unanswerable.
std::vector<ScoredCandidate> reevaluate(const std::string& document,
                                        const std::vector<CandidateQuestion>& candidates,
                                        const std::vector<EntityRecord>& original_entities,
                                        const LlmClient& llm, const PromptCatalog& prompts,
                                        RecordTrace* trace = nullptr);

// Highest overlap score among answerable candidates; ties go to the
// earliest-discovered. No answerable candidate -> failed.
ReformulationOutcome select_final(const std::vector<ScoredCandidate>& scored);

std::set<std::string> canonical_entity_set(const std::vector<EntityRecord>& records);

}  // namespace drs
