#pragma once

#include <string>
#include <vector>

#include "drs/backend.hpp"
#include "drs/prompt_catalog.hpp"

namespace drs {

// Judge outputs for one reformulated question. A reformulation succeeds iff
// the judge deems it answerable AND the entity overlap with the dataset's
// labeled entities reaches half (ratio >= 0.5, ties pass).
struct EvalVerdict {
    std::string record_id;
    std::string method;
    std::string final_question;  // empty when reformulation failed
    bool answerable = false;
    std::string judge_analysis;
    int overlap_count = 0;
    int labeled_count = 1;
    bool success = false;

    nlohmann::json to_json() const;  // the verdicts.jsonl line
};

struct JudgeAnswer {
    bool answerable = false;
    std::string analysis;
};

// Answerability verdict with reasoning. Parse failures fall back to "no"
// after one re-ask.
JudgeAnswer judge_answerable(const std::string& document, const std::string& question,
                             const LlmClient& judge, const PromptCatalog& prompts,
                             RecordTrace* trace = nullptr);

// Count of entities shared between the reformulated and original question,
// as judged against the dataset's labeled entities. Falls back to 0.
int judge_overlap(const std::string& original_question,
                  const std::vector<std::string>& labeled_entities,
                  const std::string& new_question, const LlmClient& judge,
                  const PromptCatalog& prompts, RecordTrace* trace = nullptr);

// answerable AND overlap/labeled_count >= 0.5 (exact integer arithmetic).
bool judge_success(bool answerable, int overlap, int labeled_count);

// successes / total. Throws EmptyRun on an empty list.
double accuracy(const std::vector<EvalVerdict>& verdicts);

}  // namespace drs
