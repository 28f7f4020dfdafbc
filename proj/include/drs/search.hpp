#pragma once

#include <functional>
#include <string>
#include <vector>

#include "drs/backend.hpp"
#include "drs/entity_pipeline.hpp"
#include "drs/prompt_catalog.hpp"

namespace drs {

// Ordered subset of filtered-entity indices under search. A combination is
// only formed when its size strictly exceeds half the filtered-entity count.
struct Combination {
    std::vector<size_t> member_indices;  // strictly increasing
    size_t size() const { return member_indices.size(); }
};

struct SearchConfig {
    int max_candidates = 3;
    int max_depth = 0;        // 0 -> number of filtered entities (no truncation)
    double temperature = 0.0;

    void validate() const;  // throws ConfigInvalid
};

struct CandidateQuestion {
    std::string question;
    std::string statement;
    Combination combination;
    size_t entity_count = 0;           // == combination.size()
    bool entities_verified = false;    // stored candidates always have both flags set
    bool answerable_in_search = false;
};

// Depth-first include/exclude walk in entity-index order, include-branch
// first. A combination is emitted the moment an include step pushes its size
// over n/2; the walk then continues deeper. Visitor returns false to stop.
void for_each_combination(size_t n, size_t max_depth,
                          const std::function<bool(const Combination&)>& visit);

// Full emission sequence (no candidate cap), for inspection and tests.
std::vector<Combination> enumerate_combinations(size_t n, const SearchConfig& config = {});

// One model call producing both spans: a statement grounded in the document
// and a question containing every combination entity. Throws ParseError when
// either tag is absent.
std::pair<std::string, std::string> generate_statement_question(
    const std::string& document, const Combination& combination,
    const std::vector<EntityRecord>& entities, const LlmClient& llm,
    const PromptCatalog& prompts);

// Model-verified checks; any parse failure after one re-ask counts as "no".
bool verify_entities_included(const std::string& question,
                              const std::vector<std::string>& combination_entities,
                              const LlmClient& llm, const PromptCatalog& prompts);
bool verify_answerable(const std::string& document, const std::string& question,
                       const LlmClient& llm, const PromptCatalog& prompts);

// DFS over combinations: generate, verify inclusion, verify answerability,
// store up to max_candidates candidates in discovery order. An empty result is
// a legal outcome handled by selection.
std::vector<CandidateQuestion> search(const std::string& document,
                                      const std::vector<EntityRecord>& filtered_entities,
                                      const SearchConfig& config, const LlmClient& llm,
                                      const PromptCatalog& prompts,
                                      RecordTrace* trace = nullptr);

}  // namespace drs
