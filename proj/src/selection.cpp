#include "drs/selection.hpp"

#include "drs/errors.hpp"
#include "drs/structured_parse.hpp"

namespace drs {

std::set<std::string> canonical_entity_set(const std::vector<EntityRecord>& records) {
    std::set<std::string> out;
    for (const auto& r : records) out.insert(r.canonical);
    return out;
}

double overlap_score(const std::set<std::string>& candidate_entities,
                     const std::set<std::string>& original_entities) {
    if (original_entities.empty())
        throw ConfigInvalid("overlap_score: original entity set is empty");
    size_t shared = 0;
    for (const auto& e : candidate_entities)
        if (original_entities.count(e)) ++shared;
    return static_cast<double>(shared) / static_cast<double>(original_entities.size());
}

std::vector<ScoredCandidate> reevaluate(const std::string& document,
                                        const std::vector<CandidateQuestion>& candidates,
                                        const std::vector<EntityRecord>& original_entities,
                                        const LlmClient& llm, const PromptCatalog& prompts,
                                        RecordTrace* trace) {
    const auto original_set = canonical_entity_set(original_entities);

    std::vector<ScoredCandidate> scored;
    scored.reserve(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
        const auto& cand = candidates[i];

        std::set<std::string> cand_set;
        for (size_t idx : cand.combination.member_indices)
            cand_set.insert(original_entities.at(idx).canonical);

        ScoredCandidate sc;
        sc.candidate = cand;
        sc.discovery_index = i;
        sc.overlap_score = overlap_score(cand_set, original_set);
        // same prompt as the in-search answerability check
        const std::string prompt = prompts.render(
            "answerability", {{"context", document}, {"question", cand.question}});
        sc.answerable_final = false;
        for (int attempt = 0; attempt < 2; ++attempt) {
            try {
                sc.answerable_final = parse_yes_no(
                    extract_tag(llm.ask(prompt, "reevaluate_answerable").text, "answer"));
                break;
            } catch (const ParseError&) {
            }
        }

        if (trace)
            trace->add({{"type", "reevaluation"},
                        {"candidate_index", i},
                        {"answerable", sc.answerable_final},
                        {"overlap_score", sc.overlap_score}});
        scored.push_back(std::move(sc));
    }
    return scored;
}

ReformulationOutcome select_final(const std::vector<ScoredCandidate>& scored) {
    const ScoredCandidate* best = nullptr;
    for (const auto& sc : scored) {
        if (!sc.answerable_final) continue;
        // ties go to the earliest discovery index, which is recorded per
        // candidate and therefore independent of list order
        if (!best || sc.overlap_score > best->overlap_score ||
            (sc.overlap_score == best->overlap_score &&
             sc.discovery_index < best->discovery_index))
            best = &sc;
    }

    ReformulationOutcome outcome;
    if (!best) {
        outcome.status = ReformulationOutcome::Status::failed;
        outcome.failure_reason = scored.empty() ? "no candidate generated"
                                                : "no candidate judged answerable";
        return outcome;
    }
    outcome.status = ReformulationOutcome::Status::reformulated;
    outcome.final_question = best->candidate.question;
    return outcome;
}

}  // namespace drs
