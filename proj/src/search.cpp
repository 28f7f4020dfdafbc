#include "drs/search.hpp"

#include "drs/errors.hpp"
#include "drs/structured_parse.hpp"

namespace drs {

void SearchConfig::validate() const {
    if (max_candidates < 1) throw ConfigInvalid("max_candidates must be >= 1");
    if (max_depth < 0) throw ConfigInvalid("max_depth must be >= 0");
    if (temperature < 0.0 || temperature > 2.0)
        throw ConfigInvalid("search temperature out of range [0, 2]");
}

namespace {

// 2*size > n  <=>  size > n/2 (strict, exact in integers)
bool above_threshold(size_t size, size_t n) { return 2 * size > n; }

bool dfs(size_t index, size_t n, size_t max_depth, std::vector<size_t>& selected,
         const std::function<bool(const Combination&)>& visit) {
    if (index >= max_depth) return true;

    // include branch first: larger-overlap combinations surface earlier
    selected.push_back(index);
    if (above_threshold(selected.size(), n)) {
        if (!visit(Combination{selected})) {
            selected.pop_back();
            return false;
        }
    }
    if (!dfs(index + 1, n, max_depth, selected, visit)) {
        selected.pop_back();
        return false;
    }
    selected.pop_back();

    return dfs(index + 1, n, max_depth, selected, visit);
}

}  // namespace

void for_each_combination(size_t n, size_t max_depth,
                          const std::function<bool(const Combination&)>& visit) {
    std::vector<size_t> selected;
    selected.reserve(n);
    dfs(0, n, std::min(max_depth, n), selected, visit);
}

std::vector<Combination> enumerate_combinations(size_t n, const SearchConfig& config) {
    config.validate();
    const size_t depth = config.max_depth > 0 ? static_cast<size_t>(config.max_depth) : n;
    std::vector<Combination> out;
    for_each_combination(n, depth, [&](const Combination& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

namespace {

std::vector<std::string> member_surfaces(const Combination& combination,
                                         const std::vector<EntityRecord>& entities) {
    std::vector<std::string> out;
    out.reserve(combination.member_indices.size());
    for (size_t idx : combination.member_indices) {
        if (idx >= entities.size())
            throw ConfigInvalid("combination index out of range: " + std::to_string(idx));
        out.push_back(entities[idx].surface);
    }
    return out;
}

// yes/no question to the model with the standard retry ladder:
// one re-ask on any parse failure, then a conservative "no".
bool yes_no_with_retry(const LlmClient& llm, const std::string& prompt,
                       std::string_view stage) {
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            return parse_yes_no(extract_tag(llm.ask(prompt, stage).text, "answer"));
        } catch (const ParseError&) {
        }
    }
    return false;
}

}  // namespace

std::pair<std::string, std::string> generate_statement_question(
    const std::string& document, const Combination& combination,
    const std::vector<EntityRecord>& entities, const LlmClient& llm,
    const PromptCatalog& prompts) {
    const std::string prompt = prompts.render(
        "statement_question",
        {{"context", document}, {"entities", join_entities(member_surfaces(combination, entities))}});

    const std::string raw = llm.ask(prompt, "generate").text;
    return {extract_tag(raw, "statement"), extract_tag(raw, "question")};
}

bool verify_entities_included(const std::string& question,
                              const std::vector<std::string>& combination_entities,
                              const LlmClient& llm, const PromptCatalog& prompts) {
    if (question.empty()) throw ConfigInvalid("verify_entities_included: question is empty");
    const std::string prompt = prompts.render(
        "entity_inclusion",
        {{"question", question}, {"entities", join_entities(combination_entities)}});
    return yes_no_with_retry(llm, prompt, "verify_inclusion");
}

bool verify_answerable(const std::string& document, const std::string& question,
                       const LlmClient& llm, const PromptCatalog& prompts) {
    if (document.empty() || question.empty()) return false;  // nothing to answer from
    const std::string prompt =
        prompts.render("answerability", {{"context", document}, {"question", question}});
    return yes_no_with_retry(llm, prompt, "verify_answerable");
}

std::vector<CandidateQuestion> search(const std::string& document,
                                      const std::vector<EntityRecord>& filtered_entities,
                                      const SearchConfig& config, const LlmClient& llm,
                                      const PromptCatalog& prompts, RecordTrace* trace) {
    config.validate();
    if (filtered_entities.empty()) throw ConfigInvalid("search: no filtered entities");

    LlmClient client = llm;
    client.temperature = config.temperature;

    const size_t n = filtered_entities.size();
    const size_t depth = config.max_depth > 0 ? static_cast<size_t>(config.max_depth) : n;

    auto note = [&](const Combination& c, const char* outcome) {
        if (trace)
            trace->add({{"type", "combination"},
                        {"indices", c.member_indices},
                        {"outcome", outcome}});
    };

    std::vector<CandidateQuestion> candidates;
    for_each_combination(n, depth, [&](const Combination& combination) {
        // statement+question generation, one re-ask on malformed output
        std::string statement, question;
        bool generated = false;
        for (int attempt = 0; attempt < 2 && !generated; ++attempt) {
            try {
                std::tie(statement, question) =
                    generate_statement_question(document, combination, filtered_entities, client,
                                                prompts);
                generated = true;
            } catch (const ParseError&) {
            }
        }
        if (!generated) {
            note(combination, "skipped_malformed_generation");
            return true;  // back to the next combination
        }

        if (!verify_entities_included(question, member_surfaces(combination, filtered_entities),
                                      client, prompts)) {
            note(combination, "rejected_entity_inclusion");
            return true;
        }

        if (!verify_answerable(document, question, client, prompts)) {
            note(combination, "rejected_answerability");
            return true;
        }

        CandidateQuestion candidate;
        candidate.question = question;
        candidate.statement = statement;
        candidate.combination = combination;
        candidate.entity_count = combination.size();
        candidate.entities_verified = true;
        candidate.answerable_in_search = true;
        candidates.push_back(std::move(candidate));
        note(combination, "candidate_stored");

        return candidates.size() < static_cast<size_t>(config.max_candidates);
    });

    return candidates;
}

}  // namespace drs
