#include "drs/evaluation.hpp"

#include <algorithm>

#include "drs/errors.hpp"
#include "drs/structured_parse.hpp"

namespace drs {

nlohmann::json EvalVerdict::to_json() const {
    return {{"record_id", record_id},
            {"method", method},
            {"final_question", final_question},
            {"answerable", answerable},
            {"overlap_count", overlap_count},
            {"labeled_count", labeled_count},
            {"success", success}};
}

JudgeAnswer judge_answerable(const std::string& document, const std::string& question,
                             const LlmClient& judge, const PromptCatalog& prompts,
                             RecordTrace* trace) {
    if (document.empty() || question.empty())
        throw ConfigInvalid("judge_answerable: document and question must be non-empty");

    LlmClient client = judge;
    if (trace) client.trace = trace;
    const std::string prompt =
        prompts.render("answerability", {{"context", document}, {"question", question}});

    JudgeAnswer out;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const std::string raw = client.ask(prompt, "judge_answerable").text;
        try {
            out.analysis = extract_tag(raw, "analysis");
        } catch (const ParseError&) {
            // analysis is informational; a missing span does not fail the verdict
        }
        try {
            out.answerable = parse_yes_no(extract_tag(raw, "answer"));
            return out;
        } catch (const ParseError&) {
        }
    }
    out.answerable = false;
    return out;
}

int judge_overlap(const std::string& original_question,
                  const std::vector<std::string>& labeled_entities,
                  const std::string& new_question, const LlmClient& judge,
                  const PromptCatalog& prompts, RecordTrace* trace) {
    if (labeled_entities.empty())
        throw ConfigInvalid("judge_overlap: labeled entities must be non-empty");

    LlmClient client = judge;
    if (trace) client.trace = trace;
    const std::string prompt = prompts.render("entity_overlap",
                                              {{"question", original_question},
                                               {"entities", join_entities(labeled_entities)},
                                               {"new_question", new_question}});

    const int labeled_count = static_cast<int>(labeled_entities.size());
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            int count = parse_count(extract_tag(client.ask(prompt, "judge_overlap").text,
                                                "answer"));
            return std::min(count, labeled_count);  // overlap can never exceed the labeled set
        } catch (const ParseError&) {
        }
    }
    return 0;  // conservative failure
}

bool judge_success(bool answerable, int overlap, int labeled_count) {
    if (labeled_count < 1) throw ConfigInvalid("judge_success: labeled_count must be >= 1");
    return answerable && 2 * overlap >= labeled_count;
}

double accuracy(const std::vector<EvalVerdict>& verdicts) {
    if (verdicts.empty()) throw EmptyRun();
    size_t successes = 0;
    for (const auto& v : verdicts)
        if (v.success) ++successes;
    return static_cast<double>(successes) / static_cast<double>(verdicts.size());
}

}  // namespace drs
