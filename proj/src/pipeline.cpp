#include "drs/pipeline.hpp"

#include "drs/errors.hpp"
#include "drs/pipeline.hpp"

namespace drs {

namespace {

ReformulationOutcome fail(RecordTrace& trace, const std::string& reason) {
    trace.add({{"type", "record_failure"}, {"reason", reason}});
    ReformulationOutcome outcome;
    outcome.status = ReformulationOutcome::Status::failed;
    outcome.failure_reason = reason;
    outcome.trace = trace.events();
    return outcome;
}

}  // namespace

ReformulationOutcome reformulate_drs(const std::string& document, const std::string& question,
                                     const SearchConfig& config, const LlmClient& llm,
                                     const PromptCatalog& prompts, RecordTrace& trace) {
    LlmClient client = llm;
    client.trace = &trace;
    client.temperature = config.temperature;

    std::vector<EntityRecord> entities;
    try {
        entities = extract_entities(question, client, prompts);
    } catch (const EmptyList&) {
        return fail(trace, "entity extraction returned nothing");
    }
    classify_all(question, entities, client, prompts);

    std::vector<EntityRecord> filtered;
    try {
        filtered = filter_entities(entities);
    } catch (const NoEntitiesRemain&) {
        return fail(trace, "no subject/object/attribute entities remain");
    }
    {
        std::vector<std::string> kept;
        for (const auto& e : filtered) kept.push_back(e.surface);
        trace.add({{"type", "filtered_entities"}, {"entities", kept}});
    }

    auto candidates = search(document, filtered, config, client, prompts, &trace);
    if (candidates.empty()) return fail(trace, "search produced no candidate");

    auto scored = reevaluate(document, candidates, filtered, client, prompts, &trace);
    ReformulationOutcome outcome = select_final(scored);

    trace.add({{"type", "selection"},
               {"status", outcome.status == ReformulationOutcome::Status::reformulated
                              ? "reformulated"
                              : "failed"},
               {"final_question", outcome.final_question.value_or("")}});
    outcome.trace = trace.events();
    return outcome;
}

}  // namespace drs
