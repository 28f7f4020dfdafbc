#include "drs/entity_pipeline.hpp"

#include "drs/errors.hpp"
#include "drs/structured_parse.hpp"
#include "drs/util.hpp"

namespace drs {

std::string to_string(EntityRole role) {
    switch (role) {
        case EntityRole::subject: return "subject";
        case EntityRole::object: return "object";
        case EntityRole::predicate: return "predicate";
        case EntityRole::attribute: return "attribute";
        case EntityRole::others: return "others";
    }
    return "others";
}

std::optional<EntityRole> parse_entity_role(std::string_view s) {
    std::string t = to_lower(trim(s));
    while (!t.empty() && std::ispunct(static_cast<unsigned char>(t.back()))) t.pop_back();
    if (t == "subject") return EntityRole::subject;
    if (t == "object") return EntityRole::object;
    if (t == "predicate") return EntityRole::predicate;
    if (t == "attribute") return EntityRole::attribute;
    if (t == "others" || t == "other") return EntityRole::others;
    return std::nullopt;
}

EntityRecord EntityRecord::make(std::string surface, size_t index, const std::string& question) {
    EntityRecord r;
    r.canonical = canonicalize(surface);
    r.surface = std::move(surface);
    r.index = index;
    r.verbatim_in_question = contains_ci(question, r.surface);
    return r;
}

std::vector<EntityRecord> extract_entities(const std::string& question, const LlmClient& llm,
                                           const PromptCatalog& prompts) {
    if (question.empty()) throw ConfigInvalid("extract_entities: question is empty");
    const std::string prompt = prompts.render("entity_extraction", {{"question", question}});

    std::vector<std::string> surfaces;
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            surfaces = parse_entity_list(llm.ask(prompt, "extract_entities").text);
            break;
        } catch (const ParseError&) {
            if (attempt == 1) throw EmptyList();
        }
    }

    std::vector<EntityRecord> records;
    records.reserve(surfaces.size());
    for (size_t i = 0; i < surfaces.size(); ++i)
        records.push_back(EntityRecord::make(surfaces[i], i, question));
    return records;
}

EntityRole classify_entity(const std::string& question, const EntityRecord& entity,
                           const LlmClient& llm, const PromptCatalog& prompts) {
    const std::string prompt = prompts.render(
        "entity_categorize", {{"question", question}, {"entity", entity.surface}});

    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            auto role = parse_entity_role(extract_tag(llm.ask(prompt, "classify_entity").text,
                                                      "answer"));
            if (role) return *role;
        } catch (const ParseError&) {
        }
    }
    return EntityRole::others;  // conservative: gets filtered out
}

void classify_all(const std::string& question, std::vector<EntityRecord>& records,
                  const LlmClient& llm, const PromptCatalog& prompts) {
    for (auto& record : records)
        record.role = classify_entity(question, record, llm, prompts);
}

std::vector<EntityRecord> filter_entities(const std::vector<EntityRecord>& records) {
    std::vector<EntityRecord> kept;
    for (const auto& r : records) {
        if (!r.role) throw ConfigInvalid("filter_entities: role unset for " + r.surface);
        if (*r.role == EntityRole::subject || *r.role == EntityRole::object ||
            *r.role == EntityRole::attribute)
            kept.push_back(r);
    }
    if (kept.empty()) throw NoEntitiesRemain();
    return kept;
}

}  // namespace drs
