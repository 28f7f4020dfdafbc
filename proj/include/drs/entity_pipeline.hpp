#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drs/backend.hpp"
#include "drs/prompt_catalog.hpp"

namespace drs {

enum class EntityRole { subject, object, predicate, attribute, others };

std::string to_string(EntityRole role);
std::optional<EntityRole> parse_entity_role(std::string_view s);

struct EntityRecord {
    std::string surface;
    std::string canonical;  // lowercased, whitespace-collapsed
    std::optional<EntityRole> role;
    size_t index = 0;              // extraction order, unique within a question
    bool verbatim_in_question = true;  // soft check; non-occurring entities are kept but flagged

    static EntityRecord make(std::string surface, size_t index, const std::string& question);
};

// Asks the model for all entities it considers important in the question.
// Re-asks once on an empty/unparseable list, then throws EmptyList
// (record-level failure). Roles are left unset.
std::vector<EntityRecord> extract_entities(const std::string& question, const LlmClient& llm,
                                           const PromptCatalog& prompts);

// Classifies one entity into its semantic role within the question. Unknown
// role names and parse failures fall back to `others` after one re-ask.
EntityRole classify_entity(const std::string& question, const EntityRecord& entity,
                           const LlmClient& llm, const PromptCatalog& prompts);

// Classifies every record in extraction order (one model call per entity).
void classify_all(const std::string& question, std::vector<EntityRecord>& records,
                  const LlmClient& llm, const PromptCatalog& prompts);

// Keeps subject/object/attribute entities in extraction order.
// Throws NoEntitiesRemain when nothing survives.
std::vector<EntityRecord> filter_entities(const std::vector<EntityRecord>& records);

}  // namespace drs
