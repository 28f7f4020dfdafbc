#pragma once

#include <string>

#include "drs/selection.hpp"

namespace drs {

// Full three-stage reformulation of one record: entity extraction and
// filtering, DFS combination search with structured generation, candidate
// re-evaluation and final selection. Record-level failures (no entities, no
// surviving candidate) produce a failed outcome rather than throwing; backend
// hard failures propagate to the caller.
ReformulationOutcome reformulate_drs(const std::string& document, const std::string& question,
                                     const SearchConfig& config, const LlmClient& llm,
                                     const PromptCatalog& prompts, RecordTrace& trace);

}  // namespace drs
