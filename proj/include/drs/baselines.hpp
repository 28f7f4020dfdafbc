#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drs/backend.hpp"
#include "drs/prompt_catalog.hpp"

namespace drs {

enum class Method { drs, zero, zero_cot, few, few_cot };

std::string to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

struct FewShotExemplar {
    std::string document;
    std::string original_question;
    std::string reformulated_question;
    std::optional<std::string> rationale;  // used by the CoT variant
};

// JSON array of exemplar objects.
std::vector<FewShotExemplar> load_exemplars(const std::string& path);

// Builds the prompt for a single-call baseline. Few-shot variants require at
// least one exemplar; the CoT variants differ from their plain counterparts by
// exactly the think-step-by-step trigger phrase.
std::string build_baseline_prompt(Method method, const std::string& document,
                                  const std::string& question,
                                  const std::vector<FewShotExemplar>& exemplars,
                                  const PromptCatalog& prompts);

// One model call; the reformulated question is parsed from <answer> tags. If
// the tag is still missing after a re-ask, the raw response's last non-empty
// line is taken as the question and the fallback is flagged in the trace.
std::string baseline_reformulate(Method method, const std::string& document,
                                 const std::string& question,
                                 const std::vector<FewShotExemplar>& exemplars,
                                 const LlmClient& llm, const PromptCatalog& prompts,
                                 RecordTrace* trace = nullptr);

}  // namespace drs
