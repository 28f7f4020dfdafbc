#include "drs/baselines.hpp"

#include <json.hpp>

#include "drs/errors.hpp"
#include "drs/structured_parse.hpp"
#include "drs/util.hpp"

namespace drs {

using nlohmann::json;

std::string to_string(Method m) {
    switch (m) {
        case Method::drs: return "drs";
        case Method::zero: return "zero";
        case Method::zero_cot: return "zero_cot";
        case Method::few: return "few";
        case Method::few_cot: return "few_cot";
    }
    return "drs";
}

std::optional<Method> parse_method(std::string_view s) {
    std::string t = to_lower(trim(s));
    if (t == "drs") return Method::drs;
    if (t == "zero" || t == "zero_shot" || t == "zero-shot") return Method::zero;
    if (t == "zero_cot" || t == "zero-shot-cot") return Method::zero_cot;
    if (t == "few" || t == "few_shot" || t == "few-shot") return Method::few;
    if (t == "few_cot" || t == "few-shot-cot") return Method::few_cot;
    return std::nullopt;
}

std::vector<FewShotExemplar> load_exemplars(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ConfigInvalid("bad exemplar file " + path + ": " + e.what());
    }
    if (!j.is_array()) throw ConfigInvalid("exemplar file must be a JSON array: " + path);

    std::vector<FewShotExemplar> out;
    for (const auto& e : j) {
        FewShotExemplar ex;
        ex.document = e.at("document").get<std::string>();
        ex.original_question = e.at("original_question").get<std::string>();
        ex.reformulated_question = e.at("reformulated_question").get<std::string>();
        if (e.contains("rationale") && !e["rationale"].is_null())
            ex.rationale = e["rationale"].get<std::string>();
        if (ex.document.empty() || ex.original_question.empty() ||
            ex.reformulated_question.empty())
            throw ConfigInvalid("exemplar fields must be non-empty: " + path);
        out.push_back(std::move(ex));
    }
    return out;
}

namespace {

std::string render_exemplar_block(const std::vector<FewShotExemplar>& exemplars,
                                  bool with_rationale) {
    std::string out;
    for (size_t i = 0; i < exemplars.size(); ++i) {
        const auto& ex = exemplars[i];
        if (i) out += "\n\n";
        out += "Document: " + ex.document + "\n";
        out += "Original question: " + ex.original_question + "\n";
        if (with_rationale && ex.rationale) out += "Reasoning: " + *ex.rationale + "\n";
        out += "Rewritten question: " + ex.reformulated_question;
    }
    return out;
}

}  // namespace

std::string build_baseline_prompt(Method method, const std::string& document,
                                  const std::string& question,
                                  const std::vector<FewShotExemplar>& exemplars,
                                  const PromptCatalog& prompts) {
    std::map<std::string, std::string> bindings{{"context", document}, {"question", question}};
    switch (method) {
        case Method::zero:
            return prompts.render("baseline_zero", bindings);
        case Method::zero_cot:
            return prompts.render("baseline_zero_cot", bindings);
        case Method::few:
        case Method::few_cot: {
            if (exemplars.empty())
                throw ConfigInvalid("few-shot baselines require at least one exemplar");
            bindings["exemplars"] =
                render_exemplar_block(exemplars, method == Method::few_cot);
            return prompts.render(
                method == Method::few ? "baseline_few" : "baseline_few_cot", bindings);
        }
        case Method::drs:
            break;
    }
    throw ConfigInvalid("baseline_reformulate does not handle method drs");
}

std::string baseline_reformulate(Method method, const std::string& document,
                                 const std::string& question,
                                 const std::vector<FewShotExemplar>& exemplars,
                                 const LlmClient& llm, const PromptCatalog& prompts,
                                 RecordTrace* trace) {
    const std::string prompt =
        build_baseline_prompt(method, document, question, exemplars, prompts);

    LlmClient client = llm;
    if (trace) client.trace = trace;

    std::string raw;
    for (int attempt = 0; attempt < 2; ++attempt) {
        raw = client.ask(prompt, "baseline").text;
        try {
            return extract_tag(raw, "answer");
        } catch (const ParseError&) {
        }
    }

    // best effort: last non-empty line of the raw response
    std::string last_line;
    size_t pos = 0;
    while (pos < raw.size()) {
        size_t nl = raw.find('\n', pos);
        if (nl == std::string::npos) nl = raw.size();
        std::string line = trim(raw.substr(pos, nl - pos));
        if (!line.empty()) last_line = line;
        pos = nl + 1;
    }
    if (trace)
        trace->add({{"type", "baseline_fallback"},
                    {"reason", "no <answer> tag after re-ask; last line used"}});
    return last_line;
}

}  // namespace drs
