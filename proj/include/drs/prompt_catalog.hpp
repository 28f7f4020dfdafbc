#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace drs {

struct PromptTemplate {
    std::string name;
    std::string text;
    std::set<std::string> required_placeholders;
};

// Loads templates from a directory (manifest.json + one UTF-8 text file per
// prompt) and renders them with named {placeholder} substitution. Templates
// are immutable after load and shareable across workers.
class PromptCatalog {
public:
    static PromptCatalog load(const std::string& dir);

    // Throws UnknownTemplate / MissingBinding / UnboundPlaceholderRemaining.
    std::string render(const std::string& name,
                       const std::map<std::string, std::string>& bindings) const;

    const PromptTemplate& get(const std::string& name) const;
    bool has(const std::string& name) const { return templates_.count(name) > 0; }
    std::vector<std::string> names() const;

    // Template provenance for run metadata.
    std::string template_hash(const std::string& name) const;

private:
    std::map<std::string, PromptTemplate> templates_;
};

// Entity lists are rendered "separated by comma and space".
std::string join_entities(const std::vector<std::string>& entities);

}  // namespace drs
