#include "drs/prompt_catalog.hpp"

#include <cctype>
#include <filesystem>

#include <json.hpp>

#include "drs/errors.hpp"
#include "drs/util.hpp"

namespace drs {

using nlohmann::json;

PromptCatalog PromptCatalog::load(const std::string& dir) {
    const std::string manifest_path = (std::filesystem::path(dir) / "manifest.json").string();
    json manifest;
    try {
        manifest = json::parse(read_file(manifest_path));
    } catch (const json::exception& e) {
        throw ConfigInvalid("bad prompt manifest " + manifest_path + ": " + e.what());
    }

    PromptCatalog catalog;
    for (const auto& entry : manifest.at("templates")) {
        PromptTemplate t;
        t.name = entry.at("name").get<std::string>();
        const std::string file = entry.at("file").get<std::string>();
        t.text = read_file((std::filesystem::path(dir) / file).string());
        // template files end with a trailing newline; the prompt itself does not
        while (!t.text.empty() && (t.text.back() == '\n' || t.text.back() == '\r'))
            t.text.pop_back();
        for (const auto& p : entry.at("required").get<std::vector<std::string>>())
            t.required_placeholders.insert(p);
        catalog.templates_[t.name] = std::move(t);
    }
    return catalog;
}

const PromptTemplate& PromptCatalog::get(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) throw UnknownTemplate(name);
    return it->second;
}

std::vector<std::string> PromptCatalog::names() const {
    std::vector<std::string> out;
    out.reserve(templates_.size());
    for (const auto& [name, _] : templates_) out.push_back(name);
    return out;
}

std::string PromptCatalog::template_hash(const std::string& name) const {
    return fnv1a64_hex(get(name).text);
}

namespace {

// Reads a {placeholder} token at position `pos` (on '{'); returns the name or
// empty if the text is not placeholder syntax.
std::string placeholder_at(std::string_view text, size_t pos, size_t* end) {
    size_t i = pos + 1;
    while (i < text.size() && (std::islower(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
    if (i == pos + 1 || i >= text.size() || text[i] != '}') return {};
    *end = i + 1;
    return std::string(text.substr(pos + 1, i - pos - 1));
}

}  // namespace

std::string PromptCatalog::render(const std::string& name,
                                  const std::map<std::string, std::string>& bindings) const {
    const PromptTemplate& t = get(name);
    for (const auto& required : t.required_placeholders)
        if (!bindings.count(required)) throw MissingBinding(required);

    // single left-to-right pass: substituted values are never re-scanned
    std::string out;
    out.reserve(t.text.size() + 256);
    size_t pos = 0;
    while (pos < t.text.size()) {
        if (t.text[pos] == '{') {
            size_t end = 0;
            std::string ph = placeholder_at(t.text, pos, &end);
            if (!ph.empty()) {
                auto it = bindings.find(ph);
                if (it == bindings.end()) throw UnboundPlaceholderRemaining(ph);
                out += it->second;
                pos = end;
                continue;
            }
        }
        out.push_back(t.text[pos]);
        ++pos;
    }
    return out;
}

std::string join_entities(const std::vector<std::string>& entities) {
    std::string out;
    for (size_t i = 0; i < entities.size(); ++i) {
        if (i) out += ", ";
        out += entities[i];
    }
    return out;
}

}  // namespace drs
