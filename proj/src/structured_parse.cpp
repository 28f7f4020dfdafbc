#include "drs/structured_parse.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <unordered_set>

#include "drs/errors.hpp"
#include "drs/util.hpp"

namespace drs {

std::string extract_tag(std::string_view raw, std::string_view tag) {
    const std::string haystack = to_lower(raw);
    const std::string open = "<" + to_lower(tag) + ">";
    const std::string close = "</" + to_lower(tag) + ">";

    const size_t open_pos = haystack.find(open);
    if (open_pos == std::string::npos) throw TagMissing(std::string(tag));

    const size_t content_begin = open_pos + open.size();
    const size_t close_pos = haystack.find(close, content_begin);
    if (close_pos == std::string::npos) throw TagUnclosed(std::string(tag));

    return trim(raw.substr(content_begin, close_pos - content_begin));
}

std::string wrap_in_tag(std::string_view payload, std::string_view tag) {
    std::string out;
    out.reserve(payload.size() + 2 * tag.size() + 5);
    out.append("<").append(tag).append(">");
    out.append(payload);
    out.append("</").append(tag).append(">");
    return out;
}

std::vector<std::string> parse_entity_list(std::string_view raw) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;

    size_t start = 0;
    while (start <= raw.size()) {
        size_t comma = raw.find(',', start);
        if (comma == std::string_view::npos) comma = raw.size();
        std::string item = trim(raw.substr(start, comma - start));
        if (!item.empty()) {
            std::string key = canonicalize(item);
            if (seen.insert(key).second) out.push_back(std::move(item));
        }
        start = comma + 1;
    }

    if (out.empty()) throw EmptyList();
    return out;
}

bool parse_yes_no(std::string_view raw) {
    std::string s = trim(raw);
    // leading whitespace-delimited token
    size_t end = 0;
    while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end]))) ++end;
    std::string tok = s.substr(0, end);
    // tolerate trailing punctuation ("no.", "yes!", "yes,")
    while (!tok.empty() && std::ispunct(static_cast<unsigned char>(tok.back()))) tok.pop_back();
    tok = to_lower(tok);
    if (tok == "yes") return true;
    if (tok == "no") return false;
    throw UnparseableVerdict(s.substr(0, 80));
}

int parse_count(std::string_view raw) {
    size_t i = 0;
    while (i < raw.size() && !std::isdigit(static_cast<unsigned char>(raw[i]))) ++i;
    if (i == raw.size()) throw NoInteger(std::string(raw.substr(0, 80)));
    size_t j = i;
    while (j < raw.size() && std::isdigit(static_cast<unsigned char>(raw[j]))) ++j;

    long long value = 0;
    auto [ptr, ec] = std::from_chars(raw.data() + i, raw.data() + j, value);
    (void)ptr;
    if (ec == std::errc::result_out_of_range || value > std::numeric_limits<int>::max())
        return std::numeric_limits<int>::max();
    if (ec != std::errc()) throw NoInteger(std::string(raw.substr(0, 80)));
    return static_cast<int>(value);
}

}  // namespace drs
