#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace drs {

// Parsers for tag-delimited model output. The convention is single-level
// <analysis>/<answer>/<statement>/<question> spans; tags match case-insensitively
// and the first open/close pair wins. All failures throw a ParseError subclass,
// which callers treat as a recoverable re-ask signal.

// Content of the first <tag>...</tag> pair, trimmed.
// Throws TagMissing / TagUnclosed.
std::string extract_tag(std::string_view raw, std::string_view tag);

// Inverse helper for round-trip tests.
std::string wrap_in_tag(std::string_view payload, std::string_view tag);

// Comma-separated list: split, trim, drop empties, dedup case-insensitively
// keeping the first-seen surface form. Throws EmptyList.
std::vector<std::string> parse_entity_list(std::string_view raw);

// Leading token "yes"/"no" (case-insensitive, trailing punctuation tolerated).
// Throws UnparseableVerdict.
bool parse_yes_no(std::string_view raw);

// First integer literal in the span. Throws NoInteger.
int parse_count(std::string_view raw);

}  // namespace drs
