#include <doctest.h>

#include <limits>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "drs/errors.hpp"
#include "drs/structured_parse.hpp"
#include "drs/util.hpp"

using namespace drs;

// ---------------------------------------------------------------------------
// reference oracles, deliberately written with different machinery than the
// implementation
// ---------------------------------------------------------------------------
namespace {

enum class TagOutcome { ok, missing, unclosed };

struct TagOracle {
    TagOutcome outcome;
    std::string content;
};

// regex-based scan for the first <tag>...</tag> pair
TagOracle oracle_extract_tag(const std::string& raw, const std::string& tag) {
    std::regex open("<" + tag + ">", std::regex::icase);
    std::smatch m;
    if (!std::regex_search(raw, m, open)) return {TagOutcome::missing, ""};
    std::string rest = m.suffix();
    std::regex close("</" + tag + ">", std::regex::icase);
    std::smatch m2;
    if (!std::regex_search(rest, m2, close)) return {TagOutcome::unclosed, ""};
    return {TagOutcome::ok, trim(m2.prefix().str())};
}

// stringstream-based splitter with std::set dedup
std::vector<std::string> oracle_entity_list(const std::string& raw) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::string t = trim(item);
        if (t.empty()) continue;
        if (seen.insert(canonicalize(t)).second) out.push_back(t);
    }
    return out;
}

// first contiguous digit run, accumulated by hand, saturating at INT_MAX
long long oracle_first_integer(const std::string& s, bool* found) {
    size_t i = 0;
    while (i < s.size() && !(s[i] >= '0' && s[i] <= '9')) ++i;
    if (i == s.size()) {
        *found = false;
        return 0;
    }
    long long v = 0;
    const long long cap = std::numeric_limits<int>::max();
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
        v = v * 10 + (s[i] - '0');
        if (v > cap) v = cap;
        ++i;
    }
    *found = true;
    return v;
}

}  // namespace

TEST_CASE("extract_tag: well-formed spans") {
    CHECK(extract_tag("<answer>yes</answer>", "answer") == "yes");
    CHECK(extract_tag("<analysis>…</analysis><answer> 3 </answer>", "answer") == "3");
    CHECK(extract_tag("<ANSWER>Yes</ANSWER>", "answer") == "Yes");  // tags case-insensitive
    CHECK(extract_tag("junk <statement>a fact</statement> more", "statement") == "a fact");
}

TEST_CASE("extract_tag: missing and unclosed tags") {
    CHECK_THROWS_AS(extract_tag("no tags at all", "answer"), TagMissing);
    CHECK_THROWS_AS(extract_tag("<answer>yes", "answer"), TagUnclosed);
    CHECK_THROWS_AS(extract_tag("</answer>yes", "answer"), TagMissing);
}

TEST_CASE("extract_tag: wrap round-trip is identity for tag-free payloads") {
    std::mt19937 rng(7);
    const std::string chars = "abc XYZ.,!?0189-';:\n\t";
    for (int i = 0; i < 2000; ++i) {
        std::string payload;
        int len = static_cast<int>(rng() % 40);
        for (int k = 0; k < len; ++k) payload.push_back(chars[rng() % chars.size()]);
        std::string trimmed = trim(payload);
        CHECK(extract_tag(wrap_in_tag(payload, "answer"), "answer") == trimmed);
    }
}

TEST_CASE("extract_tag: fuzz against regex oracle") {
    std::mt19937 rng(42);
    const std::vector<std::string> pieces = {"<answer>", "</answer>", "<ANSWER>", "</Answer>",
                                             "yes", "no", " 3 ", "<", ">", "</", "text ",
                                             "<analysis>", "</analysis>", "\n"};
    for (int i = 0; i < 10000; ++i) {
        std::string raw;
        int len = static_cast<int>(rng() % 8);
        for (int k = 0; k < len; ++k) raw += pieces[rng() % pieces.size()];

        TagOracle expected = oracle_extract_tag(raw, "answer");
        try {
            std::string got = extract_tag(raw, "answer");
            CHECK(expected.outcome == TagOutcome::ok);
            CHECK(got == expected.content);
        } catch (const TagMissing&) {
            CHECK(expected.outcome == TagOutcome::missing);
        } catch (const TagUnclosed&) {
            CHECK(expected.outcome == TagOutcome::unclosed);
        }
    }
}

TEST_CASE("parse_entity_list: documented examples") {
    CHECK(parse_entity_list("Rainer Hertrich, German, EADS") ==
          std::vector<std::string>{"Rainer Hertrich", "German", "EADS"});
    CHECK(parse_entity_list("wasabi, Wasabi") == std::vector<std::string>{"wasabi"});
    CHECK(parse_entity_list("a,, b , ") == std::vector<std::string>{"a", "b"});
    CHECK_THROWS_AS(parse_entity_list(""), EmptyList);
    CHECK_THROWS_AS(parse_entity_list(" , ,, "), EmptyList);
}

TEST_CASE("parse_entity_list: fuzz against reference splitter") {
    std::mt19937 rng(123);
    const std::vector<std::string> words = {"wasabi", "Wasabi", "EADS", "integer n",
                                            "conjecture", "primes", "a", "B", ""};
    for (int i = 0; i < 10000; ++i) {
        std::string raw;
        int parts = static_cast<int>(rng() % 6);
        for (int k = 0; k < parts; ++k) {
            if (k) raw += ",";
            // randomized comma/space noise
            if (rng() % 3 == 0) raw += "  ";
            raw += words[rng() % words.size()];
            if (rng() % 3 == 0) raw += " ";
            if (rng() % 5 == 0) raw += ",";
        }
        auto expected = oracle_entity_list(raw);
        if (expected.empty()) {
            CHECK_THROWS_AS(parse_entity_list(raw), EmptyList);
        } else {
            CHECK(parse_entity_list(raw) == expected);
        }
    }
}

TEST_CASE("parse_entity_list: idempotent under re-join") {
    auto first = parse_entity_list("Rainer Hertrich, german,GERMAN , EADS,,");
    std::string joined;
    for (size_t i = 0; i < first.size(); ++i) joined += (i ? ", " : "") + first[i];
    CHECK(parse_entity_list(joined) == first);
}

TEST_CASE("parse_yes_no: verdict forms") {
    CHECK(parse_yes_no("Yes") == true);
    CHECK(parse_yes_no("no.") == false);
    CHECK(parse_yes_no("  YES, it is answerable") == true);
    CHECK(parse_yes_no("No - missing information") == false);
    CHECK_THROWS_AS(parse_yes_no("maybe"), UnparseableVerdict);
    CHECK_THROWS_AS(parse_yes_no(""), UnparseableVerdict);
    CHECK_THROWS_AS(parse_yes_no("yesterday"), UnparseableVerdict);
    CHECK_THROWS_AS(parse_yes_no("nope"), UnparseableVerdict);
    CHECK_THROWS_AS(parse_yes_no("the answer is yes"), UnparseableVerdict);
}

TEST_CASE("parse_count: first integer in span") {
    CHECK(parse_count("3") == 3);
    CHECK(parse_count("0") == 0);
    CHECK(parse_count("about 2 entities") == 2);
    CHECK(parse_count("12 out of 15") == 12);
    CHECK_THROWS_AS(parse_count("none"), NoInteger);
    CHECK_THROWS_AS(parse_count(""), NoInteger);
}

TEST_CASE("parse_count: fuzz against manual digit scan") {
    std::mt19937 rng(99);
    const std::string alphabet = "abc ,.x0123456789 -";
    for (int i = 0; i < 10000; ++i) {
        std::string s;
        int len = static_cast<int>(rng() % 12);
        for (int k = 0; k < len; ++k) s.push_back(alphabet[rng() % alphabet.size()]);

        bool found = false;
        long long expected = oracle_first_integer(s, &found);
        if (!found) {
            CHECK_THROWS_AS(parse_count(s), NoInteger);
        } else {
            CHECK(parse_count(s) == static_cast<int>(expected));
        }
    }
}

TEST_CASE("parsers only ever raise recoverable parse errors") {
    std::mt19937 rng(2024);
    for (int i = 0; i < 10000; ++i) {
        std::string s;
        int len = static_cast<int>(rng() % 24);
        for (int k = 0; k < len; ++k) s.push_back(static_cast<char>(32 + rng() % 95));
        try {
            (void)extract_tag(s, "answer");
        } catch (const ParseError&) {
        }
        try {
            (void)parse_entity_list(s);
        } catch (const ParseError&) {
        }
        try {
            (void)parse_yes_no(s);
        } catch (const ParseError&) {
        }
        try {
            (void)parse_count(s);
        } catch (const ParseError&) {
        }
    }
    CHECK(true);  // reaching here means no unexpected exception type escaped
}
