#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "drs/errors.hpp"
#include "drs/prompt_catalog.hpp"
#include "drs/util.hpp"
#include "support/test_helpers.hpp"

using namespace drs;

namespace {

std::string read_golden(const std::string& name) {
    std::string text = read_file(test::source_dir() + "/tests/golden/" + name);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
}

const PromptCatalog& catalog() {
    static PromptCatalog c = PromptCatalog::load(test::prompts_dir());
    return c;
}

}  // namespace

TEST_CASE("catalog loads every manifest template") {
    for (const char* name :
         {"entity_extraction", "entity_categorize", "statement_question", "entity_overlap",
          "answerability", "entity_inclusion", "baseline_zero", "baseline_zero_cot",
          "baseline_few", "baseline_few_cot"})
        CHECK(catalog().has(name));
}

TEST_CASE("rendered templates match golden files") {
    CHECK(catalog().render("entity_extraction",
                           {{"question", "How many calories are in wasabi?"}}) ==
          read_golden("entity_extraction.rendered.txt"));

    CHECK(catalog().render("entity_categorize",
                           {{"question", "How many calories are in wasabi?"},
                            {"entity", "wasabi"}}) ==
          read_golden("entity_categorize.rendered.txt"));

    CHECK(catalog().render(
              "statement_question",
              {{"context",
                "The major constituents of raw wasabi root are carbohydrates and water."},
               {"entities", "wasabi, calories"}}) ==
          read_golden("statement_question.rendered.txt"));

    CHECK(catalog().render("entity_overlap",
                           {{"question", "How many calories are in wasabi?"},
                            {"entities", "calories, wasabi"},
                            {"new_question",
                             "What are the major constituents of raw wasabi root?"}}) ==
          read_golden("entity_overlap.rendered.txt"));

    CHECK(catalog().render("answerability",
                           {{"context", "Wasabi is usually eaten in tiny amounts."},
                            {"question",
                             "What are the major constituents of raw wasabi root?"}}) ==
          read_golden("answerability.rendered.txt"));

    CHECK(catalog().render("entity_inclusion",
                           {{"question",
                             "What are the major constituents of raw wasabi root?"},
                            {"entities", "calories, wasabi"}}) ==
          read_golden("entity_inclusion.rendered.txt"));
}

TEST_CASE("rendered prompt starts with the expected instruction") {
    auto text = catalog().render("entity_extraction",
                                 {{"question", "How many calories are in wasabi?"}});
    CHECK(text.rfind("Find out all entities in the following question: How many calories are in "
                     "wasabi?",
                     0) == 0);
}

TEST_CASE("render errors") {
    CHECK_THROWS_AS(catalog().render("nonexistent", {}), UnknownTemplate);
    CHECK_THROWS_AS(
        catalog().render("answerability", {{"question", "Q?"}}),  // {context} unbound
        MissingBinding);
}

TEST_CASE("unlisted placeholder in a template is rejected at render time") {
    auto dir = test::temp_dir("catalog");
    {
        std::ofstream manifest(dir + "/manifest.json");
        manifest << R"({"templates":[{"name":"t","file":"t.txt","required":["question"]}]})";
        std::ofstream t(dir + "/t.txt");
        t << "ask {question} about {mystery}";
    }
    auto cat = PromptCatalog::load(dir);
    CHECK_THROWS_AS(cat.render("t", {{"question", "Q?"}}), UnboundPlaceholderRemaining);
}

TEST_CASE("entity join rule is comma and space") {
    CHECK(join_entities({"a", "b", "c"}) == "a, b, c");
    CHECK(join_entities({"only"}) == "only");
    CHECK(join_entities({}) == "");

    auto text = catalog().render(
        "statement_question", {{"context", "doc"}, {"entities", join_entities({"a", "b", "c"})}});
    CHECK(text.find("a, b, c") != std::string::npos);
}

TEST_CASE("substituted values are not re-scanned for placeholders") {
    auto text = catalog().render("answerability",
                                 {{"context", "literal {question} braces"}, {"question", "Q?"}});
    CHECK(text.find("literal {question} braces") != std::string::npos);
}

TEST_CASE("render is injective over placeholder-free binding values") {
    std::mt19937 rng(5);
    std::set<std::string> bindings_seen;
    std::set<std::string> rendered;
    int distinct = 0;
    for (int i = 0; i < 200; ++i) {
        std::string q = "q" + std::to_string(rng() % 1000);
        std::string c = "c" + std::to_string(rng() % 1000);
        if (!bindings_seen.insert(q + "\x1f" + c).second) continue;
        rendered.insert(catalog().render("answerability", {{"context", c}, {"question", q}}));
        ++distinct;
    }
    CHECK(static_cast<int>(rendered.size()) == distinct);
}

TEST_CASE("template hash is stable and sensitive to content") {
    auto h1 = catalog().template_hash("answerability");
    auto h2 = catalog().template_hash("answerability");
    CHECK(h1 == h2);
    CHECK(h1 != catalog().template_hash("entity_extraction"));
}
