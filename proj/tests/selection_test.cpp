#include <doctest.h>

#include <algorithm>
#include <random>

#include "drs/errors.hpp"
#include "drs/selection.hpp"
#include "drs/util.hpp"
#include "support/test_helpers.hpp"

using namespace drs;

namespace {

const PromptCatalog& catalog() {
    static PromptCatalog c = PromptCatalog::load(test::prompts_dir());
    return c;
}

std::set<std::string> make_set(std::initializer_list<std::string> items) {
    std::set<std::string> out;
    for (const auto& s : items) out.insert(canonicalize(s));
    return out;
}

CandidateQuestion make_candidate(const std::string& question, std::vector<size_t> indices) {
    CandidateQuestion c;
    c.question = question;
    c.combination.member_indices = std::move(indices);
    c.entity_count = c.combination.size();
    c.entities_verified = true;
    c.answerable_in_search = true;
    return c;
}

std::vector<EntityRecord> entities(const std::vector<std::string>& surfaces) {
    std::vector<EntityRecord> out;
    for (size_t i = 0; i < surfaces.size(); ++i) {
        auto r = EntityRecord::make(surfaces[i], i, "q");
        r.role = EntityRole::subject;
        out.push_back(r);
    }
    return out;
}

}  // namespace

TEST_CASE("overlap score: exact ratio on canonical sets") {
    CHECK(overlap_score(make_set({"a", "b", "c"}),
                        make_set({"a", "b", "c", "d", "e"})) == doctest::Approx(0.6));
    CHECK(overlap_score(make_set({"x", "y"}), make_set({"x", "y"})) == 1.0);
    CHECK(overlap_score(make_set({"p"}), make_set({"q", "r"})) == 0.0);
    CHECK_THROWS_AS(overlap_score(make_set({"a"}), {}), ConfigInvalid);
}

TEST_CASE("overlap score: case-insensitive via canonical forms") {
    CHECK(overlap_score(make_set({"WASABI", "Calories"}), make_set({"wasabi", "calories"})) ==
          1.0);
}

TEST_CASE("overlap score: randomized pairs against a brute-force count") {
    std::mt19937 rng(77);
    for (int round = 0; round < 1000; ++round) {
        std::set<std::string> cand, orig;
        size_t cn = rng() % 6, on = 1 + rng() % 6;
        for (size_t i = 0; i < cn; ++i) cand.insert("e" + std::to_string(rng() % 10));
        for (size_t i = 0; i < on; ++i) orig.insert("e" + std::to_string(rng() % 10));

        size_t expected = 0;
        for (const auto& e : cand) expected += orig.count(e);
        CHECK(overlap_score(cand, orig) ==
              static_cast<double>(expected) / static_cast<double>(orig.size()));
    }
}

TEST_CASE("reevaluation records answerability and score for every candidate") {
    MockScript script;
    script.rules.push_back({"Here is a question: Q-good?", "<answer>yes</answer>", false});
    script.rules.push_back({"Here is a question: Q-bad?", "<answer>no</answer>", false});
    MockBackend backend(script);
    LlmClient client{&backend, "mock-model", 0.0, 512, nullptr};

    auto ents = entities({"a", "b", "c"});
    std::vector<CandidateQuestion> candidates{make_candidate("Q-good?", {0, 1}),
                                              make_candidate("Q-bad?", {0, 1, 2})};
    auto scored = reevaluate("doc", candidates, ents, client, catalog());

    REQUIRE(scored.size() == 2);
    CHECK(scored[0].answerable_final);
    CHECK(scored[0].overlap_score == doctest::Approx(2.0 / 3.0));
    CHECK_FALSE(scored[1].answerable_final);
    CHECK(scored[1].overlap_score == 1.0);  // score recorded even when unanswerable
    CHECK(scored[0].discovery_index == 0);
    CHECK(scored[1].discovery_index == 1);
}

TEST_CASE("selection picks the answerable candidate with the highest overlap") {
    // four candidates; the second and fourth are answerable and the fourth
    // carries the larger combination, so it wins
    std::vector<ScoredCandidate> scored(4);
    for (size_t i = 0; i < 4; ++i) {
        scored[i].candidate = make_candidate("Q" + std::to_string(i + 1) + "?", {});
        scored[i].discovery_index = i;
    }
    scored[0].answerable_final = false;
    scored[0].overlap_score = 0.75;
    scored[1].answerable_final = true;
    scored[1].overlap_score = 0.5;
    scored[2].answerable_final = false;
    scored[2].overlap_score = 1.0;
    scored[3].answerable_final = true;
    scored[3].overlap_score = 0.75;

    auto outcome = select_final(scored);
    CHECK(outcome.status == ReformulationOutcome::Status::reformulated);
    CHECK(outcome.final_question == "Q4?");
}

TEST_CASE("selection never returns an unanswerable candidate") {
    std::mt19937 rng(11);
    for (int round = 0; round < 200; ++round) {
        std::vector<ScoredCandidate> scored(1 + rng() % 5);
        std::set<std::string> answerable_questions;
        for (size_t i = 0; i < scored.size(); ++i) {
            scored[i].candidate = make_candidate("Q" + std::to_string(i), {});
            scored[i].discovery_index = i;
            scored[i].answerable_final = rng() % 2 == 0;
            scored[i].overlap_score = static_cast<double>(rng() % 5) / 4.0;
            if (scored[i].answerable_final)
                answerable_questions.insert(scored[i].candidate.question);
        }
        auto outcome = select_final(scored);
        if (answerable_questions.empty()) {
            CHECK(outcome.status == ReformulationOutcome::Status::failed);
            CHECK_FALSE(outcome.final_question.has_value());
        } else {
            REQUIRE(outcome.final_question.has_value());
            CHECK(answerable_questions.count(*outcome.final_question) == 1);
        }
    }
}

TEST_CASE("score ties resolve to the earliest-discovered candidate") {
    std::vector<ScoredCandidate> scored(3);
    for (size_t i = 0; i < 3; ++i) {
        scored[i].candidate = make_candidate("Q" + std::to_string(i), {});
        scored[i].discovery_index = i;
        scored[i].answerable_final = true;
        scored[i].overlap_score = 0.5;
    }
    auto outcome = select_final(scored);
    CHECK(outcome.final_question == "Q0");
}

TEST_CASE("tie-break is independent of list permutation") {
    // discovery order is recorded per candidate, so permuting the vector never
    // changes the winner, even on exact score ties
    std::mt19937 rng(42);
    for (int round = 0; round < 100; ++round) {
        std::vector<ScoredCandidate> scored(4);
        for (size_t i = 0; i < scored.size(); ++i) {
            scored[i].candidate = make_candidate("Q" + std::to_string(i), {});
            scored[i].discovery_index = i;
            scored[i].answerable_final = rng() % 3 > 0;
            scored[i].overlap_score = static_cast<double>(rng() % 3) / 2.0;  // forces ties
        }
        auto expected = select_final(scored).final_question;
        std::shuffle(scored.begin(), scored.end(), rng);
        CHECK(select_final(scored).final_question == expected);
    }
}

TEST_CASE("empty candidate list fails") {
    auto outcome = select_final({});
    CHECK(outcome.status == ReformulationOutcome::Status::failed);
    CHECK_FALSE(outcome.final_question.has_value());
}

TEST_CASE("with all candidates answerable the winner has the maximal combination") {
    std::mt19937 rng(23);
    for (int round = 0; round < 100; ++round) {
        const size_t n = 3 + rng() % 3;
        auto ents = entities([&] {
            std::vector<std::string> s;
            for (size_t i = 0; i < n; ++i) s.push_back("e" + std::to_string(i));
            return s;
        }());

        MockScript script;
        script.default_response = "<answer>yes</answer>";
        MockBackend backend(script);
        LlmClient client{&backend, "mock-model", 0.0, 512, nullptr};

        std::vector<CandidateQuestion> candidates;
        size_t max_size = 0;
        for (int c = 0; c < 3; ++c) {
            std::vector<size_t> indices;
            for (size_t i = 0; i < n; ++i)
                if (rng() % 2) indices.push_back(i);
            if (indices.empty()) indices.push_back(0);
            max_size = std::max(max_size, indices.size());
            candidates.push_back(
                make_candidate("Q" + std::to_string(c), std::move(indices)));
        }

        auto scored = reevaluate("doc", candidates, ents, client, catalog());
        auto outcome = select_final(scored);
        REQUIRE(outcome.final_question.has_value());
        for (const auto& c : candidates)
            if (c.question == *outcome.final_question)
                CHECK(c.combination.size() == max_size);
    }
}
