#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "drs/backend.hpp"
#include "drs/errors.hpp"

namespace drs::test {

inline std::string source_dir() { return DRS_SOURCE_DIR; }
inline std::string prompts_dir() { return source_dir() + "/prompts"; }

// Fresh per-test scratch directory under the build tree.
inline std::string temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("drs_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

// Scripted backend where each matcher owns a response *sequence*: call k gets
// the k-th response, the last one repeating. Lets a test give different
// verdicts to the same prompt asked twice (e.g. in-search vs re-evaluation).
class SeqBackend : public Backend {
public:
    void add(const std::string& matcher, std::vector<std::string> responses) {
        rules_.push_back({matcher, std::move(responses), 0});
    }

    ChatResponse complete(const ChatRequest& request) override {
        std::lock_guard<std::mutex> lock(mu_);
        ++calls_;
        for (auto& rule : rules_) {
            if (request.prompt.find(rule.matcher) == std::string::npos) continue;
            size_t i = std::min(rule.next, rule.responses.size() - 1);
            ++rule.next;
            return {rule.responses[i], 0.0, false};
        }
        throw NoMatchingRule(request.prompt.substr(0, 120));
    }

    int calls() const { return calls_; }

private:
    struct Rule {
        std::string matcher;
        std::vector<std::string> responses;
        size_t next = 0;
    };
    std::mutex mu_;
    std::vector<Rule> rules_;
    int calls_ = 0;
};

// Counts how often the inner backend is reached; complete() fails the test run
// if `forbid` is set.
class CountingBackend : public Backend {
public:
    explicit CountingBackend(std::shared_ptr<Backend> inner) : inner_(std::move(inner)) {}

    ChatResponse complete(const ChatRequest& request) override {
        calls_.fetch_add(1);
        return inner_->complete(request);
    }

    int calls() const { return calls_.load(); }

private:
    std::shared_ptr<Backend> inner_;
    std::atomic<int> calls_{0};
};

}  // namespace drs::test
