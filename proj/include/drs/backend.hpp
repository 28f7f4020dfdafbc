#pragma once

#include <atomic>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "drs/trace.hpp"

namespace drs {

struct ChatRequest {
    std::string prompt;
    double temperature = 0.0;  // valid range [0.0, 2.0]
    int max_output_tokens = 1024;
    std::string model_id;

    void validate() const;  // throws ConfigInvalid
};

struct ChatResponse {
    std::string text;
    double latency_s = 0.0;
    bool from_cache = false;
};

struct BackendConfig {
    std::string endpoint_url;
    std::string api_key_env_var;       // key is read from the environment, never stored
    std::string model_id;
    double request_timeout_s = 60.0;
    int max_retries = 3;
    int max_concurrent_requests = 4;
    std::optional<std::string> cache_path;
    std::optional<double> top_p;       // omitted -> provider default
    double backoff_base_s = 1.0;       // doubles per attempt, jitter +/-20%
    int max_output_tokens = 1024;

    void validate(bool require_endpoint) const;

    static BackendConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// Scripted responses for offline deterministic runs. First matching rule wins;
// a matcher is a substring (or the exact prompt when `exact` is set).
struct MockScript {
    struct Rule {
        std::string matcher;
        std::string response;
        bool exact = false;
    };
    std::vector<Rule> rules;
    std::optional<std::string> default_response;
    double injected_latency_s = 0.0;  // simulated per-call latency (actually slept)

    static MockScript from_json(const nlohmann::json& j);
    static MockScript load(const std::string& path);
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Deterministic scripted backend. Thread-safe; instrumented with call counters
// so tests can assert call accounting and concurrency bounds.
class MockBackend : public Backend {
public:
    explicit MockBackend(MockScript script);

    ChatResponse complete(const ChatRequest& request) override;

    int total_calls() const { return total_calls_.load(); }
    int max_in_flight() const { return max_in_flight_.load(); }

private:
    MockScript script_;
    std::atomic<int> total_calls_{0};
    std::atomic<int> in_flight_{0};
    std::atomic<int> max_in_flight_{0};
};

// Persistent response cache: append-only JSONL of
// {key_hash, model_id, temperature, prompt, response_text, timestamp}.
// Keyed by (model_id, prompt, temperature) so sweeps never collide.
class ResponseCache {
public:
    explicit ResponseCache(std::string path);  // throws CacheCorrupt on bad lines
    ~ResponseCache();

    std::optional<std::string> lookup(const ChatRequest& request) const;
    void store(const ChatRequest& request, const std::string& response_text);
    size_t size() const;

    static std::string key(const ChatRequest& request);

private:
    std::string path_;
    mutable std::mutex mu_;
    std::map<std::string, std::string> entries_;
    FILE* file_ = nullptr;
};

// Serves from cache when possible, delegates misses, stores results.
class CachingBackend : public Backend {
public:
    CachingBackend(std::shared_ptr<Backend> inner, std::shared_ptr<ResponseCache> cache);
    ChatResponse complete(const ChatRequest& request) override;

private:
    std::shared_ptr<Backend> inner_;
    std::shared_ptr<ResponseCache> cache_;
};

// Bounds concurrent in-flight requests to the inner backend.
class RateLimitedBackend : public Backend {
public:
    RateLimitedBackend(std::shared_ptr<Backend> inner, int max_concurrent);
    ChatResponse complete(const ChatRequest& request) override;

private:
    std::shared_ptr<Backend> inner_;
    int limit_;
    int available_;
    std::mutex mu_;
    std::condition_variable cv_;
};

// OpenAI-compatible chat-completion client. POSTs
// {model, messages:[{role:"user", content}], temperature, max_tokens [, top_p]}
// and reads choices[0].message.content. Retries transport/5xx failures with
// exponential backoff.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(BackendConfig config);
    ChatResponse complete(const ChatRequest& request) override;

private:
    BackendConfig config_;
};

// Assembles the configured stack: [Caching](RateLimited(Http)) or [Caching](Mock).
std::shared_ptr<Backend> make_backend(const BackendConfig& config,
                                      const std::optional<MockScript>& mock = std::nullopt,
                                      std::shared_ptr<ResponseCache> shared_cache = nullptr);

// Convenience handle used by pipeline stages: binds a backend to the model and
// sampling settings, and records one llm_call trace event per ask.
struct LlmClient {
    Backend* backend = nullptr;
    std::string model_id;
    double temperature = 0.0;
    int max_output_tokens = 1024;
    RecordTrace* trace = nullptr;

    ChatResponse ask(std::string_view prompt, std::string_view stage) const;
};

}  // namespace drs
