#include "drs/backend.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "drs/errors.hpp"
#include "drs/util.hpp"

namespace drs {

using nlohmann::json;

namespace {

int64_t unix_now() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Temperature formatted once so cache keys are stable.
std::string temp_key(double t) { return format_double(t, 6); }

}  // namespace

void ChatRequest::validate() const {
    if (prompt.empty()) throw ConfigInvalid("chat request prompt is empty");
    if (temperature < 0.0 || temperature > 2.0)
        throw ConfigInvalid("temperature out of range [0, 2]: " + format_double(temperature, 3));
    if (max_output_tokens <= 0) throw ConfigInvalid("max_output_tokens must be positive");
}

void BackendConfig::validate(bool require_endpoint) const {
    if (require_endpoint && endpoint_url.empty())
        throw ConfigInvalid("backend endpoint_url is empty");
    if (max_retries < 0) throw ConfigInvalid("max_retries must be non-negative");
    if (max_concurrent_requests < 1) throw ConfigInvalid("max_concurrent_requests must be >= 1");
    if (request_timeout_s <= 0.0) throw ConfigInvalid("request_timeout must be positive");
}

BackendConfig BackendConfig::from_json(const json& j) {
    BackendConfig c;
    c.endpoint_url = j.value("endpoint_url", "");
    c.api_key_env_var = j.value("api_key_env_var", "");
    c.model_id = j.value("model", j.value("model_id", ""));
    c.request_timeout_s = j.value("request_timeout_s", 60.0);
    c.max_retries = j.value("max_retries", 3);
    c.max_concurrent_requests = j.value("max_concurrent_requests", 4);
    if (j.contains("cache_path") && !j["cache_path"].is_null())
        c.cache_path = j["cache_path"].get<std::string>();
    if (j.contains("top_p") && !j["top_p"].is_null()) c.top_p = j["top_p"].get<double>();
    c.backoff_base_s = j.value("backoff_base_s", 1.0);
    c.max_output_tokens = j.value("max_output_tokens", 1024);
    return c;
}

json BackendConfig::to_json() const {
    json j{{"endpoint_url", endpoint_url},
           {"api_key_env_var", api_key_env_var},
           {"model", model_id},
           {"request_timeout_s", request_timeout_s},
           {"max_retries", max_retries},
           {"max_concurrent_requests", max_concurrent_requests},
           {"backoff_base_s", backoff_base_s},
           {"max_output_tokens", max_output_tokens}};
    if (cache_path) j["cache_path"] = *cache_path;
    if (top_p) j["top_p"] = *top_p;
    return j;
}

MockScript MockScript::from_json(const json& j) {
    MockScript s;
    for (const auto& r : j.value("rules", json::array())) {
        Rule rule;
        rule.matcher = r.at("match").get<std::string>();
        rule.response = r.at("response").get<std::string>();
        rule.exact = r.value("exact", false);
        s.rules.push_back(std::move(rule));
    }
    if (j.contains("default_response") && !j["default_response"].is_null())
        s.default_response = j["default_response"].get<std::string>();
    s.injected_latency_s = j.value("injected_latency_s", 0.0);
    return s;
}

MockScript MockScript::load(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ConfigInvalid("bad mock script " + path + ": " + e.what());
    }
    return from_json(j);
}

MockBackend::MockBackend(MockScript script) : script_(std::move(script)) {}

ChatResponse MockBackend::complete(const ChatRequest& request) {
    request.validate();
    total_calls_.fetch_add(1);
    int now = in_flight_.fetch_add(1) + 1;
    int seen = max_in_flight_.load();
    while (now > seen && !max_in_flight_.compare_exchange_weak(seen, now)) {
    }

    if (script_.injected_latency_s > 0.0)
        std::this_thread::sleep_for(std::chrono::duration<double>(script_.injected_latency_s));
    in_flight_.fetch_sub(1);

    for (const auto& rule : script_.rules) {
        bool hit = rule.exact ? request.prompt == rule.matcher
                              : request.prompt.find(rule.matcher) != std::string::npos;
        if (hit) return {rule.response, script_.injected_latency_s, false};
    }
    if (script_.default_response)
        return {*script_.default_response, script_.injected_latency_s, false};
    throw NoMatchingRule(request.prompt.substr(0, 120));
}

std::string ResponseCache::key(const ChatRequest& request) {
    std::string k;
    k.reserve(request.prompt.size() + request.model_id.size() + 16);
    k += request.model_id;
    k += '\x1f';
    k += temp_key(request.temperature);
    k += '\x1f';
    k += request.prompt;
    return k;
}

ResponseCache::ResponseCache(std::string path) : path_(std::move(path)) {
    {
        std::ifstream in(path_);
        if (in) {
            std::string line;
            size_t lineno = 0;
            while (std::getline(in, line)) {
                ++lineno;
                if (line.empty()) continue;
                json j;
                try {
                    j = json::parse(line);
                } catch (const json::exception&) {
                    throw CacheCorrupt("cache " + path_ + " line " + std::to_string(lineno) +
                                       " is not valid JSON; rebuild the cache file");
                }
                if (!j.contains("model_id") || !j.contains("temperature") ||
                    !j.contains("prompt") || !j.contains("response_text"))
                    throw CacheCorrupt("cache " + path_ + " line " + std::to_string(lineno) +
                                       " is missing fields; rebuild the cache file");
                ChatRequest r;
                r.model_id = j["model_id"].get<std::string>();
                r.temperature = j["temperature"].get<double>();
                r.prompt = j["prompt"].get<std::string>();
                entries_[key(r)] = j["response_text"].get<std::string>();
            }
        }
    }
    auto parent = std::filesystem::path(path_).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    file_ = std::fopen(path_.c_str(), "ab");
    if (!file_) throw Error("cannot open cache file: " + path_);
}

ResponseCache::~ResponseCache() {
    if (file_) std::fclose(file_);
}

std::optional<std::string> ResponseCache::lookup(const ChatRequest& request) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key(request));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ResponseCache::store(const ChatRequest& request, const std::string& response_text) {
    json j{{"key_hash", fnv1a64_hex(key(request))},
           {"model_id", request.model_id},
           {"temperature", request.temperature},
           {"prompt", request.prompt},
           {"response_text", response_text},
           {"timestamp", unix_now()}};
    std::string line = j.dump();
    line.push_back('\n');

    std::lock_guard<std::mutex> lock(mu_);
    entries_[key(request)] = response_text;
    // single buffered write + flush keeps concurrent appends line-atomic
    std::fwrite(line.data(), 1, line.size(), file_);
    std::fflush(file_);
}

size_t ResponseCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

CachingBackend::CachingBackend(std::shared_ptr<Backend> inner,
                               std::shared_ptr<ResponseCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

ChatResponse CachingBackend::complete(const ChatRequest& request) {
    if (auto hit = cache_->lookup(request)) return {*hit, 0.0, true};
    ChatResponse r = inner_->complete(request);
    cache_->store(request, r.text);
    return r;
}

RateLimitedBackend::RateLimitedBackend(std::shared_ptr<Backend> inner, int max_concurrent)
    : inner_(std::move(inner)), limit_(max_concurrent), available_(max_concurrent) {
    if (max_concurrent < 1) throw ConfigInvalid("max_concurrent_requests must be >= 1");
}

ChatResponse RateLimitedBackend::complete(const ChatRequest& request) {
    {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [&] { return available_ > 0; });
        --available_;
    }
    try {
        ChatResponse r = inner_->complete(request);
        {
            std::lock_guard<std::mutex> lock(mu_);
            ++available_;
        }
        cv_.notify_one();
        return r;
    } catch (...) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            ++available_;
        }
        cv_.notify_one();
        throw;
    }
}

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
    config_.validate(/*require_endpoint=*/true);
}

ChatResponse HttpBackend::complete(const ChatRequest& request) {
    request.validate();

    std::string api_key;
    if (!config_.api_key_env_var.empty()) {
        const char* key = std::getenv(config_.api_key_env_var.c_str());
        if (!key || !*key)
            throw AuthFailure("environment variable " + config_.api_key_env_var + " is not set");
        api_key = key;
    }

    // split endpoint into scheme://host[:port] and path
    std::string base = config_.endpoint_url;
    std::string path = "/";
    size_t scheme_end = base.find("://");
    size_t path_start = base.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start != std::string::npos) {
        path = base.substr(path_start);
        base = base.substr(0, path_start);
    }

    json body{{"model", request.model_id},
              {"messages", json::array({json{{"role", "user"}, {"content", request.prompt}}})},
              {"temperature", request.temperature},
              {"max_tokens", request.max_output_tokens}};
    if (config_.top_p) body["top_p"] = *config_.top_p;
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

    thread_local std::mt19937 rng{std::random_device{}()};
    std::uniform_real_distribution<double> jitter(0.8, 1.2);

    std::string last_error;
    bool last_was_timeout = false;
    auto start = std::chrono::steady_clock::now();

    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            double delay = config_.backoff_base_s * static_cast<double>(1 << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::duration<double>(delay * jitter(rng)));
        }

        httplib::Client client(base);
        auto timeout_us =
            std::chrono::microseconds(static_cast<int64_t>(config_.request_timeout_s * 1e6));
        client.set_connection_timeout(timeout_us);
        client.set_read_timeout(timeout_us);
        client.set_write_timeout(timeout_us);

        auto res = client.Post(path, headers, payload, "application/json");
        if (!res) {
            last_was_timeout = res.error() == httplib::Error::Read ||
                               res.error() == httplib::Error::ConnectionTimeout;
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403)
            throw AuthFailure("endpoint rejected credentials (HTTP " +
                              std::to_string(res->status) + ")");
        if (res->status >= 500) {
            last_was_timeout = false;
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw BackendError("unexpected HTTP status " + std::to_string(res->status) + ": " +
                               res->body.substr(0, 200));

        try {
            json parsed = json::parse(res->body);
            std::string text = parsed.at("choices").at(0).at("message").at("content");
            return {std::move(text), elapsed_s(start), false};
        } catch (const json::exception& e) {
            last_was_timeout = false;
            last_error = std::string("malformed response body: ") + e.what();
            continue;
        }
    }

    if (last_was_timeout)
        throw Timeout("request timed out after " + std::to_string(config_.max_retries + 1) +
                      " attempts: " + last_error);
    throw RetriesExhausted("request failed after " + std::to_string(config_.max_retries + 1) +
                           " attempts: " + last_error);
}

std::shared_ptr<Backend> make_backend(const BackendConfig& config,
                                      const std::optional<MockScript>& mock,
                                      std::shared_ptr<ResponseCache> shared_cache) {
    std::shared_ptr<Backend> inner;
    if (mock) {
        inner = std::make_shared<MockBackend>(*mock);
    } else {
        inner = std::make_shared<RateLimitedBackend>(std::make_shared<HttpBackend>(config),
                                                     config.max_concurrent_requests);
    }
    if (shared_cache) return std::make_shared<CachingBackend>(std::move(inner), shared_cache);
    if (config.cache_path) {
        auto cache = std::make_shared<ResponseCache>(*config.cache_path);
        return std::make_shared<CachingBackend>(std::move(inner), std::move(cache));
    }
    return inner;
}

ChatResponse LlmClient::ask(std::string_view prompt, std::string_view stage) const {
    ChatRequest req{std::string(prompt), temperature, max_output_tokens, model_id};
    ChatResponse res = backend->complete(req);
    if (trace) {
        trace->add({{"type", "llm_call"},
                    {"stage", std::string(stage)},
                    {"model", model_id},
                    {"prompt_hash", fnv1a64_hex(req.prompt)},
                    {"response_hash", fnv1a64_hex(res.text)},
                    {"from_cache", res.from_cache}});
    }
    return res;
}

}  // namespace drs
