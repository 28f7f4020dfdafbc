#pragma once

#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace drs {

// Per-record event buffer. Pipeline stages append events while a record is
// processed; the runner stamps record identity and flushes the whole block
// to the trace file when the record completes.
class RecordTrace {
public:
    void add(nlohmann::json event) { events_.push_back(std::move(event)); }
    const std::vector<nlohmann::json>& events() const { return events_; }

    // Count of llm_call events whose stage matches the given prefix.
    int count_calls(const std::string& stage_prefix = "") const;

private:
    std::vector<nlohmann::json> events_;
};

// Append-only JSONL trace file, shared across workers.
class TraceWriter {
public:
    explicit TraceWriter(const std::string& path);
    ~TraceWriter();

    void write(const nlohmann::json& event);
    void write_block(const std::vector<nlohmann::json>& events);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::mutex mu_;
    FILE* file_ = nullptr;
};

std::vector<nlohmann::json> read_trace(const std::string& path);

}  // namespace drs
