#include "drs/trace.hpp"

#include <filesystem>
#include <fstream>

#include "drs/errors.hpp"

namespace drs {

int RecordTrace::count_calls(const std::string& stage_prefix) const {
    int n = 0;
    for (const auto& e : events_) {
        if (e.value("type", "") != "llm_call") continue;
        if (e.value("stage", "").rfind(stage_prefix, 0) == 0) ++n;
    }
    return n;
}

TraceWriter::TraceWriter(const std::string& path) : path_(path) {
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_) throw Error("cannot open trace file: " + path);
}

TraceWriter::~TraceWriter() {
    if (file_) std::fclose(file_);
}

void TraceWriter::write(const nlohmann::json& event) {
    std::lock_guard<std::mutex> lock(mu_);
    std::string line = event.dump();
    line.push_back('\n');
    std::fwrite(line.data(), 1, line.size(), file_);
    std::fflush(file_);
}

void TraceWriter::write_block(const std::vector<nlohmann::json>& events) {
    std::lock_guard<std::mutex> lock(mu_);
    std::string block;
    for (const auto& e : events) {
        block += e.dump();
        block.push_back('\n');
    }
    std::fwrite(block.data(), 1, block.size(), file_);
    std::fflush(file_);
}

std::vector<nlohmann::json> read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path);
    std::vector<nlohmann::json> events;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            events.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError(lineno, std::string("bad trace line: ") + e.what());
        }
    }
    return events;
}

}  // namespace drs
