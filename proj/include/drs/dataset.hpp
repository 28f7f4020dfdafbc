#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace drs {

// One CouldAsk-format item: a document, a question about it, the labeled
// question entities, and whether the document can answer the question.
struct DatasetRecord {
    std::string id;
    std::string subset;
    std::string document;
    std::string question;
    std::vector<std::string> labeled_entities;
    bool answerable = false;

    bool operator==(const DatasetRecord&) const = default;
};

struct SubsetStats {
    size_t records = 0;
    size_t unanswerable = 0;
    double doc_len_mean = 0, doc_len_std = 0;      // whitespace tokens
    double question_len_mean = 0, question_len_std = 0;
    double entity_count_mean = 0, entity_count_std = 0;
};

struct DatasetStats {
    std::map<std::string, SubsetStats> per_subset;
    SubsetStats overall;
};

// JSONL, one record per line. Schema violations report the line number and
// field; unanswerable records must carry labeled entities (the evaluation
// denominator depends on them).
std::vector<DatasetRecord> load_dataset(const std::string& path);
void save_dataset(const std::string& path, const std::vector<DatasetRecord>& records);

std::vector<DatasetRecord> filter_unanswerable(const std::vector<DatasetRecord>& records);

// Lengths are whitespace-delimited token counts (an approximation of the
// published numbers, which use a model tokenizer); std is population.
DatasetStats dataset_stats(const std::vector<DatasetRecord>& records);

std::string render_stats_markdown(const DatasetStats& stats);

// Maps a raw JSONL export (e.g. the public CouldAsk release) into this schema,
// accepting the common field aliases for each column. Unanswerable records
// with no entities are dropped (counted in the return value).
struct ConvertResult {
    std::vector<DatasetRecord> records;
    size_t dropped = 0;
};
ConvertResult convert_dataset(const std::string& input_path,
                              const std::string& default_subset);

}  // namespace drs
