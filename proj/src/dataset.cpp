#include "drs/dataset.hpp"

#include <filesystem>
#include <fstream>

#include "drs/errors.hpp"
#include "drs/util.hpp"

namespace drs {

using nlohmann::json;

namespace {

std::string require_string(const json& j, const char* field, size_t line) {
    if (!j.contains(field)) throw SchemaError(line, std::string("missing field \"") + field + "\"");
    if (!j[field].is_string())
        throw SchemaError(line, std::string("field \"") + field + "\" must be a string");
    return j[field].get<std::string>();
}

DatasetRecord record_from_json(const json& j, size_t line) {
    DatasetRecord r;
    r.id = require_string(j, "id", line);
    r.subset = require_string(j, "subset", line);
    r.document = require_string(j, "document", line);
    r.question = require_string(j, "question", line);
    if (r.document.empty()) throw SchemaError(line, "field \"document\" is empty");
    if (r.question.empty()) throw SchemaError(line, "field \"question\" is empty");

    if (!j.contains("answerable") || !j["answerable"].is_boolean())
        throw SchemaError(line, "field \"answerable\" must be a boolean");
    r.answerable = j["answerable"].get<bool>();

    if (!j.contains("labeled_entities") || !j["labeled_entities"].is_array())
        throw SchemaError(line, "field \"labeled_entities\" must be an array of strings");
    for (const auto& e : j["labeled_entities"]) {
        if (!e.is_string())
            throw SchemaError(line, "field \"labeled_entities\" must contain only strings");
        r.labeled_entities.push_back(e.get<std::string>());
    }
    if (!r.answerable && r.labeled_entities.empty())
        throw SchemaError(line, "unanswerable record has no labeled_entities");
    return r;
}

json record_to_json(const DatasetRecord& r) {
    return {{"id", r.id},
            {"subset", r.subset},
            {"document", r.document},
            {"question", r.question},
            {"labeled_entities", r.labeled_entities},
            {"answerable", r.answerable}};
}

}  // namespace

std::vector<DatasetRecord> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path);

    std::vector<DatasetRecord> records;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw SchemaError(lineno, std::string("invalid JSON: ") + e.what());
        }
        records.push_back(record_from_json(j, lineno));
    }
    return records;
}

void save_dataset(const std::string& path, const std::vector<DatasetRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += record_to_json(r).dump();
        out.push_back('\n');
    }
    write_file(path, out);
}

std::vector<DatasetRecord> filter_unanswerable(const std::vector<DatasetRecord>& records) {
    std::vector<DatasetRecord> out;
    for (const auto& r : records)
        if (!r.answerable) out.push_back(r);
    return out;
}

namespace {

SubsetStats stats_for(const std::vector<const DatasetRecord*>& records) {
    SubsetStats s;
    s.records = records.size();
    std::vector<double> doc_lens, q_lens, ent_counts;
    for (const auto* r : records) {
        if (!r->answerable) ++s.unanswerable;
        doc_lens.push_back(static_cast<double>(token_count(r->document)));
        q_lens.push_back(static_cast<double>(token_count(r->question)));
        ent_counts.push_back(static_cast<double>(r->labeled_entities.size()));
    }
    auto doc = mean_std(doc_lens);
    auto q = mean_std(q_lens);
    auto ent = mean_std(ent_counts);
    s.doc_len_mean = doc.mean;
    s.doc_len_std = doc.stddev;
    s.question_len_mean = q.mean;
    s.question_len_std = q.stddev;
    s.entity_count_mean = ent.mean;
    s.entity_count_std = ent.stddev;
    return s;
}

}  // namespace

DatasetStats dataset_stats(const std::vector<DatasetRecord>& records) {
    if (records.empty()) throw EmptyDataset();

    std::map<std::string, std::vector<const DatasetRecord*>> by_subset;
    std::vector<const DatasetRecord*> all;
    for (const auto& r : records) {
        by_subset[r.subset].push_back(&r);
        all.push_back(&r);
    }

    DatasetStats stats;
    for (const auto& [subset, ptrs] : by_subset) stats.per_subset[subset] = stats_for(ptrs);
    stats.overall = stats_for(all);
    return stats;
}

std::string render_stats_markdown(const DatasetStats& stats) {
    auto pm = [](double mean, double sd) {
        return format_double(mean, 2) + " ± " + format_double(sd, 2);
    };
    std::string out =
        "| Subset | Unanswerable / Total | Document Length | Question Length | Entity Numbers "
        "|\n|---|---|---|---|---|\n";
    auto row = [&](const std::string& name, const SubsetStats& s) {
        out += "| " + name + " | " + std::to_string(s.unanswerable) + " / " +
               std::to_string(s.records) + " | " + pm(s.doc_len_mean, s.doc_len_std) + " | " +
               pm(s.question_len_mean, s.question_len_std) + " | " +
               pm(s.entity_count_mean, s.entity_count_std) + " |\n";
    };
    for (const auto& [subset, s] : stats.per_subset) row(subset, s);
    row("All", stats.overall);
    return out;
}

ConvertResult convert_dataset(const std::string& input_path, const std::string& default_subset) {
    std::ifstream in(input_path);
    if (!in) throw FileNotFound(input_path);

    auto first_string = [](const json& j, std::initializer_list<const char*> names,
                           const std::string& fallback) {
        for (const char* n : names)
            if (j.contains(n) && j[n].is_string()) return j[n].get<std::string>();
        return fallback;
    };

    ConvertResult result;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw SchemaError(lineno, std::string("invalid JSON: ") + e.what());
        }

        DatasetRecord r;
        r.subset = first_string(j, {"subset", "source", "dataset"}, default_subset);
        r.id = first_string(j, {"id", "example_id", "qid"},
                            r.subset + "-" + std::to_string(lineno));
        r.document = first_string(j, {"document", "context", "text", "passage"}, "");
        r.question = first_string(j, {"question", "query"}, "");
        if (r.document.empty()) throw SchemaError(lineno, "no document/context field");
        if (r.question.empty()) throw SchemaError(lineno, "no question field");

        bool have_answerable = false;
        for (const char* n : {"answerable", "is_answerable"}) {
            if (!j.contains(n)) continue;
            if (j[n].is_boolean()) {
                r.answerable = j[n].get<bool>();
                have_answerable = true;
            } else if (j[n].is_number_integer()) {
                r.answerable = j[n].get<int>() != 0;
                have_answerable = true;
            }
        }
        if (!have_answerable) throw SchemaError(lineno, "no answerable/is_answerable field");

        for (const char* n : {"labeled_entities", "entities", "question_entities"}) {
            if (j.contains(n) && j[n].is_array()) {
                for (const auto& e : j[n])
                    if (e.is_string()) r.labeled_entities.push_back(e.get<std::string>());
                break;
            }
        }
        if (!r.answerable && r.labeled_entities.empty()) {
            ++result.dropped;  // unusable for evaluation
            continue;
        }
        result.records.push_back(std::move(r));
    }
    return result;
}

}  // namespace drs
