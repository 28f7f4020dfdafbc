#pragma once

#include <stdexcept>
#include <string>

namespace drs {

// Root of all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Recoverable parse failures. The pipeline policy is: re-ask the model once,
// then fall back to a deterministic conservative value. These never abort a run.
struct ParseError : Error {
    using Error::Error;
};

struct TagMissing : ParseError {
    explicit TagMissing(const std::string& tag) : ParseError("no <" + tag + "> tag found") {}
};
struct TagUnclosed : ParseError {
    explicit TagUnclosed(const std::string& tag) : ParseError("<" + tag + "> tag never closed") {}
};
struct EmptyList : ParseError {
    EmptyList() : ParseError("no entities parsed from response") {}
};
struct UnparseableVerdict : ParseError {
    explicit UnparseableVerdict(const std::string& got)
        : ParseError("expected yes/no verdict, got: " + got) {}
};
struct NoInteger : ParseError {
    explicit NoInteger(const std::string& got) : ParseError("no integer in span: " + got) {}
};

// Backend errors.
struct BackendError : Error {
    using Error::Error;
};
struct NoMatchingRule : BackendError {
    explicit NoMatchingRule(const std::string& prompt_head)
        : BackendError("no mock rule matches prompt: " + prompt_head) {}
};
struct RetriesExhausted : BackendError {
    using BackendError::BackendError;
};
struct Timeout : BackendError {
    using BackendError::BackendError;
};
struct AuthFailure : BackendError {
    using BackendError::BackendError;
};
struct CacheCorrupt : BackendError {
    using BackendError::BackendError;
};

// Record-level failures: the current record cannot be processed, the run continues.
struct RecordFailure : Error {
    using Error::Error;
};
struct NoEntitiesRemain : RecordFailure {
    NoEntitiesRemain() : RecordFailure("no subject/object/attribute entities remain") {}
};

// Data / configuration errors.
struct FileNotFound : Error {
    explicit FileNotFound(const std::string& path) : Error("file not found: " + path) {}
};
struct SchemaError : Error {
    SchemaError(size_t line, const std::string& detail)
        : Error("line " + std::to_string(line) + ": " + detail), line_number(line) {}
    size_t line_number;
};
struct EmptyDataset : Error {
    EmptyDataset() : Error("dataset is empty") {}
};
struct EmptyRun : Error {
    EmptyRun() : Error("no verdicts to aggregate") {}
};
struct ConfigInvalid : Error {
    using Error::Error;
};

// Prompt template errors.
struct UnknownTemplate : Error {
    explicit UnknownTemplate(const std::string& name) : Error("unknown template: " + name) {}
};
struct MissingBinding : Error {
    explicit MissingBinding(const std::string& name) : Error("missing binding: " + name) {}
};
struct UnboundPlaceholderRemaining : Error {
    explicit UnboundPlaceholderRemaining(const std::string& name)
        : Error("unbound placeholder: " + name) {}
};

}  // namespace drs
