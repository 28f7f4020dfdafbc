#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace drs {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// Canonical entity form: lowercased, trimmed, internal whitespace collapsed.
std::string canonicalize(std::string_view s);

// Case-insensitive substring test.
bool contains_ci(std::string_view haystack, std::string_view needle);

// Whitespace-delimited token count.
size_t token_count(std::string_view s);

// FNV-1a 64-bit, hex-encoded. Stable across runs and platforms; used for
// cache keys and trace prompt/response hashes.
uint64_t fnv1a64(std::string_view s);
std::string fnv1a64_hex(std::string_view s);

// Fixed-precision decimal formatting (gcc 11 has no <format>).
std::string format_double(double v, int decimals);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;  // population
};
MeanStd mean_std(const std::vector<double>& xs);

}  // namespace drs
