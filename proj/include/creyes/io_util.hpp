#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace creyes {

// Shortest round-trip decimal form ('.' decimal point, locale-free). Keeping
// every float exact across a CSV round trip is what makes re-derived
// histograms match in-memory ones bit for bit.
std::string format_double(double v);

// Fixed-precision form for human-facing summaries.
std::string format_double_fixed(double v, int precision);

// Strict full-string parses; return false without touching out on failure.
bool parse_double(std::string_view s, double& out);
bool parse_long(std::string_view s, long long& out);
bool parse_u64(std::string_view s, std::uint64_t& out);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

// Splits file contents into lines, accepting both LF and CRLF input.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace creyes
