#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace varch {

/// Whole-file read; FileNotFound when the path cannot be opened.
std::string read_file(const std::string& path);

/// Write-temp-then-rename so readers never observe a partial file. Throws
/// IoError on failure.
void atomic_write_file(const std::string& path, const std::string& content);

/// 64-bit FNV-1a over arbitrary bytes.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& text);

/// Hash rendered as 16 lowercase hex digits.
std::string hash_hex(std::uint64_t h);
std::string file_hash_hex(const std::string& path);

/// Splits one CSV line on commas (no quoting; the schemas here never need it).
std::vector<std::string> split_csv(const std::string& line);

/// Splits text into lines, accepting both \n and \r\n endings and ignoring a
/// trailing newline.
std::vector<std::string> split_lines(const std::string& text);

/// Shortest round-trip decimal rendering of a double (classic locale).
std::string format_double(double v);

/// Strict double parse of a full token; false on any trailing garbage.
bool parse_double(const std::string& token, double& out);

}  // namespace varch
