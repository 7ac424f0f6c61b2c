#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smotepipe::text {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Locale-independent decimal parse; the whole token must be consumed.
std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<std::uint64_t> parse_u64(std::string_view s);

/// 17 significant digits, so every finite double round-trips exactly.
std::string format_double(double v);
std::string join_doubles(std::span<const double> values, char sep = ',');
std::vector<double> parse_doubles(std::string_view s, char sep = ',');

/// Fixed-point rendering with `decimals` digits after the point.
std::string format_fixed(double v, int decimals);

/// One `key = value` entry per line, `#` comments, blank lines ignored. Keys
/// keep their source order; repeated keys are preserved.
struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};
std::vector<KeyValue> parse_key_values(std::string_view content, const std::string& source);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// 64-bit FNV-1a digest, rendered as 16 lowercase hex digits by hex_digest.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex_digest(std::string_view bytes);

}  // namespace smotepipe::text
