#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace vcot::util {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool contains_ci(std::string_view haystack, std::string_view needle);
std::vector<std::string> split(std::string_view s, char delimiter);

/// Replaces the first occurrence of `placeholder` in `text`.
/// Returns nullopt when the placeholder is absent.
std::optional<std::string> replace_first(std::string_view text,
                                         std::string_view placeholder,
                                         std::string_view value);
std::size_t count_occurrences(std::string_view text, std::string_view needle);

std::string hex_encode(const unsigned char* data, std::size_t len);
std::string sha256_hex(std::string_view data);
std::string base64_encode(std::string_view data);

std::string read_file(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Write-to-temp + rename, so readers never observe a partial file.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

std::string now_iso8601_utc();

/// Unbiased draw in [0, bound) from a fully specified generator; used wherever
/// cross-platform reproducibility of seeded shuffles matters.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);
void seeded_shuffle(std::vector<std::size_t>& values, std::mt19937_64& rng);

std::string shell_quote(std::string_view arg);

/// Signature check for PNG/JPEG/GIF/BMP/WEBP; no pixel decode.
bool looks_like_image(const std::filesystem::path& path);
std::string mime_for_path(const std::filesystem::path& path);

}  // namespace vcot::util
