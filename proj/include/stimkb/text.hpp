#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stimkb::text {

/// Decodes UTF-8 into code points. Invalid sequences decode as U+FFFD
/// one byte at a time.
std::u32string decodeUtf8(std::string_view s);
std::string encodeUtf8(std::u32string_view s);

/// Simple (1:1) Unicode case folding of one code point.
char32_t foldCodePoint(char32_t c);

std::u32string foldedCodePoints(std::string_view s);
std::string foldCase(std::string_view s);

struct Line {
  std::size_t number;  // 1-based
  std::string_view content;
};

/// Splits on LF, dropping a trailing CR, and skips blank lines and lines whose
/// first character is '#'.
std::vector<Line> contentLines(std::string_view text);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

/// `[A-Za-z0-9_-]+`
bool isIdentifier(std::string_view s);

std::optional<double> parseDouble(std::string_view s);
std::optional<std::int64_t> parseInt(std::string_view s);

/// Shortest decimal form that reads back to the same double.
std::string formatDouble(double v);

/// Fixed-point with `digits` decimals.
std::string formatFixed(double v, int digits);

std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, std::string_view content);

}  // namespace stimkb::text
