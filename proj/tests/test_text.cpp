#include <gtest/gtest.h>

#include <random>

#include "stimkb/text.hpp"

using namespace stimkb;

TEST(Text, Utf8RoundTrip) {
  const std::string s = "Zagreb \xC4\x8C" "a\xC5\xA1" "a \xCE\xA9 \xD0\x96 \xF0\x9F\x98\x80";
  const auto cps = text::decodeUtf8(s);
  EXPECT_EQ(cps.size(), 17u);
  EXPECT_EQ(text::encodeUtf8(cps), s);
}

TEST(Text, InvalidUtf8BecomesReplacement) {
  const auto cps = text::decodeUtf8("a\xC3");
  ASSERT_EQ(cps.size(), 2u);
  EXPECT_EQ(cps[1], U'�');
  EXPECT_EQ(text::decodeUtf8("\xE2\x82").size(), 2u);
}

TEST(Text, CaseFolding) {
  EXPECT_EQ(text::foldCase("WinterStreet"), "winterstreet");
  EXPECT_EQ(text::foldCase("\xC4\x8C"), "\xC4\x8D");          // Č -> č
  EXPECT_EQ(text::foldCase("\xCE\xA3\xCE\xB1"), "\xCF\x83\xCE\xB1");  // Σα -> σα
  EXPECT_EQ(text::foldCase("\xD0\x96"), "\xD0\xB6");          // Ж -> ж
  EXPECT_EQ(text::foldCodePoint(0x130), 0x130u);
  EXPECT_EQ(text::foldCodePoint(U'×'), U'×');
}

TEST(Text, FoldingIsIdempotent) {
  for (char32_t c = 0; c < 0x500; ++c) {
    const char32_t f = text::foldCodePoint(c);
    EXPECT_EQ(text::foldCodePoint(f), f) << std::hex << static_cast<unsigned>(c);
  }
}

TEST(Text, ContentLines) {
  const auto lines = text::contentLines("# comment\r\na\tb\r\n\n   \nc\n");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].number, 2u);
  EXPECT_EQ(lines[0].content, "a\tb");
  EXPECT_EQ(lines[1].number, 5u);
  EXPECT_TRUE(text::contentLines("").empty());
}

TEST(Text, Split) {
  const auto parts = text::split("a;;b;", ';');
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts[1], "");
  EXPECT_EQ(parts[2], "b");
}

TEST(Text, Identifiers) {
  EXPECT_TRUE(text::isIdentifier("Group_Of-People2"));
  EXPECT_FALSE(text::isIdentifier(""));
  EXPECT_FALSE(text::isIdentifier("a b"));
  EXPECT_FALSE(text::isIdentifier("a.b"));
}

TEST(Text, NumbersAreStrict) {
  EXPECT_EQ(text::parseDouble("7.14"), 7.14);
  EXPECT_EQ(text::parseDouble("+1"), 1.0);
  EXPECT_EQ(text::parseDouble("-0.5e1"), -5.0);
  EXPECT_FALSE(text::parseDouble(""));
  EXPECT_FALSE(text::parseDouble("1.0x"));
  EXPECT_FALSE(text::parseDouble(" 1"));
  EXPECT_FALSE(text::parseDouble("nan"));
  EXPECT_EQ(text::parseInt("311"), 311);
  EXPECT_FALSE(text::parseInt("3.5"));
  EXPECT_FALSE(text::parseInt("12345678901234567890123"));
}

TEST(Text, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = dist(rng);
    EXPECT_EQ(text::parseDouble(text::formatDouble(v)), v);
  }
  EXPECT_EQ(text::formatDouble(6.0), "6");
  EXPECT_EQ(text::formatDouble(7.14), "7.14");
  EXPECT_EQ(text::formatFixed(2.0 / 3.0, 4), "0.6667");
}
