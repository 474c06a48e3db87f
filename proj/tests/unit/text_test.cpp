// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "glossmt/text.hpp"

#include <gtest/gtest.h>

namespace glossmt::text {
namespace {

TEST(Text, NfcComposes) {
  EXPECT_EQ(nfc("u\xCC\x88"), "\xC3\xBC");
  EXPECT_EQ(nfc("plain ascii"), "plain ascii");
  EXPECT_EQ(nfc(""), "");
}

TEST(Text, TrimAndSplit) {
  EXPECT_EQ(trim("  a b \t\n"), "a b");
  EXPECT_EQ(split_ascii_ws(" a  b\tc "), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(collapse_ws("  a \t b  "), "a b");
}

TEST(Text, SplitLinesDropsCarriageReturnsAndFinalNewline) {
  EXPECT_EQ(split_lines("a\r\nb\n"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(split_lines("a\n\nb"), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_TRUE(split_lines("").empty());
}

TEST(Text, Utf32RoundTripAndReplacement) {
  std::string s = "d\xC3\xA9j\xC3\xA0 \xE2\x82\xAC \xF0\x9F\x98\x80";
  EXPECT_EQ(to_utf8(to_utf32(s)), s);
  EXPECT_EQ(to_utf32("\xFF"), std::u32string(1, U'�'));
  EXPECT_EQ(to_utf32("a\xE2\x82"), (std::u32string{U'a', U'�', U'�'}));
}

TEST(Text, PySplitUsesUnicodeWhitespace) {
  auto parts = py_split(to_utf32("a b　c  d"));
  EXPECT_EQ(parts.size(), 4u);
}

TEST(Text, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Text, FormatScore) {
  EXPECT_EQ(format_score(100.0), "100.0");
  EXPECT_EQ(format_score(0.0), "0.0");
  EXPECT_EQ(format_score(-0.0), "0.0");
  EXPECT_EQ(format_score(38.49891), "38.4989");
  EXPECT_EQ(format_score(0.076), "0.076");
}

TEST(Text, StartsWithIcase) {
  EXPECT_TRUE(starts_with_icase("TRANSLATION: x", "translation:"));
  EXPECT_FALSE(starts_with_icase("Trans", "translation:"));
}

}  // namespace
}  // namespace glossmt::text
