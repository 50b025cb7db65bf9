#include <doctest.h>

#include "xlsim/text.hpp"

using namespace xlsim;

TEST_CASE("utf8 decode and encode round trip") {
    const std::string s = "añb\xE2\x88\x85z\xF0\x9F\x98\x80";
    const auto cps = text::decode_utf8(s);
    REQUIRE(cps.size() == 6);
    CHECK(cps[1] == 0xF1);
    CHECK(cps[3] == 'z' - 'z' + 0x2205);
    CHECK(text::encode_utf8(cps) == s);
    CHECK(text::scalar_count(s) == 6);
}

TEST_CASE("invalid bytes become replacement characters") {
    const auto cps = text::decode_utf8("a\xFF\xC3");
    REQUIRE(cps.size() == 3);
    CHECK(cps[1] == 0xFFFD);
    CHECK(cps[2] == 0xFFFD);
    CHECK(text::decode_utf8("\xC0\xAF").size() == 2);  // overlong '/'
}

TEST_CASE("lowercasing across scripts") {
    CHECK(text::to_lower("RADIO") == "radio");
    CHECK(text::to_lower("ÉQUIPEMENT") == "équipement");
    CHECK(text::to_lower("ŁÓDŹ") == "łódź");
    CHECK(text::to_lower("ΣΥΣΤΗΜΑ") == "συστημα");
    CHECK(text::to_lower("СЕТЬ") == "сеть");
}

TEST_CASE("letters exclude digits and punctuation") {
    CHECK(text::is_letter('a'));
    CHECK(text::is_letter(0xE9));
    CHECK_FALSE(text::is_letter('7'));
    CHECK_FALSE(text::is_letter('-'));
    CHECK_FALSE(text::is_letter(0xD7));
    CHECK_FALSE(text::is_letter(0x2019));
}

TEST_CASE("normalize_lemma collapses separators") {
    CHECK(text::normalize_lemma("Radio  Receiver") == "radio_receiver");
    CHECK(text::normalize_lemma(" radio_receiver ") == "radio_receiver");
    CHECK(text::normalize_lemma("a _ b") == "a_b");
    CHECK(text::normalize_lemma("   ") == "");
}

TEST_CASE("split and trim") {
    CHECK(text::split("a\tb\t", '\t') == std::vector<std::string>{"a", "b", ""});
    CHECK(text::split("", ',') == std::vector<std::string>{""});
    CHECK(text::trim("  x y \n") == "x y");
}
