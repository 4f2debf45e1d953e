#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "lexidepth/corpus.hpp"
#include "lexidepth/errors.hpp"
#include "lexidepth/rng.hpp"
#include "lexidepth/unicode.hpp"
#include "oracles.hpp"

using namespace lexidepth;

namespace {

WordList parse(const std::string& text, FormatOptions opts = {},
               std::vector<std::string>* warnings = nullptr) {
    std::istringstream in(text);
    return parse_wordlist(in, opts, warnings);
}

const char* kTable1 =
    "Word\tClassical.Latin\tMeg.Romanian\tIst.Romanian\tAromanian\tRomanian\n"
    "all\tomnis\ttot\ttot\ttut\ttot\n"
    "ashes\tcinis\ttsanusa\tceruse\tcinuse\tcenusa\n"
    "bark\tcortex\tcoaja\tcora\tcoaje\tscoarta\n";

std::string form8(const WordList& wl, const std::string& m, const std::string& l) {
    const auto& f = wl.form(m, l);
    REQUIRE(f.has_value());
    return unicode::encode_utf8(*f);
}

}  // namespace

TEST_CASE("parse assigns forms to the right cells") {
    const WordList wl = parse(kTable1);
    CHECK(wl.n_meanings() == 3);
    CHECK(wl.n_languages() == 5);
    CHECK(form8(wl, "all", "Aromanian") == "tut");
    CHECK(form8(wl, "bark", "Romanian") == "scoarta");
}

TEST_CASE("parse: empty body keeps header languages") {
    const WordList wl = parse("Word\tA\tB\n");
    CHECK(wl.n_meanings() == 0);
    CHECK(wl.languages() == std::vector<std::string>{"A", "B"});
}

TEST_CASE("parse: missing marker and empty cells are absent") {
    const WordList wl = parse("Word\tA\tB\nall\t?\t\n");
    CHECK_FALSE(wl.form("all", "A").has_value());
    CHECK_FALSE(wl.form("all", "B").has_value());
}

TEST_CASE("parse: custom missing marker") {
    FormatOptions opts;
    opts.missing_marker = "-";
    const WordList wl = parse("Word\tA\nall\t-\n", opts);
    CHECK_FALSE(wl.form("all", "A").has_value());
}

TEST_CASE("parse: synonym lists keep the first form and warn") {
    std::vector<std::string> warnings;
    const WordList wl = parse("Word\tA\nall\ttot, omnis\n", {}, &warnings);
    CHECK(form8(wl, "all", "A") == "tot");
    CHECK(warnings.size() == 1);
}

TEST_CASE("parse: forms are lowercased and normalized") {
    const WordList wl = parse("Word\tA\tB\nall\tTOT\té\n");
    CHECK(form8(wl, "all", "A") == "tot");
    CHECK(form8(wl, "all", "B") == "é");  // composed
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse("Word\tA\tA\n"), DuplicateLanguage);
    CHECK_THROWS_AS(parse("Word\tA\nall\tx\nall\ty\n"), DuplicateMeaning);
    CHECK_THROWS_AS(parse("Word\tA\tB\nall\tx\n"), MalformedRow);
    CHECK_THROWS_AS(parse("Word\tA\nall\t\xC3\n"), InvalidEncoding);
    try {
        parse("Word\tA\tB\nall\tx\ty\nrag\tz\n");
        FAIL("expected MalformedRow");
    } catch (const MalformedRow& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("comma delimiter") {
    FormatOptions opts;
    opts.delimiter = ',';
    const WordList wl = parse("Word,A,B\nall,tot,tut\n", opts);
    CHECK(form8(wl, "all", "B") == "tut");
}

TEST_CASE("restrict keeps selected columns") {
    const WordList wl = parse(kTable1);
    const WordList ro = restrict(wl, {"Romanian"});
    CHECK(ro.n_languages() == 1);
    CHECK(ro.n_meanings() == 3);
    CHECK(form8(ro, "all", "Romanian") == "tot");
    CHECK(form8(ro, "ashes", "Romanian") == "cenusa");
    CHECK(form8(ro, "bark", "Romanian") == "scoarta");

    CHECK(restrict(wl, wl.languages()) == wl);
    CHECK(restrict(wl, {}).n_languages() == 0);
    CHECK(restrict(wl, {}).n_meanings() == 3);
    CHECK_THROWS_AS(restrict(wl, {"Klingon"}), UnknownLanguage);
}

TEST_CASE("restrict composes like set intersection") {
    Rng rng(11);
    const WordList wl = oracles::random_wordlist(rng, 6, 8);
    const std::vector<std::string> s = {"L0", "L2", "L3", "L5"};
    const std::vector<std::string> t = {"L2", "L5"};
    CHECK(restrict(restrict(wl, s), t) == restrict(wl, t));
}

TEST_CASE("merge takes the union of languages over shared meanings") {
    const WordList a = parse("Word\tA\nall\tx\nbig\ty\n");
    const WordList b = parse("Word\tB\nall\tz\nsmall\tw\n");
    const WordList m = merge(a, b);
    CHECK(m.n_languages() == 2);
    CHECK(m.n_meanings() == 1);  // only "all" is shared
    CHECK(form8(m, "all", "A") == "x");
    CHECK(form8(m, "all", "B") == "z");

    // neutral element on languages: restricts to shared meanings
    const WordList empty_langs = parse("Word\nall\nbig\n");
    CHECK(merge(a, empty_langs) == a);

    const WordList disjoint = parse("Word\tC\nsmall\tq\n");
    CHECK(merge(a, disjoint).n_meanings() == 0);

    CHECK_THROWS_AS(merge(a, parse("Word\tA\nall\tx\n")), LanguageCollision);
}

TEST_CASE("merge of two single-language lists sharing meanings") {
    Rng rng(3);
    std::string text_a = "Word\tP", text_b = "Word\tQ";
    for (int i = 0; i < 110; ++i) {
        const std::string m = "\nm" + std::to_string(i) + "\t";
        text_a += m + "aa";
        text_b += m + "ab";
    }
    const WordList m = merge(parse(text_a + "\n"), parse(text_b + "\n"));
    CHECK(m.n_languages() == 2);
    CHECK(m.n_meanings() == 110);
}

TEST_CASE("serialize then parse is the identity") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        WordList wl = oracles::random_wordlist(rng, 1 + rng.below(6), 1 + rng.below(10), 6, 4,
                                               0.2);
        std::ostringstream out;
        serialize_wordlist(wl, out);
        CHECK(parse(out.str()) == wl);
    }
}

TEST_CASE("serialize round-trips non-ascii forms") {
    const WordList wl = parse("Word\tA\nall\tšéţ\n");
    std::ostringstream out;
    serialize_wordlist(wl, out);
    CHECK(parse(out.str()) == wl);
}

TEST_CASE("merge is commutative up to ordering") {
    Rng rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        WordList base = oracles::random_wordlist(rng, 6, 8, 6, 4, 0.15);
        const WordList a = restrict(base, {"L0", "L1", "L2"});
        const WordList b = restrict(base, {"L3", "L4"});
        const WordList ab = merge(a, b);
        const WordList ba = merge(b, a);
        // reorder ba's languages into ab's order; meanings already match
        std::vector<std::string> order = ab.languages();
        CHECK(restrict(ba, order) == ab);
        CHECK(ba.n_meanings() == ab.n_meanings());
    }
}
