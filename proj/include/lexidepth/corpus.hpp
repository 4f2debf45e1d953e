#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lexidepth {

// A word form as a sequence of Unicode scalar values, NFC-normalized and
// lowercased on ingest.
using Form = std::u32string;

// Language-by-meaning table of word forms. Cells may be absent (missing
// datum). Immutable once built; share freely across threads.
class WordList {
public:
    WordList() = default;
    WordList(std::vector<std::string> meanings, std::vector<std::string> languages);

    const std::vector<std::string>& meanings() const { return meanings_; }
    const std::vector<std::string>& languages() const { return languages_; }
    std::size_t n_meanings() const { return meanings_.size(); }
    std::size_t n_languages() const { return languages_.size(); }

    const std::optional<Form>& form(std::size_t meaning_idx, std::size_t language_idx) const {
        return cells_[meaning_idx * languages_.size() + language_idx];
    }

    // lookup by identifier; throws UnknownMeaning / UnknownLanguage
    const std::optional<Form>& form(const std::string& meaning, const std::string& language) const;
    std::size_t meaning_index(const std::string& meaning) const;
    std::size_t language_index(const std::string& language) const;

    void set_form(std::size_t meaning_idx, std::size_t language_idx, Form f);

    bool operator==(const WordList&) const = default;

private:
    std::vector<std::string> meanings_;
    std::vector<std::string> languages_;
    std::vector<std::optional<Form>> cells_;  // meaning-major
};

struct FormatOptions {
    char delimiter = '\t';
    std::string missing_marker = "?";
};

// Parses a delimited table: header row of language names, first column
// meanings. Forms are whitespace-trimmed, lowercased, NFC-normalized; empty
// cells and the missing marker become absent cells. Comma-separated synonym
// lists keep the first entry and append a note to `warnings` when given.
WordList parse_wordlist(std::istream& in, const FormatOptions& opts = {},
                        std::vector<std::string>* warnings = nullptr);
WordList load_wordlist(const std::string& path, const FormatOptions& opts = {},
                       std::vector<std::string>* warnings = nullptr);

void serialize_wordlist(const WordList& wl, std::ostream& out, const FormatOptions& opts = {});

// Keep only the named language columns (order given by `languages`).
WordList restrict(const WordList& wl, const std::vector<std::string>& languages);

// Union of languages over the shared meaning set. Language sets must be
// disjoint.
WordList merge(const WordList& a, const WordList& b);

}  // namespace lexidepth
