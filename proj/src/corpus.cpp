#include "lexidepth/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lexidepth/errors.hpp"
#include "lexidepth/unicode.hpp"

namespace lexidepth {

namespace {

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

Form normalize_form(std::string_view raw) {
    return unicode::nfc(unicode::to_lower(unicode::decode_utf8(raw)));
}

}  // namespace

WordList::WordList(std::vector<std::string> meanings, std::vector<std::string> languages)
    : meanings_(std::move(meanings)),
      languages_(std::move(languages)),
      cells_(meanings_.size() * languages_.size()) {}

std::size_t WordList::meaning_index(const std::string& meaning) const {
    for (std::size_t i = 0; i < meanings_.size(); ++i)
        if (meanings_[i] == meaning) return i;
    throw UnknownMeaning("unknown meaning: " + meaning);
}

std::size_t WordList::language_index(const std::string& language) const {
    for (std::size_t i = 0; i < languages_.size(); ++i)
        if (languages_[i] == language) return i;
    throw UnknownLanguage("unknown language: " + language);
}

const std::optional<Form>& WordList::form(const std::string& meaning,
                                          const std::string& language) const {
    return form(meaning_index(meaning), language_index(language));
}

void WordList::set_form(std::size_t meaning_idx, std::size_t language_idx, Form f) {
    cells_[meaning_idx * languages_.size() + language_idx] = std::move(f);
}

WordList parse_wordlist(std::istream& in, const FormatOptions& opts,
                        std::vector<std::string>* warnings) {
    std::string line;
    long line_no = 0;

    if (!std::getline(in, line)) throw MalformedRow("missing header row", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split(line, opts.delimiter);
    if (header.empty()) throw MalformedRow("empty header row", line_no);

    std::vector<std::string> languages;
    std::unordered_set<std::string> seen_languages;
    for (std::size_t i = 1; i < header.size(); ++i) {
        std::string name(unicode::trim(header[i]));
        if (name.empty()) throw MalformedRow("empty language name in header", line_no);
        if (!seen_languages.insert(name).second)
            throw DuplicateLanguage("duplicate language column: " + name);
        languages.push_back(std::move(name));
    }

    std::vector<std::string> meanings;
    std::unordered_set<std::string> seen_meanings;
    std::vector<std::vector<std::optional<Form>>> rows;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (unicode::trim(line).empty()) continue;

        const auto cells = split(line, opts.delimiter);
        if (cells.size() != languages.size() + 1)
            throw MalformedRow("row has " + std::to_string(cells.size()) + " cells, expected " +
                                   std::to_string(languages.size() + 1),
                               line_no);

        std::string meaning(unicode::trim(cells[0]));
        if (meaning.empty()) throw MalformedRow("empty meaning identifier", line_no);
        if (!seen_meanings.insert(meaning).second)
            throw DuplicateMeaning("duplicate meaning row: " + meaning);

        std::vector<std::optional<Form>> row(languages.size());
        for (std::size_t j = 0; j < languages.size(); ++j) {
            std::string_view cell = unicode::trim(cells[j + 1]);
            if (cell.empty() || cell == opts.missing_marker) continue;
            if (const std::size_t comma = cell.find(','); comma != std::string_view::npos) {
                if (warnings)
                    warnings->push_back("line " + std::to_string(line_no) + ", " + languages[j] +
                                        ": multiple forms \"" + std::string(cell) +
                                        "\", keeping the first");
                cell = unicode::trim(cell.substr(0, comma));
                if (cell.empty() || cell == opts.missing_marker) continue;
            }
            row[j] = normalize_form(cell);
        }
        meanings.push_back(std::move(meaning));
        rows.push_back(std::move(row));
    }

    WordList wl(std::move(meanings), std::move(languages));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            if (rows[i][j]) wl.set_form(i, j, std::move(*rows[i][j]));
    return wl;
}

WordList load_wordlist(const std::string& path, const FormatOptions& opts,
                       std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open wordlist: " + path);
    return parse_wordlist(in, opts, warnings);
}

void serialize_wordlist(const WordList& wl, std::ostream& out, const FormatOptions& opts) {
    out << "meaning";
    for (const auto& lang : wl.languages()) out << opts.delimiter << lang;
    out << '\n';
    for (std::size_t i = 0; i < wl.n_meanings(); ++i) {
        out << wl.meanings()[i];
        for (std::size_t j = 0; j < wl.n_languages(); ++j) {
            out << opts.delimiter;
            const auto& cell = wl.form(i, j);
            out << (cell ? unicode::encode_utf8(*cell) : opts.missing_marker);
        }
        out << '\n';
    }
}

WordList restrict(const WordList& wl, const std::vector<std::string>& languages) {
    std::vector<std::size_t> keep;
    keep.reserve(languages.size());
    for (const auto& name : languages) keep.push_back(wl.language_index(name));

    WordList out(wl.meanings(), languages);
    for (std::size_t i = 0; i < wl.n_meanings(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (const auto& cell = wl.form(i, keep[j])) out.set_form(i, j, *cell);
    return out;
}

WordList merge(const WordList& a, const WordList& b) {
    std::unordered_set<std::string> a_langs(a.languages().begin(), a.languages().end());
    for (const auto& lang : b.languages())
        if (a_langs.count(lang)) throw LanguageCollision("language present in both lists: " + lang);

    std::unordered_map<std::string, std::size_t> b_meaning_idx;
    for (std::size_t i = 0; i < b.n_meanings(); ++i) b_meaning_idx.emplace(b.meanings()[i], i);

    std::vector<std::string> meanings;        // order of a
    std::vector<std::size_t> a_rows, b_rows;  // source row per shared meaning
    for (std::size_t i = 0; i < a.n_meanings(); ++i) {
        auto it = b_meaning_idx.find(a.meanings()[i]);
        if (it == b_meaning_idx.end()) continue;
        meanings.push_back(a.meanings()[i]);
        a_rows.push_back(i);
        b_rows.push_back(it->second);
    }

    std::vector<std::string> languages = a.languages();
    languages.insert(languages.end(), b.languages().begin(), b.languages().end());

    WordList out(std::move(meanings), std::move(languages));
    for (std::size_t i = 0; i < out.n_meanings(); ++i) {
        for (std::size_t j = 0; j < a.n_languages(); ++j)
            if (const auto& cell = a.form(a_rows[i], j)) out.set_form(i, j, *cell);
        for (std::size_t j = 0; j < b.n_languages(); ++j)
            if (const auto& cell = b.form(b_rows[i], j))
                out.set_form(i, a.n_languages() + j, *cell);
    }
    return out;
}

}  // namespace lexidepth
