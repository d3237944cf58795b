#include "equnova/tokenizer.hpp"

#include <cstdint>

#include "equnova/error.hpp"

namespace equnova {

std::set<std::string> IndexConfig::default_stopwords()
{
    return {"a",     "about", "after", "all",   "also",  "an",    "and",   "any",   "are",
            "as",    "at",    "be",    "been",  "being", "but",   "by",    "can",   "could",
            "did",   "do",    "does",  "for",   "from",  "had",   "has",   "have",  "he",
            "her",   "his",   "how",   "i",     "if",    "in",    "into",  "is",    "it",
            "its",   "many",  "may",   "more",  "most",  "much",  "no",    "not",   "of",
            "on",    "or",    "other", "our",   "she",   "should", "so",   "some",  "such",
            "than",  "that",  "the",   "their", "them",  "then",  "there", "these", "they",
            "this",  "those", "to",    "was",   "we",    "were",  "what",  "when",  "where",
            "which", "while", "who",   "whom",  "whose", "why",   "will",  "with",  "would",
            "you",   "your"};
}

void IndexConfig::validate() const
{
    if (!(k1 >= 0.0)) {
        throw invalid_argument_error("k1 must be >= 0");
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw invalid_argument_error("b must be in [0, 1]");
    }
}

namespace {

constexpr char32_t invalid_code_point = 0xFFFFFFFF;

/// Decodes one code point starting at `pos`, advancing it. Invalid sequences
/// consume one byte and yield invalid_code_point.
char32_t decode(std::string_view text, std::size_t& pos)
{
    auto lead = static_cast<unsigned char>(text[pos]);
    if (lead < 0x80) {
        ++pos;
        return lead;
    }
    std::size_t length = 0;
    char32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        length = 2;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        length = 3;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        length = 4;
        cp = lead & 0x07;
    } else {
        ++pos;
        return invalid_code_point;
    }
    if (pos + length > text.size()) {
        ++pos;
        return invalid_code_point;
    }
    for (std::size_t i = 1; i < length; ++i) {
        auto cont = static_cast<unsigned char>(text[pos + i]);
        if ((cont & 0xC0) != 0x80) {
            ++pos;
            return invalid_code_point;
        }
        cp = (cp << 6) | (cont & 0x3F);
    }
    pos += length;
    return cp;
}

void encode(char32_t cp, std::string& out)
{
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_alnum(char32_t cp)
{
    if (cp == invalid_code_point) {
        return false;
    }
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    }
    if (cp >= 0x80 && cp <= 0xBF) {
        return false;  // C1 controls, Latin-1 punctuation and symbols
    }
    if (cp == 0xD7 || cp == 0xF7) {
        return false;
    }
    if ((cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F)) {
        return false;  // punctuation, arrows, math operators, box drawing
    }
    if ((cp >= 0xFF00 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20)
        || (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65)) {
        return false;
    }
    if (cp == 0xFEFF || (cp >= 0xE000 && cp <= 0xF8FF)) {
        return false;
    }
    return true;
}

char32_t to_lower(char32_t cp)
{
    if (cp >= 'A' && cp <= 'Z') {
        return cp + 0x20;
    }
    if ((cp >= 0xC0 && cp <= 0xDE && cp != 0xD7)   // Latin-1
        || (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2)  // Greek
        || (cp >= 0x410 && cp <= 0x42F)) {  // Cyrillic
        return cp + 0x20;
    }
    if (cp >= 0x400 && cp <= 0x40F) {
        return cp + 0x50;
    }
    return cp;
}

}  // namespace

std::vector<std::string> split_terms(std::string_view text, bool lowercase)
{
    std::vector<std::string> terms;
    std::string current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = decode(text, pos);
        if (is_alnum(cp)) {
            encode(lowercase ? to_lower(cp) : cp, current);
        } else if (!current.empty()) {
            terms.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        terms.push_back(std::move(current));
    }
    return terms;
}

std::vector<std::string> tokenize(std::string_view text, const IndexConfig& config)
{
    auto terms = split_terms(text, config.lowercase);
    if (config.stopwords.empty()) {
        return terms;
    }
    std::vector<std::string> kept;
    kept.reserve(terms.size());
    for (auto& t : terms) {
        if (config.stopwords.count(t) == 0) {
            kept.push_back(std::move(t));
        }
    }
    return kept;
}

}  // namespace equnova
