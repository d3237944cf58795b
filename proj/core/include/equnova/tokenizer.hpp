#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace equnova {

struct IndexConfig {
    double k1 = 1.2;
    double b = 0.75;
    bool lowercase = true;
    std::set<std::string> stopwords = default_stopwords();

    /// Small fixed English function-word list, including the wh-words.
    static std::set<std::string> default_stopwords();

    /// Throws invalid_argument_error unless k1 >= 0 and 0 <= b <= 1.
    void validate() const;

    bool operator==(const IndexConfig&) const = default;
};

/// Splits UTF-8 text on runs of non-alphanumeric code points.
///
/// ASCII letters and digits are alphanumeric. Non-ASCII code points count as
/// letters except for the Latin-1 punctuation block, General Punctuation,
/// CJK Symbols and Punctuation and the fullwidth ASCII punctuation forms.
/// Lowercasing covers ASCII, Latin-1, Greek and basic Cyrillic. Invalid
/// UTF-8 bytes act as separators.
std::vector<std::string> tokenize(std::string_view text, const IndexConfig& config);

/// tokenize() without stopword removal.
std::vector<std::string> split_terms(std::string_view text, bool lowercase = true);

}  // namespace equnova
