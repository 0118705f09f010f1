#pragma once

#include <set>
#include <string>
#include <vector>

namespace tracemark::linguistic {

/// A document word split into surrounding punctuation and the replaceable core.
struct Token {
    std::string text;
    std::string prefix;
    std::string core;
    std::string suffix;
    /// canonical(core), used for every graph lookup and comparison.
    std::string canon;
    bool untouchable = false;
    std::size_t line = 0;
};

using WordSequence = std::vector<Token>;

struct TokenizeOptions {
    /// Canonical words that must never be replaced.
    std::set<std::string> stop_words;
};

/// Builds the token sequence. Untouchable: numerals, capitalized words not
/// at a sentence start, words inside quotations, stop words, bare punctuation.
WordSequence tokenize(const std::vector<std::string>& words, const std::vector<std::size_t>& lines,
                      const TokenizeOptions& options = {});

/// Convenience for tests and plain-text input: one line per word.
WordSequence tokenize_text(const std::string& text, const TokenizeOptions& options = {});

/// Re-tokenizes replacement words, keeping untouchable flags of the original.
std::vector<std::string> texts(const WordSequence& seq);

std::set<std::string> read_stop_words(const std::string& path);

} // namespace tracemark::linguistic
