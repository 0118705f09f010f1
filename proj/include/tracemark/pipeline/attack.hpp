#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tracemark/pdfio/document.hpp"

namespace tracemark::pipeline {

class AttackScriptError : public Error {
public:
    AttackScriptError(std::size_t line, const std::string& what)
        : Error("attack script line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// One scripted modification. Word and line indices refer to the input file.
struct AttackStep {
    enum class Kind { insert, remove, revert, replace, equalize_spaces, substitute_font, crop, strip_metadata };
    Kind kind;
    std::size_t index = 0;
    std::size_t last = 0;
    std::string text;
};

/// Line-oriented script:
///   insert <word> <text>     add a word after word <word>
///   delete <word>
///   revert <word>            restore the original file's word
///   replace <word> <text>
///   equalize-spaces          every line gets evenly spread spaces
///   substitute-font [name]   swap embedded fonts for a stock font
///   crop <first> <last>      keep lines first..last
///   strip-metadata
/// Blank lines and '#' comments are ignored.
std::vector<AttackStep> parse_attack_script(const std::string& text);

/// The attacked file; byte-identical to the input when the script is empty.
/// `original` is needed by revert steps.
std::string apply_attack(const std::string& pdf, const std::vector<AttackStep>& steps,
                         const std::optional<std::string>& original = std::nullopt,
                         double space_threshold = pdfio::kSpaceThreshold);

/// Edits for evenly spread spaces on every line.
pdfio::Edits equalize_spaces(const pdfio::Document& doc);

} // namespace tracemark::pipeline
