#pragma once

#include <string>
#include <string_view>

namespace tracemark {

/// NFC-normalized, case-folded form used for every word comparison.
/// WordNet-style underscores in multi-word entries become single spaces.
std::string canonical(std::string_view utf8);

/// Recases `replacement` to follow `original`: ALL CAPS, Capitalized or lower.
std::string copy_case_pattern(std::string_view original, std::string_view replacement);

/// Number of user-perceived letters (code points) in a UTF-8 string.
std::size_t letter_count(std::string_view utf8);

} // namespace tracemark
