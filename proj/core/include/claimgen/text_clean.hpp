#pragma once

#include <string>
#include <string_view>

namespace claimgen::lm {

// Character classes stripped from generated text. The defaults cover
// non-ASCII bytes, parentheses, single quotes, backticks, and control
// characters; whitespace runs collapse to one space either way.
struct CleanOptions {
    bool remove_non_ascii = true;
    bool remove_parentheses = true;
    bool remove_single_quotes = true;
    bool remove_backticks = true;
    bool remove_control = true;
};

// Idempotent; never lengthens the input. Leading/trailing whitespace is
// stripped and interior whitespace runs collapse to a single space.
std::string clean_text(std::string_view raw, const CleanOptions& opts = {});

} // namespace claimgen::lm
