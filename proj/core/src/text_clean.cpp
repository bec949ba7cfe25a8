#include "claimgen/text_clean.hpp"

namespace claimgen::lm {

namespace {

bool is_ascii_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

} // namespace

std::string clean_text(std::string_view raw, const CleanOptions& opts) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (unsigned char c : raw) {
        if (is_ascii_space(c)) {
            pending_space = true;
            continue;
        }
        if (opts.remove_non_ascii && c >= 0x80) continue;
        if (opts.remove_control && (c < 0x20 || c == 0x7f)) continue;
        if (opts.remove_parentheses && (c == '(' || c == ')')) continue;
        if (opts.remove_single_quotes && c == '\'') continue;
        if (opts.remove_backticks && c == '`') continue;
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(c));
    }
    return out;
}

} // namespace claimgen::lm
