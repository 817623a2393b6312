#pragma once

// Character cursor shared by the term/arrow parser and the schema pattern
// parser. Tracks line and column for error reporting.

#include <cctype>
#include <string>
#include <string_view>

#include "lineq/errors.hpp"

namespace lineq::detail {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool lookahead(std::string_view s) {
        skip_ws();
        return text_.substr(pos_, s.size()) == s;
    }

    bool accept(std::string_view s) {
        if (!lookahead(s)) return false;
        pos_ += s.size();
        return true;
    }

    void expect(std::string_view s) {
        if (!accept(s)) fail("'" + std::string(s) + "'");
    }

    bool ident_start() {
        skip_ws();
        return pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]));
    }

    /// Identifier [a-zA-Z][a-zA-Z0-9_]*; does not consume on failure.
    std::string ident() {
        if (!ident_start()) fail("identifier");
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    /// The identifier at the cursor without consuming it, or "".
    std::string peek_ident() {
        std::size_t save = pos_;
        std::string id = ident_start() ? ident() : std::string();
        pos_ = save;
        return id;
    }

    std::size_t pos() const { return pos_; }
    void reset(std::size_t p) { pos_ = p; }

    [[noreturn]] void fail(const std::string& expected) {
        skip_ws();
        int line = 1, col = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(line, col, expected);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace lineq::detail
