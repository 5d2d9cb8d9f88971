#pragma once

#include <string>
#include <string_view>

#include "slpra/error.hpp"

namespace slpra {

inline std::u32string decode_latin1(std::string_view bytes)
{
    std::u32string out(bytes.size(), U'\0');
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        out[i] = static_cast<unsigned char>(bytes[i]);
    }
    return out;
}

/// Throws ArgumentError for code points above 0xFF.
inline std::string encode_latin1(std::u32string_view text)
{
    std::string out(text.size(), '\0');
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] > 0xFF) {
            throw ArgumentError("code point " + std::to_string(static_cast<unsigned>(text[i])) +
                                " does not fit a Latin-1 byte; use --utf8");
        }
        out[i] = static_cast<char>(text[i]);
    }
    return out;
}

inline void append_utf8(std::string& out, char32_t c)
{
    if (c < 0x80) {
        out += static_cast<char>(c);
    } else if (c < 0x800) {
        out += static_cast<char>(0xC0 | (c >> 6));
        out += static_cast<char>(0x80 | (c & 0x3F));
    } else if (c < 0x10000) {
        out += static_cast<char>(0xE0 | (c >> 12));
        out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (c & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (c >> 18));
        out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (c & 0x3F));
    }
}

inline std::string encode_utf8(std::u32string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char32_t c : text) append_utf8(out, c);
    return out;
}

/// Strict decoder: rejects overlong forms, surrogates and truncated sequences.
inline std::u32string decode_utf8(std::string_view bytes)
{
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    auto bad = [&] { return ArgumentError("invalid UTF-8 at byte " + std::to_string(i)); };
    while (i < bytes.size()) {
        const auto b0 = static_cast<unsigned char>(bytes[i]);
        int extra = 0;
        char32_t c = 0;
        char32_t min = 0;
        if (b0 < 0x80) {
            c = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            c = b0 & 0x1F, extra = 1, min = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            c = b0 & 0x0F, extra = 2, min = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            c = b0 & 0x07, extra = 3, min = 0x10000;
        } else {
            throw bad();
        }
        if (extra > 0 && i + extra >= bytes.size()) {
            throw bad();
        }
        for (int k = 1; k <= extra; ++k) {
            const auto b = static_cast<unsigned char>(bytes[i + k]);
            if ((b & 0xC0) != 0x80) throw bad();
            c = (c << 6) | (b & 0x3F);
        }
        if (c < min || c > 0x10FFFF || (c >= 0xD800 && c <= 0xDFFF)) throw bad();
        out.push_back(c);
        i += 1 + extra;
    }
    return out;
}

}  // namespace slpra
