// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <pickforge/calendar_version.hpp>
#include <pickforge/version.hpp>

#include <cstdio>

namespace pickforge {

namespace {

// Reads a run of digits starting at pos; returns the number of digits read.
std::size_t read_digits(std::string_view text, std::size_t pos, long long& value) {
    std::size_t n = 0;
    value = 0;
    while (pos + n < text.size() && text[pos + n] >= '0' && text[pos + n] <= '9') {
        if (n >= 9) throw ParseError(text, pos, "number too long");
        value = value * 10 + (text[pos + n] - '0');
        ++n;
    }
    return n;
}

}  // namespace

CalendarVersion CalendarVersion::parse(std::string_view text) {
    if (text.empty()) throw ParseError(text, 0, "empty calendar version");

    long long year = 0, month = 0, patch = 0;
    std::size_t pos = 0;

    std::size_t n = read_digits(text, pos, year);
    if (n == 0) throw ParseError(text, pos, "expected year");
    if (text[pos] == '0' || year < 2000) throw ParseError(text, pos, "year must be >= 2000");
    pos += n;
    if (pos >= text.size() || text[pos] != '.') throw ParseError(text, pos, "expected 'YYYY.MM.P'");
    ++pos;

    n = read_digits(text, pos, month);
    if (n != 2) throw ParseError(text, pos, "month must have two digits");
    if (month < 1 || month > 12) throw ParseError(text, pos, "month out of range 1-12");
    pos += n;
    if (pos >= text.size() || text[pos] != '.') throw ParseError(text, pos, "expected 'YYYY.MM.P'");
    ++pos;

    n = read_digits(text, pos, patch);
    if (n == 0) throw ParseError(text, pos, "expected patch number");
    if (n > 1 && text[pos] == '0') throw ParseError(text, pos, "leading zero in patch number");
    pos += n;
    if (pos != text.size()) throw ParseError(text, pos, "expected 'YYYY.MM.P'");

    return CalendarVersion{static_cast<int>(year), static_cast<int>(month), static_cast<int>(patch)};
}

std::string CalendarVersion::str() const {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%d.%02d.%d", year, month, patch);
    return buf;
}

}  // namespace pickforge
