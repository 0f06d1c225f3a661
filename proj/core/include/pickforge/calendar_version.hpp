// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

namespace pickforge {

/// Release identifier of the form YYYY.MM.P (month always two digits).
struct CalendarVersion {
    int year = 2000;
    int month = 1;
    int patch = 0;

    static CalendarVersion parse(std::string_view text);
    std::string str() const;

    friend auto operator<=>(const CalendarVersion&, const CalendarVersion&) = default;
};

inline CalendarVersion parse_calendar_version(std::string_view text) { return CalendarVersion::parse(text); }

inline std::ostream& operator<<(std::ostream& os, const CalendarVersion& v) { return os << v.str(); }

}  // namespace pickforge
