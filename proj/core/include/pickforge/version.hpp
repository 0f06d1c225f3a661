// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pickforge {

/// Raised by every text parser in the library. `offset()` is the byte
/// position in the input at which parsing stopped.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string_view input, std::size_t offset, const std::string& what);

    std::size_t offset() const noexcept { return offset_; }
    const std::string& input() const noexcept { return input_; }

private:
    std::string input_;
    std::size_t offset_;
};

/// A dotted numeric version with an optional pre-release tag.
///
///   version := digits ('.' digits)* ('-' tag)?
///   tag     := [A-Za-z0-9]+
///
/// Ordering compares segments numerically, padding the shorter list with
/// zeros, so "1.0" and "1.0.0" are equal. When the numeric parts tie, an
/// untagged version sorts after a tagged one ("2.0-rc1" < "2.0"), and two
/// tags compare byte-wise.
class Version {
public:
    using Segment = std::uint64_t;

    Version() : segments_{0} {}
    explicit Version(std::vector<Segment> segments, std::optional<std::string> suffix = std::nullopt);

    static Version parse(std::string_view text);

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    const std::optional<std::string>& suffix() const noexcept { return suffix_; }
    Segment major() const noexcept { return segments_.front(); }

    std::string str() const;

    friend std::strong_ordering operator<=>(const Version& a, const Version& b) noexcept;
    friend bool operator==(const Version& a, const Version& b) noexcept {
        return (a <=> b) == std::strong_ordering::equal;
    }

private:
    std::vector<Segment> segments_;
    std::optional<std::string> suffix_;
};

inline Version parse_version(std::string_view text) { return Version::parse(text); }

inline std::strong_ordering compare_versions(const Version& a, const Version& b) noexcept { return a <=> b; }

inline std::ostream& operator<<(std::ostream& os, const Version& v) { return os << v.str(); }

}  // namespace pickforge
