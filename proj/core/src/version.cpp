// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <pickforge/version.hpp>

#include <algorithm>
#include <cassert>
#include <limits>

namespace pickforge {

namespace {

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

bool is_tag_char(char c) noexcept {
    return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

}  // namespace

ParseError::ParseError(std::string_view input, std::size_t offset, const std::string& what)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + " in '" + std::string(input) +
                         "': " + what),
      input_(input),
      offset_(offset) {}

Version::Version(std::vector<Segment> segments, std::optional<std::string> suffix)
    : segments_(std::move(segments)), suffix_(std::move(suffix)) {
    if (segments_.empty()) {
        throw std::invalid_argument("version needs at least one segment");
    }
    if (suffix_ && (suffix_->empty() || !std::all_of(suffix_->begin(), suffix_->end(), is_tag_char))) {
        throw std::invalid_argument("invalid version suffix '" + *suffix_ + "'");
    }
}

Version Version::parse(std::string_view text) {
    if (text.empty()) {
        throw ParseError(text, 0, "empty version");
    }
    std::vector<Segment> segments;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t start = pos;
        Segment value = 0;
        while (pos < text.size() && is_digit(text[pos])) {
            const Segment digit = static_cast<Segment>(text[pos] - '0');
            if (value > (std::numeric_limits<Segment>::max() - digit) / 10) {
                throw ParseError(text, start, "segment out of range");
            }
            value = value * 10 + digit;
            ++pos;
        }
        if (pos == start) {
            throw ParseError(text, pos, pos < text.size() ? "expected digit" : "empty segment");
        }
        segments.push_back(value);
        if (pos == text.size() || text[pos] != '.') break;
        ++pos;
    }

    std::optional<std::string> suffix;
    if (pos < text.size() && text[pos] == '-') {
        ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && is_tag_char(text[pos])) ++pos;
        if (pos == start) {
            throw ParseError(text, pos, "empty tag");
        }
        suffix.emplace(text.substr(start, pos - start));
    }
    if (pos != text.size()) {
        throw ParseError(text, pos, std::string("unexpected character '") + text[pos] + "'");
    }
    return Version(std::move(segments), std::move(suffix));
}

std::string Version::str() const {
    std::string out;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(segments_[i]);
    }
    if (suffix_) {
        out += '-';
        out += *suffix_;
    }
    return out;
}

std::strong_ordering operator<=>(const Version& a, const Version& b) noexcept {
    const std::size_t n = std::max(a.segments_.size(), b.segments_.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = i < a.segments_.size() ? a.segments_[i] : 0;
        const auto y = i < b.segments_.size() ? b.segments_[i] : 0;
        if (x != y) return x <=> y;
    }
    if (a.suffix_.has_value() != b.suffix_.has_value()) {
        // untagged release sorts above any pre-release tag
        return a.suffix_.has_value() ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (!a.suffix_) return std::strong_ordering::equal;
    const int c = a.suffix_->compare(*b.suffix_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

}  // namespace pickforge
