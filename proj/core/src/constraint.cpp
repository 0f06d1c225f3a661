// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <pickforge/constraint.hpp>

#include <algorithm>

namespace pickforge {

namespace {

bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_version_char(char c) noexcept {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '.' || c == '-';
}

class ConstraintParser {
public:
    explicit ConstraintParser(std::string_view text) : text_(text) {}

    Constraint run() {
        skip_ws();
        if (pos_ == text_.size()) {
            throw ParseError(text_, pos_, "empty constraint");
        }
        if (text_[pos_] == '*') {
            ++pos_;
            skip_ws();
            if (pos_ != text_.size()) {
                throw ParseError(text_, pos_, "unexpected input after '*'");
            }
            return Constraint::any();
        }
        std::vector<Constraint::Clause> clauses;
        for (;;) {
            clauses.push_back(clause());
            skip_ws();
            if (pos_ == text_.size()) break;
            if (text_[pos_] != '|') {
                throw ParseError(text_, pos_, "expected ',' or '|'");
            }
            ++pos_;
        }
        return Constraint(std::move(clauses));
    }

private:
    Constraint::Clause clause() {
        Constraint::Clause atoms;
        for (;;) {
            atoms.push_back(atom());
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                continue;
            }
            return atoms;
        }
    }

    Atom atom() {
        skip_ws();
        const std::size_t op_start = pos_;
        const CompareOp op = oper();
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_version_char(text_[pos_])) ++pos_;
        if (start == pos_) {
            throw ParseError(text_, start, pos_ < text_.size() && text_[pos_] == '='
                                               ? "unknown operator '" + std::string(text_.substr(op_start, pos_ + 1 - op_start)) + "'"
                                               : std::string("expected version"));
        }
        try {
            return Atom{op, Version::parse(text_.substr(start, pos_ - start))};
        } catch (const ParseError& e) {
            throw ParseError(text_, start + e.offset(), "invalid version");
        }
    }

    CompareOp oper() {
        auto next = [&](char c) { return pos_ + 1 < text_.size() && text_[pos_ + 1] == c; };
        if (pos_ >= text_.size()) throw ParseError(text_, pos_, "expected operator");
        switch (text_[pos_]) {
            case '=':
                if (next('=')) throw ParseError(text_, pos_, "unknown operator '=='");
                ++pos_;
                return CompareOp::Eq;
            case '!':
                if (!next('=')) throw ParseError(text_, pos_, "unknown operator '!'");
                pos_ += 2;
                return CompareOp::Ne;
            case '>':
                if (next('=')) {
                    pos_ += 2;
                    return CompareOp::Ge;
                }
                ++pos_;
                return CompareOp::Gt;
            case '<':
                if (next('=')) {
                    pos_ += 2;
                    return CompareOp::Le;
                }
                ++pos_;
                return CompareOp::Lt;
            default:
                throw ParseError(text_, pos_, "expected operator");
        }
    }

    void skip_ws() {
        while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(CompareOp op) noexcept {
    switch (op) {
        case CompareOp::Eq: return "=";
        case CompareOp::Ne: return "!=";
        case CompareOp::Ge: return ">=";
        case CompareOp::Gt: return ">";
        case CompareOp::Le: return "<=";
        case CompareOp::Lt: return "<";
    }
    return "?";
}

bool Atom::matches(const Version& v) const noexcept {
    const auto c = v <=> version;
    switch (op) {
        case CompareOp::Eq: return c == 0;
        case CompareOp::Ne: return c != 0;
        case CompareOp::Ge: return c >= 0;
        case CompareOp::Gt: return c > 0;
        case CompareOp::Le: return c <= 0;
        case CompareOp::Lt: return c < 0;
    }
    return false;
}

Constraint::Constraint(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {
    if (clauses_.empty()) {
        throw std::invalid_argument("constraint needs at least one clause");
    }
    const bool has_empty = std::any_of(clauses_.begin(), clauses_.end(), [](const Clause& c) { return c.empty(); });
    if (has_empty && clauses_.size() > 1) {
        throw std::invalid_argument("the universal clause cannot be combined with others");
    }
}

Constraint Constraint::parse(std::string_view text) { return ConstraintParser(text).run(); }

bool Constraint::is_universal() const noexcept { return clauses_.size() == 1 && clauses_.front().empty(); }

bool Constraint::allows(const Version& v) const noexcept {
    return std::any_of(clauses_.begin(), clauses_.end(), [&](const Clause& clause) {
        return std::all_of(clause.begin(), clause.end(), [&](const Atom& a) { return a.matches(v); });
    });
}

std::string Constraint::str() const {
    if (is_universal()) return "*";
    std::string out;
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
        if (i) out += " | ";
        for (std::size_t j = 0; j < clauses_[i].size(); ++j) {
            if (j) out += ", ";
            out += to_string(clauses_[i][j].op);
            out += clauses_[i][j].version.str();
        }
    }
    return out;
}

}  // namespace pickforge
