// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <pickforge/version.hpp>

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace pickforge {

enum class CompareOp { Eq, Ne, Ge, Gt, Le, Lt };

std::string_view to_string(CompareOp op) noexcept;

struct Atom {
    CompareOp op;
    Version version;

    bool matches(const Version& v) const noexcept;
    friend bool operator==(const Atom&, const Atom&) = default;
};

/// A disjunction of conjunctions of comparison atoms.
///
///   constraint := "*" | clause ("|" clause)*
///   clause     := atom ("," atom)*
///   atom       := ("=" | "!=" | ">=" | ">" | "<=" | "<") version
///
/// Whitespace between tokens is ignored. The universal constraint "*" is
/// stored as a single empty clause.
class Constraint {
public:
    using Clause = std::vector<Atom>;

    Constraint() : clauses_{Clause{}} {}
    explicit Constraint(std::vector<Clause> clauses);

    static Constraint parse(std::string_view text);
    static Constraint any() { return Constraint{}; }
    static Constraint exactly(const Version& v) { return Constraint{{Clause{Atom{CompareOp::Eq, v}}}}; }

    bool is_universal() const noexcept;
    const std::vector<Clause>& clauses() const noexcept { return clauses_; }

    bool allows(const Version& v) const noexcept;

    /// Canonical text: atoms joined by ", ", clauses by " | ".
    std::string str() const;

    friend bool operator==(const Constraint&, const Constraint&) = default;

private:
    std::vector<Clause> clauses_;
};

inline Constraint parse_constraint(std::string_view text) { return Constraint::parse(text); }

inline bool satisfies(const Version& v, const Constraint& c) noexcept { return c.allows(v); }

inline std::ostream& operator<<(std::ostream& os, const Constraint& c) { return os << c.str(); }

}  // namespace pickforge
