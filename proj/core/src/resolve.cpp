// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

// Backtracking search for the optimal pick.
//
// Every package is a variable whose values are "absent" (index 0) or one of
// its eligible versions, newest first (indices 1..n). Dependencies and
// conflicts become binary constraints kept arc-consistent after each
// decision. Decisions are made in objective order: optional inclusion bits
// in name order (include first), then versions of requested packages in
// name order, then pulled-in packages in name order (newest first, absent
// last). The first complete assignment reached in that order is therefore
// the lexicographic optimum for the inclusion count being searched, and
// counts are tried from the largest attainable downwards.

#include <pickforge/solver.hpp>

#include <algorithm>
#include <deque>
#include <optional>

namespace pickforge {

namespace {

constexpr std::size_t kAbsent = 0;

enum class Role { Mandatory, Optional, Implicit };

using Domain = std::vector<char>;
using Domains = std::vector<Domain>;
using Assignment = std::vector<std::size_t>;

struct Arc {
    std::size_t other;
    std::size_t other_values;
    std::vector<char> allowed;  // row = value of this package, column = value of `other`

    bool ok(std::size_t mine, std::size_t theirs) const { return allowed[mine * other_values + theirs] != 0; }
};

class SelectionProblem {
public:
    SelectionProblem(const Repository& repo, const SelectionRequest& req, const std::set<std::string>& mandatory,
                     const std::set<std::string>& optional) {
        for (const auto& [name, versions] : repo.packages) {
            index_.emplace(name, names_.size());
            names_.push_back(name);
            std::vector<const PackageManifest*> values{nullptr};
            if (auto pin = req.overrides.find(name); pin != req.overrides.end()) {
                if (const auto* m = repo.find(name, pin->second)) values.push_back(m);
            } else {
                for (auto it = versions.rbegin(); it != versions.rend(); ++it) {
                    const auto& m = it->second;
                    if ((req.include_dev || !m.dev) && satisfies(req.toolchain, m.toolchain)) values.push_back(&m);
                }
            }
            values_.push_back(std::move(values));
            roles_.push_back(mandatory.count(name)  ? Role::Mandatory
                             : optional.count(name) ? Role::Optional
                                                    : Role::Implicit);
        }
        build_arcs();
    }

    std::size_t size() const { return names_.size(); }
    Role role(std::size_t i) const { return roles_[i]; }
    const std::string& name(std::size_t i) const { return names_[i]; }
    const PackageManifest* value(std::size_t i, std::size_t a) const { return values_[i][a]; }

    /// Domains after initial propagation, or nullopt when some mandatory
    /// package already has nothing left.
    std::optional<Domains> initial_domains() const {
        Domains d(size());
        std::vector<std::size_t> all;
        for (std::size_t i = 0; i < size(); ++i) {
            d[i].assign(values_[i].size(), 1);
            if (roles_[i] == Role::Mandatory) d[i][kAbsent] = 0;
            all.push_back(i);
        }
        if (!propagate(d, std::move(all))) return std::nullopt;
        return d;
    }

    /// First assignment in objective order with exactly `count` optional
    /// packages included; any count when `count` is negative.
    std::optional<Assignment> search(const Domains& start, int count) const {
        count_ = count;
        requested_order_.clear();
        implicit_order_.clear();
        optional_order_.clear();
        for (std::size_t i = 0; i < size(); ++i) {
            if (roles_[i] == Role::Optional) optional_order_.push_back(i);
            if (roles_[i] == Role::Implicit) implicit_order_.push_back(i);
            else requested_order_.push_back(i);
        }
        Domains d = start;
        Assignment out;
        if (choose_inclusion(d, 0, 0, out)) return out;
        return std::nullopt;
    }

private:
    void build_arcs() {
        const std::size_t n = size();
        std::vector<std::set<std::size_t>> related(n);
        supporters_.assign(n, {});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t a = 1; a < values_[i].size(); ++a) {
                const auto* m = values_[i][a];
                for (const auto& r : m->depends) {
                    const std::size_t j = index_.at(r.name);
                    related[i].insert(j);
                    related[j].insert(i);
                    supporters_[j].emplace_back(i, a);
                }
                for (const auto& r : m->conflicts) {
                    const std::size_t j = index_.at(r.name);
                    related[i].insert(j);
                    related[j].insert(i);
                }
            }
        }
        arcs_.assign(n, {});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j : related[i]) {
                if (i == j) continue;
                Arc arc{j, values_[j].size(), std::vector<char>(values_[i].size() * values_[j].size(), 0)};
                for (std::size_t a = 0; a < values_[i].size(); ++a) {
                    for (std::size_t b = 0; b < values_[j].size(); ++b) {
                        arc.allowed[a * arc.other_values + b] = pair_ok(i, a, j, b);
                    }
                }
                arcs_[i].push_back(std::move(arc));
            }
        }
    }

    // May package i take value a while package j takes value b?
    bool pair_ok(std::size_t i, std::size_t a, std::size_t j, std::size_t b) const {
        return tolerates(values_[i][a], names_[j], values_[j][b]) && tolerates(values_[j][b], names_[i], values_[i][a]);
    }

    static bool tolerates(const PackageManifest* m, const std::string& other_name, const PackageManifest* other) {
        if (!m) return true;
        for (const auto& r : m->depends) {
            if (r.name == other_name && (!other || !satisfies(other->version, r.constraint))) return false;
        }
        for (const auto& r : m->conflicts) {
            if (r.name == other_name && other && satisfies(other->version, r.constraint)) return false;
        }
        return true;
    }

    bool propagate(Domains& d, std::vector<std::size_t> seed) const {
        std::deque<std::size_t> queue(seed.begin(), seed.end());
        std::vector<char> queued(size(), 0);
        for (auto i : seed) queued[i] = 1;
        for (;;) {
            while (!queue.empty()) {
                const std::size_t x = queue.front();
                queue.pop_front();
                queued[x] = 0;
                for (const Arc& arc : arcs_[x]) {
                    const std::size_t y = arc.other;
                    bool changed = false;
                    for (std::size_t b = 0; b < d[y].size(); ++b) {
                        if (!d[y][b]) continue;
                        bool supported = false;
                        for (std::size_t a = 0; a < d[x].size() && !supported; ++a) {
                            supported = d[x][a] && arc.ok(a, b);
                        }
                        if (!supported) {
                            d[y][b] = 0;
                            changed = true;
                        }
                    }
                    if (changed) {
                        if (std::none_of(d[y].begin(), d[y].end(), [](char c) { return c != 0; })) return false;
                        if (!queued[y]) {
                            queued[y] = 1;
                            queue.push_back(y);
                        }
                    }
                }
            }
            // A pulled-in package needs some live value elsewhere that depends on it.
            bool changed = false;
            for (std::size_t j = 0; j < size(); ++j) {
                if (roles_[j] != Role::Implicit) continue;
                if (std::none_of(d[j].begin() + 1, d[j].end(), [](char c) { return c != 0; })) continue;
                const bool justified = std::any_of(supporters_[j].begin(), supporters_[j].end(),
                                                   [&](const auto& s) { return d[s.first][s.second] != 0; });
                if (justified) continue;
                std::fill(d[j].begin() + 1, d[j].end(), 0);
                if (!d[j][kAbsent]) return false;
                queued[j] = 1;
                queue.push_back(j);
                changed = true;
            }
            if (!changed) return true;
        }
    }

    bool restrict(const Domains& d, std::size_t i, const Domain& keep, Domains& out) const {
        out = d;
        for (std::size_t a = 0; a < keep.size(); ++a) out[i][a] = out[i][a] && keep[a];
        if (std::none_of(out[i].begin(), out[i].end(), [](char c) { return c != 0; })) return false;
        return propagate(out, {i});
    }

    bool choose_inclusion(const Domains& d, std::size_t pos, int included, Assignment& out) const {
        if (count_ >= 0) {
            int forced = 0, possible = 0;
            for (std::size_t p = pos; p < optional_order_.size(); ++p) {
                const Domain& dom = d[optional_order_[p]];
                if (!dom[kAbsent]) ++forced;
                if (std::any_of(dom.begin() + 1, dom.end(), [](char c) { return c != 0; })) ++possible;
            }
            if (included + forced > count_ || included + possible < count_) return false;
        }
        if (pos == optional_order_.size()) return choose_version(d, 0, out);

        const std::size_t i = optional_order_[pos];
        Domains next;
        Domain include(d[i].size(), 1);
        include[kAbsent] = 0;
        if (restrict(d, i, include, next) && choose_inclusion(next, pos + 1, included + 1, out)) return true;
        Domain exclude(d[i].size(), 0);
        exclude[kAbsent] = 1;
        return restrict(d, i, exclude, next) && choose_inclusion(next, pos + 1, included, out);
    }

    // Requested packages first, then pulled-in ones, each in name order.
    bool choose_version(const Domains& d, std::size_t pos, Assignment& out) const {
        const std::size_t total = requested_order_.size() + implicit_order_.size();
        if (pos == total) return accept(d, out);
        const bool implicit = pos >= requested_order_.size();
        const std::size_t i = implicit ? implicit_order_[pos - requested_order_.size()] : requested_order_[pos];

        std::vector<std::size_t> order;
        for (std::size_t a = 1; a < d[i].size(); ++a) order.push_back(a);
        order.push_back(kAbsent);

        Domains next;
        for (std::size_t a : order) {
            if (!d[i][a]) continue;
            Domain only(d[i].size(), 0);
            only[a] = 1;
            if (restrict(d, i, only, next) && choose_version(next, pos + 1, out)) return true;
        }
        return false;
    }

    bool accept(const Domains& d, Assignment& out) const {
        Assignment a(size(), kAbsent);
        for (std::size_t i = 0; i < size(); ++i) {
            a[i] = static_cast<std::size_t>(std::find(d[i].begin(), d[i].end(), 1) - d[i].begin());
        }
        // Reject pulled-in packages that only justify each other.
        std::vector<char> reached(size(), 0);
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < size(); ++i) {
            if (roles_[i] != Role::Implicit && a[i] != kAbsent) {
                reached[i] = 1;
                stack.push_back(i);
            }
        }
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            for (const auto& r : values_[i][a[i]]->depends) {
                const std::size_t j = index_.at(r.name);
                if (!reached[j] && a[j] != kAbsent) {
                    reached[j] = 1;
                    stack.push_back(j);
                }
            }
        }
        for (std::size_t i = 0; i < size(); ++i) {
            if (a[i] != kAbsent && !reached[i]) return false;
        }
        out = std::move(a);
        return true;
    }

    std::vector<std::string> names_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::vector<const PackageManifest*>> values_;
    std::vector<Role> roles_;
    std::vector<std::vector<Arc>> arcs_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> supporters_;

    mutable int count_ = -1;
    mutable std::vector<std::size_t> optional_order_;
    mutable std::vector<std::size_t> requested_order_;
    mutable std::vector<std::size_t> implicit_order_;
};

bool feasible(const Repository& repo, const SelectionRequest& req, const std::set<std::string>& mandatory) {
    const SelectionProblem problem(repo, req, mandatory, {});
    const auto d = problem.initial_domains();
    return d && problem.search(*d, -1).has_value();
}

UnsatReport explain(const Repository& repo, const SelectionRequest& req) {
    std::set<std::string> culprits = req.mandatory;
    for (const auto& name : req.mandatory) {
        std::set<std::string> trial = culprits;
        trial.erase(name);
        if (!feasible(repo, req, trial)) culprits = std::move(trial);
    }
    return selection::unsat_report(repo, req, {culprits.begin(), culprits.end()});
}

}  // namespace

Resolution resolve_pick(const Repository& repo, const SelectionRequest& req) {
    selection::validate_request(repo, req);
    const SelectionProblem problem(repo, req, req.mandatory, req.optional);
    const auto start = problem.initial_domains();
    if (!start || !problem.search(*start, -1)) return explain(repo, req);

    int most = 0, least = 0;
    for (std::size_t i = 0; i < problem.size(); ++i) {
        if (problem.role(i) != Role::Optional) continue;
        const Domain& dom = (*start)[i];
        if (std::any_of(dom.begin() + 1, dom.end(), [](char c) { return c != 0; })) ++most;
        if (!dom[kAbsent]) ++least;
    }
    for (int count = most; count >= least; --count) {
        const auto found = problem.search(*start, count);
        if (!found) continue;
        Pick pick;
        pick.toolchain = req.toolchain;
        for (std::size_t i = 0; i < problem.size(); ++i) {
            if ((*found)[i] != kAbsent) pick.selected.emplace(problem.name(i), problem.value(i, (*found)[i])->version);
        }
        for (const auto& name : req.optional) {
            if (!pick.selected.count(name)) {
                pick.excluded.emplace(name, selection::exclusion_reason(repo, req, pick.selected, name));
            }
        }
        return pick;
    }
    // The unconstrained search succeeded, so some count in [least, most] must too.
    throw std::logic_error("resolve_pick: no inclusion count admits a solution");
}

}  // namespace pickforge
