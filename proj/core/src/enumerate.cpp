// Copyright 2026 The pickforge Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force reference for resolve_pick. Walks every assignment of
// "absent or one eligible version" to every package, keeps the valid ones
// and scores them with an explicit key. A partial assignment is abandoned
// only once it already breaks a constraint between packages it has fixed.

#include <pickforge/solver.hpp>

#include <algorithm>
#include <optional>

namespace pickforge {

namespace {

struct Key {
    int included = 0;
    std::vector<bool> optional_bits;             // optional names ascending, true = included
    std::vector<Version> requested_versions;     // selected requested names ascending
    std::vector<std::optional<Version>> pulled;  // other names ascending, nullopt = absent

    // Lexicographic with "absent" below every version.
    friend bool operator<(const Key& a, const Key& b) {
        if (a.included != b.included) return a.included < b.included;
        if (a.optional_bits != b.optional_bits) return a.optional_bits < b.optional_bits;
        for (std::size_t i = 0; i < a.requested_versions.size(); ++i) {
            const auto c = a.requested_versions[i] <=> b.requested_versions[i];
            if (c != 0) return c < 0;
        }
        for (std::size_t i = 0; i < a.pulled.size(); ++i) {
            const auto& x = a.pulled[i];
            const auto& y = b.pulled[i];
            if (x.has_value() != y.has_value()) return !x.has_value();
            if (x && *x != *y) return *x < *y;
        }
        return false;
    }
};

class Enumerator {
public:
    Enumerator(const Repository& repo, const SelectionRequest& req, std::set<std::string> mandatory,
               std::set<std::string> optional)
        : mandatory_(std::move(mandatory)), optional_(std::move(optional)) {
        for (const auto& [name, versions] : repo.packages) {
            names_.push_back(name);
            std::vector<const PackageManifest*> choices{nullptr};
            for (const auto& [version, m] : versions) {
                const auto pin = req.overrides.find(name);
                const bool allowed = pin != req.overrides.end()
                                         ? version == pin->second
                                         : (req.include_dev || !m.dev) && satisfies(req.toolchain, m.toolchain);
                if (allowed) choices.push_back(&m);
            }
            choices_.push_back(std::move(choices));
        }
        chosen_.assign(names_.size(), nullptr);
    }

    std::uint64_t space() const {
        std::uint64_t total = 1;
        for (const auto& c : choices_) {
            if (total > UINT64_MAX / c.size()) return UINT64_MAX;
            total *= c.size();
        }
        return total;
    }

    /// Best valid assignment by Key; nullopt when none is valid.
    std::optional<std::map<std::string, Version>> best() {
        best_.reset();
        stop_at_first_ = false;
        walk(0);
        return best_selection_;
    }

    bool any() {
        best_.reset();
        stop_at_first_ = true;
        return walk(0);
    }

private:
    // true when the walk should stop
    bool walk(std::size_t pos) {
        if (pos == names_.size()) return finish();
        for (const auto* m : choices_[pos]) {
            if (!m && mandatory_.count(names_[pos])) continue;
            chosen_[pos] = m;
            if (consistent_upto(pos) && walk(pos + 1)) return true;
        }
        chosen_[pos] = nullptr;
        return false;
    }

    const PackageManifest* chosen(const std::string& name) const {
        const auto it = std::lower_bound(names_.begin(), names_.end(), name);
        return chosen_[static_cast<std::size_t>(it - names_.begin())];
    }

    bool fixed(const std::string& name, std::size_t pos) const {
        return static_cast<std::size_t>(std::lower_bound(names_.begin(), names_.end(), name) - names_.begin()) <= pos;
    }

    // Checks every constraint between package `pos` and packages 0..pos.
    bool consistent_upto(std::size_t pos) const {
        for (std::size_t i = 0; i <= pos; ++i) {
            const PackageManifest* m = chosen_[i];
            if (!m) continue;
            for (const auto& d : m->depends) {
                if (!fixed(d.name, pos) || (i != pos && d.name != names_[pos])) continue;
                const auto* t = chosen(d.name);
                if (!t || !satisfies(t->version, d.constraint)) return false;
            }
            for (const auto& c : m->conflicts) {
                if (!fixed(c.name, pos) || (i != pos && c.name != names_[pos])) continue;
                const auto* t = chosen(c.name);
                if (t && satisfies(t->version, c.constraint)) return false;
            }
        }
        return true;
    }

    bool requested(const std::string& name) const { return mandatory_.count(name) || optional_.count(name); }

    bool finish() {
        // every selected package outside the request must be reachable from it
        std::set<std::string> reached;
        std::vector<std::string> stack;
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (chosen_[i] && requested(names_[i])) {
                reached.insert(names_[i]);
                stack.push_back(names_[i]);
            }
        }
        while (!stack.empty()) {
            const auto* m = chosen(stack.back());
            stack.pop_back();
            for (const auto& d : m->depends) {
                if (reached.insert(d.name).second) stack.push_back(d.name);
            }
        }
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (chosen_[i] && !reached.count(names_[i])) return false;
        }
        if (stop_at_first_) return true;

        Key key;
        std::map<std::string, Version> selection;
        for (std::size_t i = 0; i < names_.size(); ++i) {
            const auto* m = chosen_[i];
            if (m) selection.emplace(names_[i], m->version);
            if (optional_.count(names_[i])) {
                key.optional_bits.push_back(m != nullptr);
                key.included += m != nullptr;
            }
        }
        for (std::size_t i = 0; i < names_.size(); ++i) {
            const auto* m = chosen_[i];
            if (requested(names_[i])) {
                if (m) key.requested_versions.push_back(m->version);
            } else {
                key.pulled.push_back(m ? std::optional<Version>(m->version) : std::nullopt);
            }
        }
        if (!best_ || *best_ < key) {
            best_ = std::move(key);
            best_selection_ = std::move(selection);
        }
        return false;
    }

    std::set<std::string> mandatory_;
    std::set<std::string> optional_;
    std::vector<std::string> names_;
    std::vector<std::vector<const PackageManifest*>> choices_;
    std::vector<const PackageManifest*> chosen_;
    bool stop_at_first_ = false;
    std::optional<Key> best_;
    std::optional<std::map<std::string, Version>> best_selection_;
};

}  // namespace

Resolution enumerate_best(const Repository& repo, const SelectionRequest& req, std::uint64_t limit) {
    selection::validate_request(repo, req);
    Enumerator full(repo, req, req.mandatory, req.optional);
    if (const auto space = full.space(); space > limit) throw SearchSpaceTooLarge(space, limit);

    const auto best = full.best();
    if (!best) {
        std::set<std::string> culprits = req.mandatory;
        for (const auto& name : req.mandatory) {
            std::set<std::string> trial = culprits;
            trial.erase(name);
            if (!Enumerator(repo, req, trial, {}).any()) culprits = std::move(trial);
        }
        return selection::unsat_report(repo, req, {culprits.begin(), culprits.end()});
    }
    Pick pick;
    pick.toolchain = req.toolchain;
    pick.selected = *best;
    for (const auto& name : req.optional) {
        if (!pick.selected.count(name)) {
            pick.excluded.emplace(name, selection::exclusion_reason(repo, req, pick.selected, name));
        }
    }
    return pick;
}

}  // namespace pickforge
