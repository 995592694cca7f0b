#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ringview/schema.hpp"

namespace ringview {

// One occurrence of a relation in the query. A relation name may occur at
// several atoms (self-joins); each atom has its own leaf in the view tree
// and its own copy of the stored data.
struct Atom {
    std::string name;
    std::vector<VarId> declared_vars; // column order as declared (file order)
    std::vector<Kind> declared_kinds;
    bool updatable = false;
    std::optional<VarId> placement; // leaf position; defaults to the lowest variable

    Schema schema() const {
        std::vector<Column> cols;
        cols.reserve(declared_vars.size());
        for (size_t i = 0; i < declared_vars.size(); ++i)
            cols.push_back({declared_vars[i], declared_kinds[i]});
        return Schema::of(std::move(cols));
    }
};

inline Kind kind_of_var(const std::vector<Atom>& atoms, VarId v) {
    for (const auto& a : atoms)
        for (size_t i = 0; i < a.declared_vars.size(); ++i)
            if (a.declared_vars[i] == v) return a.declared_kinds[i];
    throw UnknownVariable("variable '" + var_name(v) + "' occurs in no relation");
}

struct QuerySpec {
    std::vector<Atom> atoms;
    std::vector<VarId> free; // group-by variables (key-level), canonical order

    std::set<VarId> all_vars() const {
        std::set<VarId> out;
        for (const auto& a : atoms) out.insert(a.declared_vars.begin(), a.declared_vars.end());
        return out;
    }

    std::vector<int> atoms_of(const std::string& name) const {
        std::vector<int> out;
        for (size_t i = 0; i < atoms.size(); ++i)
            if (atoms[i].name == name) out.push_back(static_cast<int>(i));
        return out;
    }

    void validate() const {
        if (atoms.empty()) throw ValidationError("query has no relations");
        auto vars = all_vars();
        for (VarId f : free)
            if (!vars.count(f))
                throw ValidationError("free variable '" + var_name(f) +
                                      "' occurs in no relation schema");
        std::map<VarId, Kind> kinds;
        for (const auto& a : atoms) {
            if (a.declared_vars.size() != a.declared_kinds.size())
                throw ValidationError("relation '" + a.name + "': malformed schema");
            for (size_t i = 0; i < a.declared_vars.size(); ++i) {
                auto [it, inserted] = kinds.emplace(a.declared_vars[i], a.declared_kinds[i]);
                if (!inserted && it->second != a.declared_kinds[i])
                    throw SchemaMismatch("variable '" + var_name(a.declared_vars[i]) +
                                         "' declared with conflicting kinds");
            }
        }
    }
};

} // namespace ringview
