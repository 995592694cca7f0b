#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ringview/errors.hpp"
#include "ringview/value.hpp"

namespace ringview {

using VarId = uint32_t;

// Global registry of query variables. The engine-wide canonical variable
// order is lexicographic by name; it fixes join output schemas and tuple
// layouts across the whole process.
class Vars {
public:
    static Vars& instance() {
        static Vars v;
        return v;
    }

    VarId id(std::string_view name) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = ids_.find(std::string(name));
        if (it != ids_.end()) return it->second;
        VarId id = static_cast<VarId>(names_.size());
        names_.emplace_back(name);
        ids_.emplace(names_.back(), id);
        return id;
    }

    const std::string& name(VarId id) const { return names_[id]; }

private:
    std::deque<std::string> names_;
    std::unordered_map<std::string, VarId> ids_;
    std::mutex mu_;
};

inline VarId var(std::string_view name) { return Vars::instance().id(name); }
inline const std::string& var_name(VarId v) { return Vars::instance().name(v); }
inline bool var_less(VarId a, VarId b) { return var_name(a) < var_name(b); }

inline void sort_vars(std::vector<VarId>& vs) {
    std::sort(vs.begin(), vs.end(), var_less);
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

inline std::string vars_to_string(const std::vector<VarId>& vs) {
    std::string out;
    for (size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ",";
        out += var_name(vs[i]);
    }
    return out;
}

struct Column {
    VarId var;
    Kind kind;

    bool operator==(const Column& o) const { return var == o.var && kind == o.kind; }
};

// Ordered list of columns, always kept in the canonical variable order.
class Schema {
public:
    Schema() = default;

    static Schema of(std::vector<Column> cols) {
        std::sort(cols.begin(), cols.end(),
                  [](const Column& a, const Column& b) { return var_less(a.var, b.var); });
        for (size_t i = 1; i < cols.size(); ++i)
            if (cols[i].var == cols[i - 1].var)
                throw SchemaMismatch("duplicate variable '" + var_name(cols[i].var) +
                                     "' in schema");
        Schema s;
        s.cols_ = std::move(cols);
        return s;
    }

    const std::vector<Column>& cols() const { return cols_; }
    size_t size() const { return cols_.size(); }
    bool empty() const { return cols_.empty(); }

    int index_of(VarId v) const {
        for (size_t i = 0; i < cols_.size(); ++i)
            if (cols_[i].var == v) return static_cast<int>(i);
        return -1;
    }
    bool contains(VarId v) const { return index_of(v) >= 0; }

    Kind kind_of(VarId v) const {
        int i = index_of(v);
        if (i < 0) throw UnknownVariable("variable '" + var_name(v) + "' not in schema");
        return cols_[static_cast<size_t>(i)].kind;
    }

    std::vector<VarId> vars() const {
        std::vector<VarId> out;
        out.reserve(cols_.size());
        for (const auto& c : cols_) out.push_back(c.var);
        return out;
    }

    Schema project(const std::vector<VarId>& keep) const {
        std::vector<Column> out;
        for (const auto& c : cols_)
            if (std::find(keep.begin(), keep.end(), c.var) != keep.end()) out.push_back(c);
        if (out.size() != keep.size())
            throw UnknownVariable("projection variable not in schema");
        Schema s;
        s.cols_ = std::move(out);
        return s;
    }

    Schema without(VarId v) const {
        int i = index_of(v);
        if (i < 0) throw UnknownVariable("variable '" + var_name(v) + "' not in schema");
        Schema s;
        s.cols_ = cols_;
        s.cols_.erase(s.cols_.begin() + i);
        return s;
    }

    Schema union_with(const Schema& o) const {
        std::vector<Column> out;
        size_t i = 0, j = 0;
        while (i < cols_.size() || j < o.cols_.size()) {
            if (j == o.cols_.size() ||
                (i < cols_.size() && var_less(cols_[i].var, o.cols_[j].var))) {
                out.push_back(cols_[i++]);
            } else if (i == cols_.size() || var_less(o.cols_[j].var, cols_[i].var)) {
                out.push_back(o.cols_[j++]);
            } else {
                if (cols_[i].kind != o.cols_[j].kind)
                    throw SchemaMismatch("variable '" + var_name(cols_[i].var) +
                                         "' declared with conflicting kinds");
                out.push_back(cols_[i]);
                ++i;
                ++j;
            }
        }
        Schema s;
        s.cols_ = std::move(out);
        return s;
    }

    bool is_subset_of(const Schema& o) const {
        for (const auto& c : cols_) {
            int i = o.index_of(c.var);
            if (i < 0 || o.cols_[static_cast<size_t>(i)].kind != c.kind) return false;
        }
        return true;
    }

    bool operator==(const Schema& o) const { return cols_ == o.cols_; }
    bool operator!=(const Schema& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string out = "(";
        for (size_t i = 0; i < cols_.size(); ++i) {
            if (i) out += ",";
            out += var_name(cols_[i].var);
        }
        return out + ")";
    }

private:
    std::vector<Column> cols_;
};

struct Tuple {
    std::vector<Value> vals;

    Tuple() = default;
    explicit Tuple(std::vector<Value> v) : vals(std::move(v)) {}

    size_t size() const { return vals.size(); }
    bool operator==(const Tuple& o) const { return vals == o.vals; }
    bool operator!=(const Tuple& o) const { return !(*this == o); }

    size_t hash() const {
        size_t h = 0x9e3779b97f4a7c15ull ^ vals.size();
        for (const auto& v : vals) h = h * 1099511628211ull ^ v.hash();
        return h;
    }

    std::string to_string() const {
        std::string out = "(";
        for (size_t i = 0; i < vals.size(); ++i) {
            if (i) out += ",";
            out += vals[i].to_string();
        }
        return out + ")";
    }
};

struct TupleHash {
    size_t operator()(const Tuple& t) const { return t.hash(); }
};

inline bool tuple_less(const Tuple& a, const Tuple& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        if (value_less(a.vals[i], b.vals[i])) return true;
        if (value_less(b.vals[i], a.vals[i])) return false;
    }
    return a.size() < b.size();
}

// Positions of `target` columns inside `source`; used to project tuples.
inline std::vector<int> projection_positions(const Schema& source, const Schema& target) {
    std::vector<int> pos;
    pos.reserve(target.size());
    for (const auto& c : target.cols()) {
        int i = source.index_of(c.var);
        if (i < 0) throw UnknownVariable("variable '" + var_name(c.var) + "' not in schema");
        pos.push_back(i);
    }
    return pos;
}

inline Tuple project_tuple(const Tuple& t, const std::vector<int>& positions) {
    Tuple out;
    out.vals.reserve(positions.size());
    for (int p : positions) out.vals.push_back(t.vals[static_cast<size_t>(p)]);
    return out;
}

} // namespace ringview
