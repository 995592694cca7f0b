#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <deque>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "ringview/errors.hpp"

namespace ringview {

enum class Kind : uint8_t { Int64, Float64, Str };

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Int64: return "int";
        case Kind::Float64: return "float";
        case Kind::Str: return "str";
    }
    return "?";
}

inline Kind kind_from_name(std::string_view s) {
    if (s == "int") return Kind::Int64;
    if (s == "float") return Kind::Float64;
    if (s == "str") return Kind::Str;
    throw ParseError("unknown domain kind '" + std::string(s) + "'");
}

// Process-wide pool of interned strings. Interning is guarded by a mutex;
// lookups by id rely on deque reference stability and require that no
// concurrent interning races with them (single-writer discipline).
class StringPool {
public:
    static StringPool& instance() {
        static StringPool pool;
        return pool;
    }

    uint32_t intern(std::string_view s) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = ids_.find(std::string(s));
        if (it != ids_.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(strings_.size());
        strings_.emplace_back(s);
        ids_.emplace(strings_.back(), id);
        return id;
    }

    const std::string& str(uint32_t id) const { return strings_[id]; }

private:
    std::deque<std::string> strings_;
    std::unordered_map<std::string, uint32_t> ids_;
    std::mutex mu_;
};

// A single key value: int64, float64, or interned string. Comparisons are
// defined within one kind; ordering across kinds is a schema error.
class Value {
public:
    Value() : kind_(Kind::Int64) { i_ = 0; }

    static Value of_int(int64_t v) {
        Value x;
        x.kind_ = Kind::Int64;
        x.i_ = v;
        return x;
    }
    static Value of_float(double v) {
        Value x;
        x.kind_ = Kind::Float64;
        x.f_ = (v == 0.0) ? 0.0 : v; // normalize -0.0
        return x;
    }
    static Value of_str(std::string_view s) {
        Value x;
        x.kind_ = Kind::Str;
        x.s_ = StringPool::instance().intern(s);
        return x;
    }

    static Value parse(std::string_view text, Kind kind) {
        switch (kind) {
            case Kind::Int64: {
                errno = 0;
                char* end = nullptr;
                std::string tmp(text);
                long long v = std::strtoll(tmp.c_str(), &end, 10);
                if (end == tmp.c_str() || *end != '\0' || errno != 0)
                    throw ParseError("bad int value '" + tmp + "'");
                return of_int(v);
            }
            case Kind::Float64: {
                char* end = nullptr;
                std::string tmp(text);
                double v = std::strtod(tmp.c_str(), &end);
                if (end == tmp.c_str() || *end != '\0')
                    throw ParseError("bad float value '" + tmp + "'");
                return of_float(v);
            }
            case Kind::Str: return of_str(text);
        }
        throw ParseError("bad kind");
    }

    Kind kind() const { return kind_; }

    int64_t as_int() const {
        require(Kind::Int64);
        return i_;
    }
    double as_float() const {
        require(Kind::Float64);
        return f_;
    }
    std::string_view as_str() const {
        require(Kind::Str);
        return StringPool::instance().str(s_);
    }

    // Numeric view for lifting functions; strings are rejected.
    double numeric() const {
        if (kind_ == Kind::Int64) return static_cast<double>(i_);
        if (kind_ == Kind::Float64) return f_;
        throw NonNumericValue("string value used where a number is required");
    }

    bool operator==(const Value& o) const {
        if (kind_ != o.kind_) return false;
        switch (kind_) {
            case Kind::Int64: return i_ == o.i_;
            case Kind::Float64: return f_ == o.f_;
            case Kind::Str: return s_ == o.s_;
        }
        return false;
    }
    bool operator!=(const Value& o) const { return !(*this == o); }

    size_t hash() const {
        uint64_t h = 0;
        switch (kind_) {
            case Kind::Int64: h = static_cast<uint64_t>(i_); break;
            case Kind::Float64: std::memcpy(&h, &f_, sizeof(double)); break;
            case Kind::Str: h = s_; break;
        }
        h ^= static_cast<uint64_t>(kind_) << 56;
        h *= 0x9e3779b97f4a7c15ull;
        h ^= h >> 32;
        return static_cast<size_t>(h);
    }

    std::string to_string() const {
        char buf[64];
        switch (kind_) {
            case Kind::Int64:
                std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(i_));
                return buf;
            case Kind::Float64:
                std::snprintf(buf, sizeof(buf), "%.17g", f_);
                return buf;
            case Kind::Str: return std::string(as_str());
        }
        return "?";
    }

private:
    void require(Kind k) const {
        if (kind_ != k)
            throw SchemaMismatch(std::string("value is ") + kind_name(kind_) +
                                 ", expected " + kind_name(k));
    }

    Kind kind_;
    union {
        int64_t i_;
        double f_;
        uint32_t s_;
    };
};

// Total order within a kind; comparing across kinds is a schema error.
inline bool value_less(const Value& a, const Value& b) {
    if (a.kind() != b.kind())
        throw SchemaMismatch("cannot order values of different kinds");
    switch (a.kind()) {
        case Kind::Int64: return a.as_int() < b.as_int();
        case Kind::Float64: return a.as_float() < b.as_float();
        case Kind::Str: return a.as_str() < b.as_str();
    }
    return false;
}

} // namespace ringview
