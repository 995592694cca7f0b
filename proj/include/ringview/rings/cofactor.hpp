#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <string>
#include <vector>

#include "ringview/errors.hpp"
#include "ringview/value.hpp"

namespace ringview {

// Payload of the degree-m matrix ring: a tuple count, per-variable sums, and
// a symmetric matrix of sums of pairwise products. Only the blocks for the
// variables seen so far are stored (sorted active index set); the matrix
// keeps its upper triangle and mirrors on read. Payloads densify toward the
// root as joins merge active sets.
struct CofactorPayload {
    long long count = 0;
    std::vector<uint32_t> vars; // active variable indices, ascending
    std::vector<double> s;      // sums, one per active index
    std::vector<double> q;      // upper triangle over active indices, row-major

    static size_t tri_size(size_t k) { return k * (k + 1) / 2; }
    // Index of (i,j), i <= j, in the row-major upper triangle of a k×k matrix.
    static size_t tri_index(size_t i, size_t j, size_t k) {
        return i * k - i * (i - 1) / 2 + (j - i);
    }

    int slot_of(uint32_t v) const {
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == v) return static_cast<int>(i);
        return -1;
    }

    double sum_at(uint32_t v) const {
        int i = slot_of(v);
        return i < 0 ? 0.0 : s[static_cast<size_t>(i)];
    }

    double quad_at(uint32_t vi, uint32_t vj) const {
        if (vi > vj) std::swap(vi, vj);
        int i = slot_of(vi), j = slot_of(vj);
        if (i < 0 || j < 0) return 0.0;
        return q[tri_index(static_cast<size_t>(i), static_cast<size_t>(j), vars.size())];
    }

    bool operator==(const CofactorPayload& o) const {
        return count == o.count && vars == o.vars && s == o.s && q == o.q;
    }
};

class CofactorRing {
public:
    using Payload = CofactorPayload;

    explicit CofactorRing(uint32_t degree = 0, double zero_eps = 1e-12)
        : m_(degree), eps_(zero_eps) {}

    uint32_t degree() const { return m_; }

    Payload zero() const { return Payload{}; }
    Payload one() const {
        Payload p;
        p.count = 1;
        return p;
    }

    // Lifting for the variable at index j: count 1, s_j = x, Q_jj = x².
    Payload lift(uint32_t j, const Value& x) const {
        check_index(j);
        double v = x.numeric();
        Payload p;
        p.count = 1;
        p.vars = {j};
        p.s = {v};
        p.q = {v * v};
        return p;
    }

    Payload add(const Payload& a, const Payload& b) const {
        check(a);
        check(b);
        Payload out;
        out.count = a.count + b.count;
        merge_vars(a, b, out);
        size_t k = out.vars.size();
        out.s.assign(k, 0.0);
        out.q.assign(Payload::tri_size(k), 0.0);
        scatter_add(a, out, 1.0);
        scatter_add(b, out, 1.0);
        return out;
    }

    // (ca·cb, cb·sa + ca·sb, cb·Qa + ca·Qb + sa·sbᵀ + sb·saᵀ).
    Payload mul(const Payload& a, const Payload& b) const {
        check(a);
        check(b);
        Payload out;
        out.count = a.count * b.count;
        merge_vars(a, b, out);
        size_t k = out.vars.size();
        out.s.assign(k, 0.0);
        out.q.assign(Payload::tri_size(k), 0.0);

        std::vector<double> sa(k, 0.0), sb(k, 0.0);
        for (size_t i = 0; i < a.vars.size(); ++i)
            sa[static_cast<size_t>(out.slot_of(a.vars[i]))] = a.s[i];
        for (size_t i = 0; i < b.vars.size(); ++i)
            sb[static_cast<size_t>(out.slot_of(b.vars[i]))] = b.s[i];

        for (size_t i = 0; i < k; ++i)
            out.s[i] = static_cast<double>(b.count) * sa[i] + static_cast<double>(a.count) * sb[i];
        scatter_quad(a, out, static_cast<double>(b.count));
        scatter_quad(b, out, static_cast<double>(a.count));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = i; j < k; ++j)
                out.q[Payload::tri_index(i, j, k)] += sa[i] * sb[j] + sb[i] * sa[j];
        return out;
    }

    Payload negate(const Payload& a) const {
        Payload out = a;
        out.count = -out.count;
        for (auto& v : out.s) v = -v;
        for (auto& v : out.q) v = -v;
        return out;
    }

    bool is_zero(const Payload& a) const {
        if (a.count != 0) return false;
        for (double v : a.s)
            if (std::fabs(v) >= eps_) return false;
        for (double v : a.q)
            if (std::fabs(v) >= eps_) return false;
        return true;
    }

    // Textual form: c;s1,...,sm;q11,...,qmm with the stored upper triangle
    // expanded to the full row-major matrix.
    std::string encode(const Payload& p) const {
        std::string out = std::to_string(p.count);
        out += ';';
        char buf[64];
        for (uint32_t j = 0; j < m_; ++j) {
            if (j) out += ',';
            std::snprintf(buf, sizeof(buf), "%.17g", p.sum_at(j));
            out += buf;
        }
        out += ';';
        for (uint32_t i = 0; i < m_; ++i)
            for (uint32_t j = 0; j < m_; ++j) {
                if (i || j) out += ',';
                std::snprintf(buf, sizeof(buf), "%.17g", p.quad_at(i, j));
                out += buf;
            }
        return out;
    }

    Payload decode(std::string_view text) const {
        Payload p;
        std::string tmp(text);
        char* cur = tmp.data();
        char* end = nullptr;
        p.count = std::strtoll(cur, &end, 10);
        if (end == cur || *end != ';') throw ParseError("bad cofactor payload");
        cur = end + 1;
        p.vars.resize(m_);
        for (uint32_t j = 0; j < m_; ++j) p.vars[j] = j;
        p.s.resize(m_);
        for (uint32_t j = 0; j < m_; ++j) {
            p.s[j] = std::strtod(cur, &end);
            if (end == cur) throw ParseError("bad cofactor payload");
            cur = end + (*end == ',' || *end == ';' ? 1 : 0);
        }
        p.q.assign(Payload::tri_size(m_), 0.0);
        for (uint32_t i = 0; i < m_; ++i)
            for (uint32_t j = 0; j < m_; ++j) {
                double v = std::strtod(cur, &end);
                if (end == cur) throw ParseError("bad cofactor payload");
                cur = end + (*end == ',' ? 1 : 0);
                if (i <= j) p.q[Payload::tri_index(i, j, m_)] = v;
            }
        return p;
    }

    size_t payload_weight(const Payload&) const { return 1; }

    static bool approx_equal(const Payload& a, const Payload& b, uint32_t m, double tol) {
        if (a.count != b.count) return false;
        for (uint32_t j = 0; j < m; ++j)
            if (std::fabs(a.sum_at(j) - b.sum_at(j)) > tol) return false;
        for (uint32_t i = 0; i < m; ++i)
            for (uint32_t j = i; j < m; ++j)
                if (std::fabs(a.quad_at(i, j) - b.quad_at(i, j)) > tol) return false;
        return true;
    }

private:
    void check_index(uint32_t j) const {
        if (j >= m_)
            throw DegreeMismatch("variable index " + std::to_string(j) +
                                 " out of range for degree " + std::to_string(m_));
    }
    void check(const Payload& p) const {
        if (!p.vars.empty() && p.vars.back() >= m_)
            throw DegreeMismatch("payload indexes variable " + std::to_string(p.vars.back()) +
                                 ", ring degree is " + std::to_string(m_));
    }

    static void merge_vars(const Payload& a, const Payload& b, Payload& out) {
        out.vars.clear();
        size_t i = 0, j = 0;
        while (i < a.vars.size() || j < b.vars.size()) {
            if (j == b.vars.size() || (i < a.vars.size() && a.vars[i] < b.vars[j]))
                out.vars.push_back(a.vars[i++]);
            else if (i == a.vars.size() || b.vars[j] < a.vars[i])
                out.vars.push_back(b.vars[j++]);
            else {
                out.vars.push_back(a.vars[i]);
                ++i;
                ++j;
            }
        }
    }

    static void scatter_add(const Payload& src, Payload& out, double w) {
        size_t k = out.vars.size();
        std::vector<int> slot(src.vars.size());
        for (size_t i = 0; i < src.vars.size(); ++i) slot[i] = out.slot_of(src.vars[i]);
        for (size_t i = 0; i < src.vars.size(); ++i)
            out.s[static_cast<size_t>(slot[i])] += w * src.s[i];
        size_t sk = src.vars.size();
        for (size_t i = 0; i < sk; ++i)
            for (size_t j = i; j < sk; ++j)
                out.q[Payload::tri_index(static_cast<size_t>(slot[i]),
                                         static_cast<size_t>(slot[j]), k)] +=
                    w * src.q[Payload::tri_index(i, j, sk)];
    }

    static void scatter_quad(const Payload& src, Payload& out, double w) {
        size_t k = out.vars.size();
        size_t sk = src.vars.size();
        for (size_t i = 0; i < sk; ++i) {
            size_t oi = static_cast<size_t>(out.slot_of(src.vars[i]));
            for (size_t j = i; j < sk; ++j) {
                size_t oj = static_cast<size_t>(out.slot_of(src.vars[j]));
                out.q[Payload::tri_index(oi, oj, k)] += w * src.q[Payload::tri_index(i, j, sk)];
            }
        }
    }

    uint32_t m_;
    double eps_;
};

} // namespace ringview
