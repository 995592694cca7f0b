#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

#include "ringview/errors.hpp"

namespace ringview {

// Integer counting ring (Z).
struct CountRing {
    using Payload = long long;

    Payload zero() const { return 0; }
    Payload one() const { return 1; }
    Payload add(Payload a, Payload b) const { return a + b; }
    Payload mul(Payload a, Payload b) const { return a * b; }
    Payload negate(Payload a) const { return -a; }
    bool is_zero(Payload a) const { return a == 0; }

    std::string encode(Payload p) const { return std::to_string(p); }
    Payload decode(std::string_view s) const {
        char* end = nullptr;
        std::string tmp(s);
        long long v = std::strtoll(tmp.c_str(), &end, 10);
        if (end == tmp.c_str() || *end != '\0') throw ParseError("bad count payload '" + tmp + "'");
        return v;
    }
    size_t payload_weight(Payload) const { return 1; }
};

// Arithmetic ring over doubles for SUM aggregates. The zero test uses a small
// absolute epsilon so inverse-heavy streams do not accumulate dust entries;
// the threshold is configurable.
struct NumericRing {
    using Payload = double;
    double zero_eps = 1e-12;

    Payload zero() const { return 0.0; }
    Payload one() const { return 1.0; }
    Payload add(Payload a, Payload b) const { return a + b; }
    Payload mul(Payload a, Payload b) const { return a * b; }
    Payload negate(Payload a) const { return -a; }
    bool is_zero(Payload a) const { return std::fabs(a) < zero_eps; }

    std::string encode(Payload p) const {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", p);
        return buf;
    }
    Payload decode(std::string_view s) const {
        char* end = nullptr;
        std::string tmp(s);
        double v = std::strtod(tmp.c_str(), &end);
        if (end == tmp.c_str() || *end != '\0')
            throw ParseError("bad numeric payload '" + tmp + "'");
        return v;
    }
    size_t payload_weight(Payload) const { return 1; }
};

} // namespace ringview
