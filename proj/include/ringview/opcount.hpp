#pragma once

#include <cstdint>

namespace ringview {

// Named operation counters used by the scaling checks: stored entries read
// or written, payload multiplications, payload additions.
struct OpCounters {
    uint64_t entries_touched = 0;
    uint64_t payload_mults = 0;
    uint64_t payload_adds = 0;

    void reset() { *this = OpCounters{}; }

    OpCounters operator-(const OpCounters& o) const {
        return {entries_touched - o.entries_touched, payload_mults - o.payload_mults,
                payload_adds - o.payload_adds};
    }
};

namespace opcount {

inline thread_local OpCounters* current = nullptr;

// Arms (or disarms, with nullptr) the thread-local counter sink for a scope.
struct Scope {
    explicit Scope(OpCounters* c) : prev_(current) { current = c; }
    ~Scope() { current = prev_; }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

private:
    OpCounters* prev_;
};

inline void touch(uint64_t n = 1) {
    if (current) current->entries_touched += n;
}
inline void mult(uint64_t n = 1) {
    if (current) current->payload_mults += n;
}
inline void add(uint64_t n = 1) {
    if (current) current->payload_adds += n;
}

} // namespace opcount
} // namespace ringview
