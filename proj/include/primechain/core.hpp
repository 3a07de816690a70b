#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace primechain {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// Thrown when caller-supplied values violate an operation's preconditions
// (overflow, malformed tuples, bad parameters).
class input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a request exceeds the configured memory budget.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when no residue class exists for a requested modulus; carries the
// prime at which the obstruction occurs.
class infeasible_error : public std::runtime_error {
public:
    infeasible_error(const std::string& msg, u64 prime)
        : std::runtime_error(msg), prime_(prime) {}
    u64 prime() const { return prime_; }

private:
    u64 prime_;
};

// Thrown when a cutoff function cannot be assembled (support budget
// exceeded, incompatible shapes).
class construction_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when every sieve weight vanishes and no probability measure exists.
class degenerate_measure_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline u64 checked_add(u64 a, u64 b) {
    u64 r;
    if (__builtin_add_overflow(a, b, &r))
        throw input_error("64-bit overflow in addition: " + std::to_string(a) +
                          " + " + std::to_string(b));
    return r;
}

inline u64 checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw input_error("64-bit overflow in multiplication: " +
                          std::to_string(a) + " * " + std::to_string(b));
    return r;
}

// Worker cap: PRIMECHAIN_THREADS if set, else hardware concurrency.
unsigned worker_count();

// Runs fn(c) for every chunk index c in [0, chunk_count), distributing
// chunks over up to worker_count() threads. Each chunk must write only its
// own output slot; results are then independent of the thread count.
void run_chunks(std::size_t chunk_count, const std::function<void(std::size_t)>& fn);

// Sum with a fixed pairwise reduction tree. The result depends only on the
// order of xs, never on threading or chunking.
double pairwise_sum(std::span<const double> xs);

// Fixed chunk width used by all big reductions; parallel runs partition by
// this constant so totals are bit-identical for any worker count.
inline constexpr std::size_t kReductionChunk = 4096;

} // namespace primechain
