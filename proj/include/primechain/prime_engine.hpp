#pragma once

#include <optional>
#include <span>
#include <vector>

#include "primechain/admissibility.hpp"
#include "primechain/core.hpp"

namespace primechain {

struct SieveOptions {
    // Segment width in integers; default fits the table in a typical L2.
    std::size_t segment_size = 1u << 20;
    // Hard cap on bytes allocated for the primality table plus base sieve.
    std::size_t memory_budget = std::size_t(1) << 30;
};

// Packed primality table for [lo, hi): bit i is set iff lo + i is prime.
class PrimeRange {
public:
    PrimeRange(u64 lo, u64 hi, std::vector<u64> bits);

    u64 lo() const { return lo_; }
    u64 hi() const { return hi_; }

    // True iff n is in [lo, hi) and prime.
    bool contains(u64 n) const {
        if (n < lo_ || n >= hi_) return false;
        u64 i = n - lo_;
        return (bits_[i >> 6] >> (i & 63)) & 1;
    }

    u64 count() const;
    std::vector<u64> to_vector() const;

    const std::vector<u64>& words() const { return bits_; }

private:
    u64 lo_, hi_;
    std::vector<u64> bits_;
};

PrimeRange sieve_range(u64 lo, u64 hi, const SieveOptions& opt = {});

// Deterministic for the full 64-bit range.
bool is_prime(u64 n);

// Möbius function; requires n >= 1.
int mobius(u64 n);

// Evidence that a tuple of shift offsets hits simultaneous primes: every
// listed n has n + h prime for all offsets h.
struct WitnessCertificate {
    OffsetTuple offsets;
    std::vector<u64> witnesses;  // strictly increasing
    u64 searched_up_to = 0;      // all witnesses <= this

    bool verify() const;  // rechecks every claim with is_prime
};

// All n in [lo, hi) (at most max_count, smallest first) with n + h prime for
// every offset h, optionally restricted to n = cls.b (mod cls.W). An empty
// witness list is a normal outcome.
WitnessCertificate find_witnesses(const OffsetTuple& offsets, u64 lo, u64 hi,
                                  std::size_t max_count,
                                  std::optional<CrtClass> cls = std::nullopt);

// Primes p <= bound, ascending. Cached helper shared by mobius and the
// divisor enumeration in the sieve module.
std::span<const u64> small_primes(u64 bound);

} // namespace primechain
