#pragma once

#include <optional>
#include <span>
#include <vector>

#include "primechain/core.hpp"

namespace primechain {

// A finite increasing tuple (h_1, ..., h_k) of shift offsets.
class OffsetTuple {
public:
    OffsetTuple() = default;
    // Validates: nonempty, strictly increasing, entries >= 0.
    explicit OffsetTuple(std::vector<u64> offsets);

    std::size_t size() const { return offsets_.size(); }
    u64 operator[](std::size_t i) const { return offsets_[i]; }
    u64 front() const { return offsets_.front(); }
    u64 back() const { return offsets_.back(); }
    std::span<const u64> values() const { return offsets_; }
    auto begin() const { return offsets_.begin(); }
    auto end() const { return offsets_.end(); }

    // Prefix (h_1, ..., h_len).
    OffsetTuple prefix(std::size_t len) const;
    // Tuple shifted by a constant; throws input_error on under/overflow.
    OffsetTuple shifted(i64 c) const;

    bool operator==(const OffsetTuple&) const = default;

private:
    std::vector<u64> offsets_;
};

// Residues mod p hit by the tuple, ascending.
std::vector<u64> residue_coverage(const OffsetTuple& t, u64 p);

struct PrimeCoverage {
    u64 prime = 0;
    u64 covered_count = 0;
    // Smallest residue class mod prime avoided by the tuple, when one exists.
    std::optional<u64> avoided;
    // When all classes are covered: for each residue r mod prime, one offset
    // h with h = r (mod prime).
    std::vector<u64> covering_offsets;
};

struct AdmissibilityReport {
    bool admissible = false;
    std::vector<PrimeCoverage> per_prime;  // one entry per prime p <= k
};

// Checks exactly the primes p <= k; k offsets cannot cover p > k classes.
AdmissibilityReport is_admissible(const OffsetTuple& t);

// Residue class b (W) with gcd(b + h, W) = 1 for every offset h.
struct CrtClass {
    u64 W = 1;
    u64 b = 0;
};

// W = product of primes <= z; b the CRT combination of, for each p | W,
// the class -(a_p) mod p where a_p is the smallest residue avoided by t.
// Throws infeasible_error naming p if t covers all classes mod some p <= z.
CrtClass primitive_class(const OffsetTuple& t, u64 z);

// First `count` odd squares >= min_value; always admissible.
OffsetTuple odd_square_offsets(std::size_t count, u64 min_value = 0);

} // namespace primechain
