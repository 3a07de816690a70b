#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primechain/admissibility.hpp"
#include "primechain/core.hpp"
#include "primechain/prime_engine.hpp"

namespace primechain {

// Increasing primes p_1 < ... < p_k, all > 3, with p_i + p_j + 1 prime and
// p_i not dividing p_j + 2 for all i < j. The empty tuple is allowed as the
// chain-building seed state.
class GoodTuple {
public:
    GoodTuple() = default;
    // Validates the full invariant; throws input_error with the first
    // violated constraint.
    explicit GoodTuple(std::vector<u64> primes);

    std::size_t size() const { return primes_.size(); }
    bool empty() const { return primes_.empty(); }
    u64 operator[](std::size_t i) const { return primes_[i]; }
    u64 back() const { return primes_.back(); }
    std::span<const u64> values() const { return primes_; }
    auto begin() const { return primes_.begin(); }
    auto end() const { return primes_.end(); }

    bool operator==(const GoodTuple&) const = default;

private:
    std::vector<u64> primes_;
};

struct GoodCheck {
    bool good = false;
    std::string violation;  // first violated constraint, empty when good

    explicit operator bool() const { return good; }
};

// Checks every constraint in a fixed order: entry validity (prime, > 3,
// increasing), then for each pair i < j the sum-shift primality and the
// non-divisibility condition.
GoodCheck verify_good(std::span<const u64> candidate);

// (0, 2, p_1+1, ..., p_k+1); admissible for every valid input, asserted.
OffsetTuple extension_offsets(const GoodTuple& g);

struct ExtendOutcome {
    std::optional<GoodTuple> extended;  // nullopt: nothing found up to the bound
    u64 witness = 0;                    // the appended prime when found
    u64 searched_up_to = 0;

    bool found() const { return extended.has_value(); }
};

// Smallest n in (max(p_k, 3), search_bound] with n, n+2, n+p_i+1 all prime,
// appended as p_{k+1}. Not finding one is a normal outcome.
ExtendOutcome extend(const GoodTuple& g, u64 search_bound);

struct ChainResult {
    GoodTuple tuple;
    std::vector<u64> step_witnesses;  // the prime appended at each step
    u64 bound = 0;
    bool reached_target = false;
};

// Iterates extend from a single seed prime until target_len or not-found.
ChainResult build_chain(u64 seed, std::size_t target_len, u64 search_bound);

} // namespace primechain
