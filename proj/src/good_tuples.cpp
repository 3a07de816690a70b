#include "primechain/good_tuples.hpp"

#include <algorithm>

namespace primechain {

GoodCheck verify_good(std::span<const u64> candidate) {
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        u64 p = candidate[i];
        if (p <= 3)
            return {false, "entry " + std::to_string(p) + " is not larger than 3"};
        if (!is_prime(p))
            return {false, "entry " + std::to_string(p) + " is not prime"};
        if (i > 0 && candidate[i] <= candidate[i - 1])
            return {false, "entries not strictly increasing at " + std::to_string(p)};
    }
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        for (std::size_t j = i + 1; j < candidate.size(); ++j) {
            u64 pi = candidate[i], pj = candidate[j];
            u64 s = checked_add(checked_add(pi, pj), 1);
            if (!is_prime(s))
                return {false, std::to_string(pi) + " + " + std::to_string(pj) +
                                   " + 1 = " + std::to_string(s) + " is not prime"};
            if ((pj + 2) % pi == 0)
                return {false, std::to_string(pi) + " divides " +
                                   std::to_string(pj) + " + 2"};
        }
    }
    return {true, ""};
}

GoodTuple::GoodTuple(std::vector<u64> primes) : primes_(std::move(primes)) {
    GoodCheck check = verify_good(primes_);
    if (!check) throw input_error("GoodTuple: " + check.violation);
}

OffsetTuple extension_offsets(const GoodTuple& g) {
    std::vector<u64> offs{0, 2};
    for (u64 p : g) offs.push_back(checked_add(p, 1));
    OffsetTuple t(std::move(offs));
    if (!is_admissible(t).admissible)
        throw std::logic_error("extension_offsets: inadmissible extension, "
                               "good-tuple state is corrupted");
    return t;
}

ExtendOutcome extend(const GoodTuple& g, u64 search_bound) {
    u64 lo = g.empty() ? 4 : checked_add(g.back(), 1);
    if (search_bound < lo)
        throw input_error("extend: search_bound must exceed the last entry");
    OffsetTuple pattern = extension_offsets(g);
    WitnessCertificate cert =
        find_witnesses(pattern, lo, checked_add(search_bound, 1), 1);
    ExtendOutcome out;
    out.searched_up_to = cert.searched_up_to;
    if (cert.witnesses.empty()) return out;
    u64 n = cert.witnesses.front();
    std::vector<u64> next(g.begin(), g.end());
    next.push_back(n);
    out.extended = GoodTuple(std::move(next));  // re-validates the invariant
    out.witness = n;
    return out;
}

ChainResult build_chain(u64 seed, std::size_t target_len, u64 search_bound) {
    if (seed <= 3 || !is_prime(seed))
        throw input_error("build_chain: seed must be a prime larger than 3");
    if (target_len == 0)
        throw input_error("build_chain: target_len must be >= 1");
    ChainResult result;
    result.bound = search_bound;
    result.tuple = GoodTuple({seed});
    while (result.tuple.size() < target_len) {
        ExtendOutcome step = extend(result.tuple, search_bound);
        if (!step.found()) break;
        result.tuple = *step.extended;
        result.step_witnesses.push_back(step.witness);
    }
    result.reached_target = result.tuple.size() == target_len;
    return result;
}

} // namespace primechain
