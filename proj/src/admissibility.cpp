#include "primechain/admissibility.hpp"

#include <algorithm>
#include <numeric>

#include "primechain/prime_engine.hpp"

namespace primechain {

OffsetTuple::OffsetTuple(std::vector<u64> offsets) : offsets_(std::move(offsets)) {
    if (offsets_.empty())
        throw input_error("OffsetTuple: at least one offset required");
    for (std::size_t i = 1; i < offsets_.size(); ++i)
        if (offsets_[i] <= offsets_[i - 1])
            throw input_error("OffsetTuple: offsets must be strictly increasing");
}

OffsetTuple OffsetTuple::prefix(std::size_t len) const {
    if (len == 0 || len > offsets_.size())
        throw input_error("OffsetTuple::prefix: bad length");
    return OffsetTuple(std::vector<u64>(offsets_.begin(), offsets_.begin() + len));
}

OffsetTuple OffsetTuple::shifted(i64 c) const {
    std::vector<u64> out;
    out.reserve(offsets_.size());
    for (u64 h : offsets_) {
        if (c >= 0) {
            out.push_back(checked_add(h, static_cast<u64>(c)));
        } else {
            u64 d = static_cast<u64>(-c);
            if (h < d) throw input_error("OffsetTuple::shifted: offset would go negative");
            out.push_back(h - d);
        }
    }
    return OffsetTuple(std::move(out));
}

std::vector<u64> residue_coverage(const OffsetTuple& t, u64 p) {
    if (p < 2 || !is_prime(p))
        throw input_error("residue_coverage: modulus must be prime");
    std::vector<char> hit(p, 0);
    for (u64 h : t) hit[h % p] = 1;
    std::vector<u64> out;
    for (u64 r = 0; r < p; ++r)
        if (hit[r]) out.push_back(r);
    return out;
}

namespace {

PrimeCoverage coverage_at(const OffsetTuple& t, u64 p) {
    PrimeCoverage cov;
    cov.prime = p;
    std::vector<u64> witness(p, 0);
    std::vector<char> hit(p, 0);
    for (u64 h : t) {
        u64 r = h % p;
        if (!hit[r]) {
            hit[r] = 1;
            witness[r] = h;
            ++cov.covered_count;
        }
    }
    if (cov.covered_count < p) {
        for (u64 r = 0; r < p; ++r)
            if (!hit[r]) {
                cov.avoided = r;
                break;
            }
    } else {
        cov.covering_offsets = std::move(witness);
    }
    return cov;
}

} // namespace

AdmissibilityReport is_admissible(const OffsetTuple& t) {
    AdmissibilityReport report;
    report.admissible = true;
    u64 k = t.size();
    for (u64 p : small_primes(k)) {
        PrimeCoverage cov = coverage_at(t, p);
        if (!cov.avoided) report.admissible = false;
        report.per_prime.push_back(std::move(cov));
    }
    return report;
}

CrtClass primitive_class(const OffsetTuple& t, u64 z) {
    if (z < 2) throw input_error("primitive_class: z must be >= 2");
    CrtClass cls;  // W = 1, b = 0
    for (u64 p : small_primes(z)) {
        PrimeCoverage cov = coverage_at(t, p);
        if (!cov.avoided)
            throw infeasible_error("primitive_class: tuple covers every class mod " +
                                       std::to_string(p),
                                   p);
        // b = -(avoided class) mod p keeps b + h off 0 mod p for every h.
        u64 target = (p - *cov.avoided) % p;
        // Merge b (W) with target (p); W and p are coprime, so W^{-1} mod p
        // exists (Fermat).
        u64 W = cls.W, b = cls.b;
        u64 newW = checked_mul(W, p);
        u64 inv = 1, base = W % p, e = p - 2;
        while (e) {
            if (e & 1) inv = inv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        u64 delta = ((target + p - b % p) % p) * inv % p;
        cls.b = b + W * delta;
        cls.W = newW;
    }
    return cls;
}

OffsetTuple odd_square_offsets(std::size_t count, u64 min_value) {
    if (count == 0) throw input_error("odd_square_offsets: count must be >= 1");
    std::vector<u64> out;
    out.reserve(count);
    for (u64 m = 1; out.size() < count; m += 2) {
        u64 sq = checked_mul(m, m);
        if (sq >= min_value) out.push_back(sq);
    }
    return OffsetTuple(std::move(out));
}

} // namespace primechain
