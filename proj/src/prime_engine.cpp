#include "primechain/prime_engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace primechain {

unsigned worker_count() {
    static const unsigned cached = [] {
        if (const char* env = std::getenv("PRIMECHAIN_THREADS")) {
            long v = std::strtol(env, nullptr, 10);
            if (v >= 1) return static_cast<unsigned>(v);
        }
        unsigned hw = std::thread::hardware_concurrency();
        return hw ? hw : 1u;
    }();
    return cached;
}

void run_chunks(std::size_t chunk_count, const std::function<void(std::size_t)>& fn) {
    unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(worker_count(), chunk_count));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunk_count; ++c) fn(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= chunk_count) break;
            fn(c);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
}

double pairwise_sum(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    if (xs.size() == 1) return xs[0];
    std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

// ---------------------------------------------------------------------------
// Segmented sieve

namespace {

u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

std::vector<u64> simple_sieve(u64 limit) {
    std::vector<u64> primes;
    if (limit < 2) return primes;
    std::vector<char> comp(static_cast<std::size_t>(limit) + 1, 0);
    for (u64 p = 2; p <= limit; ++p) {
        if (comp[p]) continue;
        primes.push_back(p);
        for (u64 m = p * p; m <= limit; m += p) comp[m] = 1;
    }
    return primes;
}

} // namespace

PrimeRange::PrimeRange(u64 lo, u64 hi, std::vector<u64> bits)
    : lo_(lo), hi_(hi), bits_(std::move(bits)) {}

u64 PrimeRange::count() const {
    u64 n = 0;
    for (u64 w : bits_) n += std::popcount(w);
    return n;
}

std::vector<u64> PrimeRange::to_vector() const {
    std::vector<u64> out;
    out.reserve(count());
    for (u64 n = lo_; n < hi_; ++n)
        if (contains(n)) out.push_back(n);
    return out;
}

PrimeRange sieve_range(u64 lo, u64 hi, const SieveOptions& opt) {
    if (hi <= lo) throw input_error("sieve_range: hi must exceed lo");
    if (hi > (u64(1) << 62))
        throw input_error("sieve_range: hi beyond 2^62 is not supported");
    u64 span = hi - lo;
    u64 root = isqrt_u64(hi - 1);
    std::size_t need = static_cast<std::size_t>(span / 8) +
                       static_cast<std::size_t>(root) + 64;
    if (need > opt.memory_budget)
        throw resource_error("sieve_range: [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + ") exceeds the memory budget");

    std::vector<u64> base = simple_sieve(root);
    std::vector<u64> bits((span + 63) / 64, ~u64(0));
    auto clear_bit = [&](u64 idx) { bits[idx >> 6] &= ~(u64(1) << (idx & 63)); };

    u64 seg = std::max<u64>(opt.segment_size, 64);
    for (u64 s = lo; s < hi; s += seg) {
        u64 e = (hi - s < seg) ? hi : s + seg;
        for (u64 p : base) {
            if (p > (e - 1) / p) break;  // p*p >= e
            u64 start = std::max(p * p, ((s + p - 1) / p) * p);
            for (u64 m = start; m < e; m += p) clear_bit(m - lo);
        }
    }
    for (u64 n = lo; n < std::min<u64>(hi, 2); ++n) clear_bit(n - lo);
    u64 tail = span & 63;
    if (tail) bits.back() &= (u64(1) << tail) - 1;
    return PrimeRange(lo, hi, std::move(bits));
}

// ---------------------------------------------------------------------------
// Deterministic strong-pseudoprime test

namespace {

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<__uint128_t>(a) * b % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool strong_probable_prime(u64 n, u64 a) {
    a %= n;
    if (a == 0) return true;
    u64 d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

struct WitnessTier {
    u64 below;
    std::initializer_list<u64> bases;
};

// Verified deterministic witness sets; the last tier covers all of u64.
constexpr u64 kNoLimit = ~u64(0);
const WitnessTier kTiers[] = {
    {2047ull, {2}},
    {1373653ull, {2, 3}},
    {9080191ull, {31, 73}},
    {25326001ull, {2, 3, 5}},
    {3215031751ull, {2, 3, 5, 7}},
    {4759123141ull, {2, 7, 61}},
    {1122004669633ull, {2, 13, 23, 1662803}},
    {2152302898747ull, {2, 3, 5, 7, 11}},
    {3474749660383ull, {2, 3, 5, 7, 11, 13}},
    {341550071728321ull, {2, 3, 5, 7, 11, 13, 17}},
    {3825123056546413051ull, {2, 3, 5, 7, 11, 13, 17, 19, 23}},
    {kNoLimit, {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}},
};

} // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                  29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    for (const auto& tier : kTiers) {
        if (n < tier.below || tier.below == kNoLimit) {
            for (u64 a : tier.bases)
                if (!strong_probable_prime(n, a)) return false;
            return true;
        }
    }
    return false;  // unreachable
}

// ---------------------------------------------------------------------------
// Möbius

std::span<const u64> small_primes(u64 bound) {
    // Fixed table above cbrt(2^64); never reallocated, so spans stay valid
    // across threads.
    constexpr u64 kTableLimit = 4194304;
    static const std::vector<u64> all = simple_sieve(kTableLimit);
    if (bound > kTableLimit)
        throw input_error("small_primes: bound exceeds the fixed table");
    auto end = std::upper_bound(all.begin(), all.end(), bound);
    return {all.data(), static_cast<std::size_t>(end - all.begin())};
}

int mobius(u64 n) {
    if (n == 0) throw input_error("mobius: n must be >= 1");
    int factors = 0;
    u64 m = n;
    u64 cbrt = static_cast<u64>(std::cbrt(static_cast<double>(n))) + 2;
    for (u64 p : small_primes(cbrt)) {
        if (p > m / p) break;  // p*p > m: cofactor is 1 or prime
        if (m % p == 0) {
            m /= p;
            if (m % p == 0) return 0;
            ++factors;
        }
    }
    if (m > 1) {
        if (is_prime(m)) {
            ++factors;
        } else {
            // All factors of m exceed cbrt(n), so m = p^2 or m = p*q.
            u64 r = isqrt_u64(m);
            if (r * r == m) return 0;
            factors += 2;
        }
    }
    return (factors & 1) ? -1 : 1;
}

// ---------------------------------------------------------------------------
// Witness search

bool WitnessCertificate::verify() const {
    u64 prev = 0;
    bool first = true;
    for (u64 n : witnesses) {
        if (!first && n <= prev) return false;
        if (n > searched_up_to) return false;
        for (u64 h : offsets)
            if (!is_prime(checked_add(n, h))) return false;
        prev = n;
        first = false;
    }
    return true;
}

namespace {

bool all_offsets_prime(u64 n, const OffsetTuple& offsets) {
    for (u64 h : offsets)
        if (!is_prime(n + h)) return false;
    return true;
}

} // namespace

WitnessCertificate find_witnesses(const OffsetTuple& offsets, u64 lo, u64 hi,
                                  std::size_t max_count,
                                  std::optional<CrtClass> cls) {
    if (hi <= lo) throw input_error("find_witnesses: hi must exceed lo");
    if (max_count == 0) throw input_error("find_witnesses: max_count must be positive");
    checked_add(hi - 1, offsets.back());

    // Candidates form an arithmetic progression: the given congruence class,
    // or the parity forced by the offset pattern. Mixed-parity tuples admit
    // only the sporadic n with some n + h = 2.
    u64 stride = 0, start = 0;
    std::vector<u64> sporadic;
    if (cls) {
        if (cls->W == 0) throw input_error("find_witnesses: W must be positive");
        stride = cls->W;
        start = lo + (cls->b % stride + stride - lo % stride) % stride;
    } else {
        bool same_parity = true;
        for (u64 h : offsets)
            if (((h ^ offsets.front()) & 1) != 0) same_parity = false;
        for (u64 h : offsets)
            if (h <= 2 && 2 - h >= lo && 2 - h < hi) sporadic.push_back(2 - h);
        if (same_parity) {
            stride = 2;
            u64 parity = (offsets.front() & 1) ^ 1;  // n + h must be odd
            start = lo + (parity + 2 - lo % 2) % 2;
        }
    }
    std::sort(sporadic.begin(), sporadic.end());
    sporadic.erase(std::unique(sporadic.begin(), sporadic.end()), sporadic.end());

    std::vector<u64> found;
    for (u64 n : sporadic)
        if ((stride == 0 || n < start || (n - start) % stride != 0) &&
            all_offsets_prime(n, offsets))
            found.push_back(n);

    u64 searched_up_to = hi - 1;
    if (stride != 0 && start < hi) {
        u64 total = (hi - 1 - start) / stride + 1;
        constexpr u64 chunk = 1 << 14;
        std::size_t chunks = static_cast<std::size_t>((total + chunk - 1) / chunk);
        std::vector<std::vector<u64>> per_chunk(chunks);
        // Waves of chunks, left to right: once a fully-scanned prefix holds
        // max_count witnesses, anything further right is not needed.
        std::size_t collected = 0;
        std::size_t wave = std::max<std::size_t>(worker_count(), 1);
        for (std::size_t w0 = 0; w0 < chunks && collected < max_count; w0 += wave) {
            std::size_t w1 = std::min(chunks, w0 + wave);
            run_chunks(w1 - w0, [&](std::size_t rel) {
                std::size_t c = w0 + rel;
                auto& out = per_chunk[c];
                u64 i0 = static_cast<u64>(c) * chunk;
                u64 i1 = std::min<u64>(total, i0 + chunk);
                for (u64 i = i0; i < i1 && out.size() < max_count; ++i) {
                    u64 n = start + i * stride;
                    if (all_offsets_prime(n, offsets)) out.push_back(n);
                }
            });
            for (std::size_t c = w0; c < w1; ++c) collected += per_chunk[c].size();
        }
        for (auto& v : per_chunk)
            found.insert(found.end(), v.begin(), v.end());
    }
    std::sort(found.begin(), found.end());
    if (found.size() > max_count) found.resize(max_count);
    if (found.size() == max_count && !found.empty()) searched_up_to = found.back();
    return WitnessCertificate{offsets, std::move(found), searched_up_to};
}

} // namespace primechain
