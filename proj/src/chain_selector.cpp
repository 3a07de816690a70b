#include "primechain/chain_selector.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "primechain/tensor_sum.hpp"

namespace primechain {

EventTable::EventTable(EmpiricalMeasure nu, SieveGrid grid)
    : grid_(std::move(grid)), nu_(std::move(nu)) {
    if (nu_.support.empty())
        throw input_error("EventTable: measure has empty support");
    u64 max_h = grid_.flat_offsets().back();
    u64 lo = nu_.support.front();
    u64 hi = checked_add(nu_.support.back(), max_h) + 1;
    PrimeRange table = sieve_range(lo, hi);

    std::size_t k = grid_.cell_count();
    std::size_t count = nu_.support.size();
    flags_.assign(k, std::vector<char>(count));
    for (std::size_t c = 0; c < k; ++c) {
        u64 h = grid_.offset(grid_.cell_at(c));
        for (std::size_t i = 0; i < count; ++i)
            flags_[c][i] = table.contains(nu_.support[i] + h);
    }

    std::vector<double> buf(count);
    auto masked = [&](auto&& keep) {
        for (std::size_t i = 0; i < count; ++i)
            buf[i] = keep(i) ? nu_.weights[i] : 0.0;
        return chunked_sum(buf);
    };
    singles_.resize(k);
    for (std::size_t c = 0; c < k; ++c)
        singles_[c] = masked([&](std::size_t i) { return flags_[c][i] != 0; });
    for (std::size_t i = 0; i < grid_.block_count(); ++i) {
        for (std::size_t j = 0; j < grid_.block_sizes()[i]; ++j) {
            for (std::size_t j2 = j + 1; j2 < grid_.block_sizes()[i]; ++j2) {
                std::size_t c1 = grid_.cell_index(Cell{i, j});
                std::size_t c2 = grid_.cell_index(Cell{i, j2});
                pairs_[{c1, c2}] = masked(
                    [&](std::size_t n) { return flags_[c1][n] && flags_[c2][n]; });
            }
        }
    }
}

double EventTable::single(Cell c) const { return singles_[grid_.cell_index(c)]; }

double EventTable::pair_measure(Cell a, Cell b) const {
    std::size_t c1 = grid_.cell_index(a), c2 = grid_.cell_index(b);
    if (c1 > c2) std::swap(c1, c2);
    if (c1 == c2) throw input_error("EventTable::pair_measure: cells must differ");
    auto it = pairs_.find({c1, c2});
    if (it != pairs_.end()) return it->second;
    Cell cs[2] = {grid_.cell_at(c1), grid_.cell_at(c2)};
    return intersection(cs);
}

double EventTable::intersection(std::span<const Cell> cells) const {
    std::vector<std::size_t> idx;
    idx.reserve(cells.size());
    for (Cell c : cells) idx.push_back(grid_.cell_index(c));
    std::size_t count = nu_.support.size();
    std::vector<double> buf(count);
    for (std::size_t i = 0; i < count; ++i) {
        bool all = true;
        for (std::size_t c : idx)
            if (!flags_[c][i]) {
                all = false;
                break;
            }
        buf[i] = all ? nu_.weights[i] : 0.0;
    }
    return chunked_sum(buf);
}

double EventTable::block_union(std::size_t block) const {
    if (block >= grid_.block_count())
        throw input_error("EventTable::block_union: block out of range");
    std::size_t count = nu_.support.size();
    std::vector<double> buf(count);
    for (std::size_t i = 0; i < count; ++i) {
        bool any = false;
        for (std::size_t j = 0; j < grid_.block_sizes()[block] && !any; ++j)
            any = flags_[grid_.cell_index(Cell{block, j})][i] != 0;
        buf[i] = any ? nu_.weights[i] : 0.0;
    }
    return chunked_sum(buf);
}

EventTable pushforward(const EmpiricalMeasure& nu, const SieveGrid& grid) {
    return EventTable(nu, grid);
}

BlockBound block_lower_bound(const EventTable& table, std::size_t block) {
    const SieveGrid& grid = table.grid();
    if (block >= grid.block_count())
        throw input_error("block_lower_bound: block out of range");
    std::size_t J = grid.block_sizes()[block];
    std::vector<double> singles(J);
    for (std::size_t j = 0; j < J; ++j)
        singles[j] = table.single(Cell{block, j});
    double first = pairwise_sum(singles);

    std::vector<double> pair_terms;
    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t j2 = j + 1; j2 < J; ++j2)
            pair_terms.push_back(table.pair_measure(Cell{block, j}, Cell{block, j2}));
    // Ordered pairs count twice.
    double second = first + 2.0 * pairwise_sum(pair_terms);

    BlockBound out;
    out.first_moment = first;
    out.second_moment = second;
    out.exact_union = table.block_union(block);
    out.bound = second > 0 ? (first * first) / second : 0.0;
    return out;
}

std::vector<Cell> select_chain(const std::vector<EventTable>& tables,
                               std::size_t depth, const GreedyStrategy& s) {
    if (tables.empty()) throw input_error("select_chain: need at least one table");
    if (depth == 0) throw input_error("select_chain: depth must be >= 1");
    const EventTable* primary = &tables.front();
    for (const EventTable& t : tables)
        if (t.N() > primary->N()) primary = &t;

    const SieveGrid& grid = primary->grid();
    const std::size_t I = grid.block_count();
    std::vector<Cell> chain;
    std::size_t next_block = 0;
    while (chain.size() < depth && next_block < I) {
        // Keep enough later blocks free for the picks still to come; when
        // that is impossible the chain ends short anyway, so scan everything.
        std::size_t remaining = depth - chain.size() - 1;
        std::size_t horizon = (I > remaining) ? I - remaining : I;
        if (horizon <= next_block) horizon = I;

        bool have_best = false;
        Cell best{};
        double best_measure = 0;
        std::vector<Cell> probe = chain;
        probe.push_back(Cell{});
        auto scan = [&](std::size_t block_end) {
            for (std::size_t i = next_block; i < block_end; ++i) {
                for (std::size_t j = 0; j < grid.block_sizes()[i]; ++j) {
                    probe.back() = Cell{i, j};
                    double m = primary->intersection(probe);
                    if (m > s.min_measure && (!have_best || m > best_measure)) {
                        have_best = true;
                        best = Cell{i, j};
                        best_measure = m;
                    }
                }
            }
        };
        scan(horizon);
        if (!have_best && horizon < I) scan(I);
        if (!have_best) break;
        chain.push_back(best);
        next_block = best.i + 1;
    }
    return chain;
}

// ---------------------------------------------------------------------------

bool HalfSumset::verify() const {
    if (a.empty()) return false;
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] <= a[i - 1]) return false;
    u64 prev = b1;
    for (u64 v : b) {
        if (v <= prev) return false;
        prev = v;
    }
    for (const SumsetEntry& e : matrix) {
        if (e.i >= e.j || e.i < 1 || e.j < 2) return false;
        if (e.i > a.size() || e.j > b.size() + 1) return false;
        u64 sum = checked_add(a[e.i - 1], b[e.j - 2]);
        if (sum != e.sum || !e.prime || !is_prime(sum)) return false;
    }
    // Every required pair must be present.
    std::size_t expected = 0;
    for (std::size_t j = 2; j <= b.size() + 1; ++j)
        expected += std::min<std::size_t>(a.size(), j - 1);
    return matrix.size() == expected;
}

HalfSumset build_half_sumset(const OffsetTuple& a, std::size_t count_b, u64 bound) {
    if (!is_admissible(a).admissible)
        throw input_error("build_half_sumset: the a-tuple must be admissible");
    if (count_b == 0) throw input_error("build_half_sumset: count_b must be >= 1");

    HalfSumset out;
    out.a.assign(a.begin(), a.end());
    out.bound = bound;
    u64 prev = out.b1;
    for (std::size_t j = 2; j <= count_b + 1; ++j) {
        std::size_t take = std::min<std::size_t>(a.size(), j - 1);
        OffsetTuple prefix = a.prefix(take);
        if (prev + 1 > bound) break;
        WitnessCertificate cert = find_witnesses(prefix, prev + 1, bound + 1, 1);
        if (cert.witnesses.empty()) break;  // bound exhausted: partial list
        u64 bj = cert.witnesses.front();
        out.b.push_back(bj);
        for (std::size_t i = 1; i <= take; ++i)
            out.matrix.push_back(SumsetEntry{i, j, out.a[i - 1] + bj, true});
        prev = bj;
    }
    return out;
}

// ---------------------------------------------------------------------------

bool ChainCertificate::verify() const {
    if (chain.empty() || chain.size() != chain_offsets.size()) return false;
    for (std::size_t r = 1; r < chain.size(); ++r) {
        if (chain[r].i <= chain[r - 1].i) return false;
        if (chain_offsets[r] <= chain_offsets[r - 1]) return false;
    }
    if (prefix_witnesses.size() != chain.size()) return false;
    for (std::size_t r = 0; r < chain.size(); ++r) {
        const WitnessCertificate& cert = prefix_witnesses[r];
        if (cert.witnesses.empty()) return false;
        if (cert.offsets.size() != r + 1) return false;
        for (std::size_t t = 0; t <= r; ++t)
            if (cert.offsets[t] != chain_offsets[t]) return false;
        if (!cert.verify()) return false;
    }
    return true;
}

ChainCertificate run_pipeline(const OffsetTuple& pool,
                              const std::vector<std::size_t>& shape,
                              const std::vector<double>& thetas,
                              std::vector<u64> N_schedule, std::size_t depth,
                              const PipelineOptions& opts) {
    if (depth == 0) throw input_error("run_pipeline: depth must be >= 1");
    if (shape.empty() || shape.size() != thetas.size())
        throw input_error("run_pipeline: shape and thetas must align");
    std::size_t k = 0;
    for (std::size_t J : shape) k += J;
    if (pool.size() < k)
        throw input_error("run_pipeline: offset pool smaller than the grid");
    OffsetTuple used = pool.prefix(k);
    if (!is_admissible(used).admissible)
        throw input_error("run_pipeline: offset pool prefix is not admissible");

    std::vector<std::vector<u64>> block_offsets;
    std::size_t at = 0;
    for (std::size_t J : shape) {
        block_offsets.emplace_back(used.begin() + at, used.begin() + at + J);
        at += J;
    }

    std::vector<TensorSumF> blocks;
    for (std::size_t J : shape) blocks.push_back(maynard_basis(J, opts.smoothing));
    TensorSumF F = scaled_product(blocks, thetas, block_offsets);

    std::sort(N_schedule.begin(), N_schedule.end());
    N_schedule.erase(std::unique(N_schedule.begin(), N_schedule.end()),
                     N_schedule.end());
    if (N_schedule.empty()) throw input_error("run_pipeline: empty N schedule");

    ChainCertificate cert;
    cert.pool.assign(used.begin(), used.end());
    cert.shape = shape;
    cert.thetas = thetas;
    cert.z = opts.z;
    cert.prefix_measures.clear();

    std::vector<EventTable> tables;
    std::vector<SieveConfig> configs;
    for (u64 N : N_schedule) {
        try {
            SieveConfig cfg = SieveConfig::make(F.grid(), N, opts.z);
            EmpiricalMeasure nu = empirical_measure(cfg, F);
            tables.push_back(pushforward(nu, F.grid()));
            configs.push_back(std::move(cfg));
            cert.schedule.push_back(N);
        } catch (const degenerate_measure_error& e) {
            std::cerr << "run_pipeline: skipping N = " << N << ": " << e.what()
                      << "\n";
        }
    }
    if (tables.empty())
        throw degenerate_measure_error(
            "run_pipeline: every N in the schedule produced a degenerate measure");

    cert.chain = select_chain(tables, depth);
    if (cert.chain.empty())
        throw degenerate_measure_error(
            "run_pipeline: no cell has positive measure on the largest table");
    for (Cell c : cert.chain) cert.chain_offsets.push_back(F.grid().offset(c));

    for (std::size_t t = 0; t < tables.size(); ++t) {
        std::vector<double> row;
        for (std::size_t r = 1; r <= cert.chain.size(); ++r)
            row.push_back(tables[t].intersection(
                std::span<const Cell>(cert.chain.data(), r)));
        cert.prefix_measures.push_back(std::move(row));
    }

    // Witnesses live in the largest window, on the same residue class that
    // carries the positive intersection measure.
    const SieveConfig& top = configs.back();
    for (std::size_t r = 1; r <= cert.chain.size(); ++r) {
        OffsetTuple prefix(std::vector<u64>(cert.chain_offsets.begin(),
                                            cert.chain_offsets.begin() + r));
        cert.prefix_witnesses.push_back(
            find_witnesses(prefix, top.N + 1, 2 * top.N + 1,
                           opts.witnesses_per_prefix, top.cls));
    }
    return cert;
}

} // namespace primechain
