#pragma once

#include <map>
#include <vector>

#include "primechain/core.hpp"
#include "primechain/good_tuples.hpp"
#include "primechain/maynard_sieve.hpp"
#include "primechain/prime_engine.hpp"

namespace primechain {

// Measures, under a fixed empirical measure nu, of the per-cell events
// "n + h_cell is prime" and of their finite intersections.
class EventTable {
public:
    EventTable(EmpiricalMeasure nu, SieveGrid grid);

    const SieveGrid& grid() const { return grid_; }
    const EmpiricalMeasure& measure() const { return nu_; }
    u64 N() const { return nu_.N; }

    double single(Cell c) const;
    // Stored for within-block pairs; any pair via intersection().
    double pair_measure(Cell a, Cell b) const;
    // nu of the joint event over an arbitrary cell set.
    double intersection(std::span<const Cell> cells) const;
    // Exact nu of the union of one block's events.
    double block_union(std::size_t block) const;

private:
    SieveGrid grid_;
    EmpiricalMeasure nu_;
    std::vector<std::vector<char>> flags_;  // [cell_index][support index]
    std::vector<double> singles_;
    std::map<std::pair<std::size_t, std::size_t>, double> pairs_;
};

EventTable pushforward(const EmpiricalMeasure& nu, const SieveGrid& grid);

struct BlockBound {
    double bound = 0;          // (sum singles)^2 / (sum singles + ordered pairs)
    double exact_union = 0;    // direct union measure, always >= bound
    double first_moment = 0;
    double second_moment = 0;  // first moment + ordered pair sum
};
BlockBound block_lower_bound(const EventTable& table, std::size_t block);

struct GreedyStrategy {
    double min_measure = 0.0;  // extensions must exceed this
};

// Greedy pigeonhole on the largest-N table: pick cells from strictly
// increasing blocks, each maximising the running intersection measure
// (ties resolved towards the smallest block, then slot). Stops early when no
// extension keeps the measure positive.
std::vector<Cell> select_chain(const std::vector<EventTable>& tables,
                               std::size_t depth, const GreedyStrategy& s = {});

struct SumsetEntry {
    std::size_t i = 0, j = 0;  // 1-based positions, i < j
    u64 sum = 0;
    bool prime = false;
};

// Increasing a and b with a_i + b_j prime whenever i < j. b_1 carries no
// constraint and is fixed at 1; b holds the constrained entries b_2, b_3, ...
struct HalfSumset {
    std::vector<u64> a;
    u64 b1 = 1;
    std::vector<u64> b;
    u64 bound = 0;
    std::vector<SumsetEntry> matrix;

    bool verify() const;
};

// Greedy smallest-next-b construction; a partial b list is a normal outcome
// when the bound runs out.
HalfSumset build_half_sumset(const OffsetTuple& a, std::size_t count_b, u64 bound);

struct PipelineOptions {
    u64 z = 7;
    std::size_t witnesses_per_prefix = 1;
    MaynardSmoothing smoothing;
};

struct ChainCertificate {
    std::vector<u64> pool;              // offsets fed to the grid
    std::vector<std::size_t> shape;
    std::vector<double> thetas;
    u64 z = 7;
    std::vector<u64> schedule;          // N values that produced tables
    std::vector<Cell> chain;
    std::vector<u64> chain_offsets;
    // prefix_measures[t][r]: intersection measure of the first r+1 chain
    // cells on table t (tables in schedule order).
    std::vector<std::vector<double>> prefix_measures;
    std::vector<WitnessCertificate> prefix_witnesses;

    bool verify() const;
};

// Full run: sieve measure -> pushforward -> greedy chain -> witnesses for
// every chain prefix, searched inside the largest window on the same
// residue class that made the measures positive.
ChainCertificate run_pipeline(const OffsetTuple& pool,
                              const std::vector<std::size_t>& shape,
                              const std::vector<double>& thetas,
                              std::vector<u64> N_schedule, std::size_t depth,
                              const PipelineOptions& opts = {});

} // namespace primechain
