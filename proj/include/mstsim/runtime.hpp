#pragma once

#include <map>
#include <string>
#include <vector>

#include "mstsim/geometry.hpp"

namespace mstsim {

// Round costs per bulk primitive. Every primitive is a constant number of rounds; a
// leader-compression round is three (bit broadcast, notify, repoint).
struct CostTable {
    std::map<std::string, int> cost;

    static CostTable defaults();
    int at(const std::string& primitive) const;  // throws std::invalid_argument if unknown
};

struct MemoryViolation {
    std::string stage;
    std::string detail;
};

// Splits a bulk operand into machine chunks of at most s words; a single logical record
// larger than s can never fit and is reported as a violation.
struct PartitionCheck {
    bool ok = true;
    long long machines = 1;
    long long chunk_words = 0;
    std::string detail;
};
PartitionCheck strict_partition_check(long long data_size_words, long long record_words,
                                      long long machine_memory_s);

class RoundLedger {
public:
    RoundLedger() : table_(CostTable::defaults()) {}
    explicit RoundLedger(CostTable table, bool strict = false, long long machine_memory_s = 0)
        : table_(std::move(table)), strict_(strict), machine_s_(machine_memory_s) {}

    // A sub-ledger with the same cost table and strictness, used inside parallel groups.
    RoundLedger sub() const;

    void set_stage(const std::string& name) { stage_ = name; }

    // rounds += cost(primitive); space peaks at the operand size.
    void charge(const std::string& primitive, long long data_size_words,
                long long record_words = 1);

    // Concurrent stages: rounds advance by the slowest member, space by the sum.
    void merge_parallel(const std::vector<RoundLedger>& subs);

    long long rounds() const { return rounds_; }
    long long total_space_words() const { return total_space_; }
    long long peak_machine_words() const { return peak_machine_; }
    const std::map<std::string, long long>& per_primitive() const { return per_primitive_; }
    const std::vector<MemoryViolation>& violations() const { return violations_; }
    bool strict() const { return strict_; }

private:
    CostTable table_;
    bool strict_ = false;
    long long machine_s_ = 0;
    std::string stage_ = "run";
    long long rounds_ = 0;
    long long total_space_ = 0;
    long long peak_machine_ = 0;
    std::map<std::string, long long> per_primitive_;
    std::vector<MemoryViolation> violations_;
};

// Closed form of the rounds the driver charges for a full (non-degenerate) run, broken
// down by phase. Kept separate from the execution-time charges so the two can be
// compared as an accounting cross-check.
struct RoundsBreakdown {
    long long normalize = 0;
    long long spanner = 0;
    long long part1 = 0;
    long long part2 = 0;   // scales with the wave count g
    long long part3 = 0;
    long long tour = 0;    // 1 + 3R, R = doubling iterations over the padded level count
    long long shortcut = 0;

    long long total() const {
        return normalize + spanner + part1 + part2 + part3 + tour + shortcut;
    }
};

RoundsBreakdown rounds_formula(const AlgorithmConfig& config, int n, int d);

// Doubling iterations for a hierarchy of `levels` levels (padded to a power of 2).
int doubling_iterations(int levels);

}  // namespace mstsim
