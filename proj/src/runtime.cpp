#include "mstsim/runtime.hpp"

#include <algorithm>
#include <stdexcept>

namespace mstsim {

CostTable CostTable::defaults() {
    CostTable t;
    for (const char* name : {"sort", "broadcast", "duplicate", "pram_simulation", "predecessor",
                             "index_in_sets", "prefix_sum", "sequence_insertion", "dim_reduce",
                             "spanner_build"})
        t.cost[name] = 1;
    t.cost["leader_compression_round"] = 3;
    return t;
}

int CostTable::at(const std::string& primitive) const {
    auto it = cost.find(primitive);
    if (it == cost.end()) throw std::invalid_argument("unknown primitive: " + primitive);
    if (it->second < 1) throw std::invalid_argument("primitive cost must be >= 1: " + primitive);
    return it->second;
}

PartitionCheck strict_partition_check(long long data_size_words, long long record_words,
                                      long long machine_memory_s) {
    PartitionCheck c;
    if (machine_memory_s <= 0) throw std::invalid_argument("machine memory must be positive");
    if (record_words > machine_memory_s) {
        c.ok = false;
        c.detail = "record of " + std::to_string(record_words) + " words exceeds machine memory " +
                   std::to_string(machine_memory_s);
        return c;
    }
    c.machines = std::max(1ll, (data_size_words + machine_memory_s - 1) / machine_memory_s);
    c.chunk_words = (data_size_words + c.machines - 1) / c.machines;
    return c;
}

RoundLedger RoundLedger::sub() const {
    RoundLedger s(table_, strict_, machine_s_);
    s.stage_ = stage_;
    return s;
}

void RoundLedger::charge(const std::string& primitive, long long data_size_words,
                         long long record_words) {
    rounds_ += table_.at(primitive);
    total_space_ = std::max(total_space_, data_size_words);
    ++per_primitive_[primitive];
    if (strict_) {
        PartitionCheck c = strict_partition_check(data_size_words, record_words, machine_s_);
        if (!c.ok)
            violations_.push_back({stage_ + "/" + primitive, c.detail});
        else
            peak_machine_ = std::max(peak_machine_, c.chunk_words);
    } else {
        peak_machine_ = std::max(peak_machine_, record_words);
    }
}

void RoundLedger::merge_parallel(const std::vector<RoundLedger>& subs) {
    long long max_rounds = 0;
    long long space_sum = 0;
    for (const RoundLedger& s : subs) {
        max_rounds = std::max(max_rounds, s.rounds_);
        space_sum += s.total_space_;
        peak_machine_ = std::max(peak_machine_, s.peak_machine_);
        for (const auto& kv : s.per_primitive_) per_primitive_[kv.first] += kv.second;
        violations_.insert(violations_.end(), s.violations_.begin(), s.violations_.end());
    }
    rounds_ += max_rounds;
    total_space_ = std::max(total_space_, space_sum);
}

int doubling_iterations(int levels) {
    if (levels < 1) throw std::invalid_argument("hierarchy needs at least one level");
    int r = 0;
    while ((1 << r) < levels) ++r;
    return r;
}

RoundsBreakdown rounds_formula(const AlgorithmConfig& config, int n, int d) {
    int g = alpha_g(config.alpha);
    int H = top_checkpoint_H(config, delta_for_n(n), d);
    int levels = H << g;
    int R = doubling_iterations(levels);
    long long h = config.h;

    RoundsBreakdown b;
    b.normalize = 2;                 // sort + broadcast
    b.spanner = 4;                   // duplicate, parallel level builds, duplicate + sort
    b.part1 = 3 * h + 3;             // grouping sort, h compression rounds, mark, merge
    b.part2 = g * (3 * h + 3);       // one wave per exponent-valuation class
    b.part3 = 3 * h + 2;             // fresh leaders, h collected rounds, closing star
    b.tour = 1 + 3ll * R;            // base tours, then sort+prefix_sum+insert per doubling
    b.shortcut = 2;                  // sort + prefix_sum
    return b;
}

}  // namespace mstsim
