#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "mstsim/geometry.hpp"
#include "mstsim/runtime.hpp"

using namespace mstsim;

TEST_CASE("cost table defaults") {
    CostTable table = CostTable::defaults();
    CHECK(table.at("sort") == 1);
    CHECK(table.at("prefix_sum") == 1);
    CHECK(table.at("sequence_insertion") == 1);
    CHECK(table.at("leader_compression_round") == 3);
    CHECK_THROWS_AS(table.at("teleportation"), std::invalid_argument);
}

TEST_CASE("charging accumulates rounds, counts, and peak space") {
    RoundLedger ledger;
    ledger.charge("sort", 10000);
    CHECK(ledger.rounds() == 1);
    CHECK(ledger.total_space_words() == 10000);
    CHECK(ledger.per_primitive().at("sort") == 1);

    ledger.charge("leader_compression_round", 400);
    CHECK(ledger.rounds() == 4);
    CHECK(ledger.total_space_words() == 10000);

    CHECK_THROWS_AS(ledger.charge("teleportation", 1), std::invalid_argument);
}

TEST_CASE("parallel groups advance by the slowest member") {
    RoundLedger ledger;
    RoundLedger a = ledger.sub();
    a.charge("sort", 100);
    a.charge("sort", 100);
    RoundLedger b = ledger.sub();
    for (int i = 0; i < 5; ++i) b.charge("sort", 200);
    RoundLedger c = ledger.sub();
    c.charge("broadcast", 50);

    ledger.merge_parallel({a, b, c});
    CHECK(ledger.rounds() == 5);
    CHECK(ledger.total_space_words() == 350);  // concurrent stages hold space simultaneously
    CHECK(ledger.per_primitive().at("sort") == 7);
    CHECK(ledger.per_primitive().at("broadcast") == 1);

    ledger.merge_parallel({});
    CHECK(ledger.rounds() == 5);
}

TEST_CASE("parallel grouping is associative in rounds") {
    RoundLedger flat;
    RoundLedger nested;
    auto make = [](const RoundLedger& parent, int charges) {
        RoundLedger s = parent.sub();
        for (int i = 0; i < charges; ++i) s.charge("sort", 10);
        return s;
    };

    flat.merge_parallel({make(flat, 2), make(flat, 5), make(flat, 1)});

    RoundLedger inner = nested.sub();
    inner.merge_parallel({make(nested, 2), make(nested, 5)});
    nested.merge_parallel({inner, make(nested, 1)});

    CHECK(flat.rounds() == nested.rounds());
}

TEST_CASE("strict partition check splits operands into machine chunks") {
    PartitionCheck ok = strict_partition_check(100, 1, 64);
    CHECK(ok.ok);
    CHECK(ok.machines == 2);
    CHECK(ok.chunk_words == 50);

    PartitionCheck fat = strict_partition_check(100, 128, 64);
    CHECK_FALSE(fat.ok);
    CHECK(fat.detail.find("128") != std::string::npos);

    CHECK_THROWS_AS(strict_partition_check(100, 1, 0), std::invalid_argument);
}

TEST_CASE("strict ledgers record violations with their stage") {
    RoundLedger strict(CostTable::defaults(), true, 64);
    CHECK(strict.strict());
    strict.set_stage("demo");
    strict.charge("sort", 100, 2);
    CHECK(strict.violations().empty());
    strict.charge("sort", 100, 128);
    REQUIRE(strict.violations().size() == 1);
    CHECK(strict.violations()[0].stage == "demo/sort");
}

TEST_CASE("doubling iteration count") {
    CHECK(doubling_iterations(1) == 0);
    CHECK(doubling_iterations(2) == 1);
    CHECK(doubling_iterations(3) == 2);
    CHECK(doubling_iterations(20) == 5);
    CHECK(doubling_iterations(32) == 5);
    CHECK(doubling_iterations(33) == 6);
    CHECK_THROWS_AS(doubling_iterations(0), std::invalid_argument);
}

TEST_CASE("rounds formula shape") {
    AlgorithmConfig config;
    RoundsBreakdown b = rounds_formula(config, 300, 8);
    CHECK(b.normalize == 2);
    CHECK(b.spanner == 4);
    CHECK(b.part1 == 3 * config.h + 3);
    CHECK(b.part2 == 2 * (3 * config.h + 3));  // one wave per valuation class, g = 2
    CHECK(b.part3 == 3 * config.h + 2);
    CHECK(b.shortcut == 2);
    CHECK(b.total() == b.normalize + b.spanner + b.part1 + b.part2 + b.part3 + b.tour +
                           b.shortcut);

    // The level count only enters through the doubling iterations of the tour phase, and
    // 20 and 28 levels both pad to 32.
    CHECK(rounds_formula(config, 256, 8).total() == rounds_formula(config, 4096, 8).total());

    AlgorithmConfig shallow = config;
    shallow.h = 4;
    CHECK(rounds_formula(shallow, 300, 8).total() < b.total());
}
