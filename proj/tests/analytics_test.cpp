#include <doctest.h>

#include <algorithm>
#include <set>
#include <unordered_set>

#include "testutil.hpp"
#include "xcsim/analytics.hpp"

using namespace xcsim;

namespace {

// Brute force: explicit distinct set, then sum sizes. Kept free of any
// shared code with the library versions.
std::uint64_t file_oracle(const std::vector<AccessEvent>& events, const Catalog& catalog,
                          double start, double end) {
    std::set<std::string> distinct;
    for (const auto& event : events) {
        if (event.t >= start && event.t < end) {
            distinct.insert(event.lfn);
        }
    }
    std::uint64_t bytes = 0;
    for (const auto& lfn : distinct) {
        bytes += catalog.entries().at(lfn).size_bytes;
    }
    return bytes;
}

std::uint64_t dataset_oracle(const std::vector<AccessEvent>& events, const Catalog& catalog,
                             double start, double end) {
    std::set<std::string> distinct;
    for (const auto& event : events) {
        if (event.t >= start && event.t < end) {
            distinct.insert(catalog.entries().at(event.lfn).dataset);
        }
    }
    std::uint64_t bytes = 0;
    for (const auto& dataset : distinct) {
        std::uint64_t total = 0;
        for (const auto& [lfn, entry] : catalog.entries()) {
            if (entry.dataset == dataset) {
                total += entry.size_bytes;
            }
        }
        bytes += total;
    }
    return bytes;
}

Catalog small_catalog() {
    return Catalog::from_entries({
        {"/store/d0f0", "/ds0/c/MINIAOD", "MINIAOD", 10},
        {"/store/d0f1", "/ds0/c/MINIAOD", "MINIAOD", 12},
        {"/store/d0f2", "/ds0/c/MINIAOD", "MINIAOD", 8},
        {"/store/d1f0", "/ds1/c/MINIAODSIM", "MINIAODSIM", 100},
    });
}

}  // namespace

TEST_CASE("working_set_file") {
    const Catalog catalog = small_catalog();
    SUBCASE("repeat accesses count once") {
        std::vector<AccessEvent> events;
        for (int i = 0; i < 5; ++i) {
            events.push_back({static_cast<double>(i), "UCSD", "/store/d0f0", 1});
        }
        const auto report = working_set_file(events, catalog, Window{0, 10});
        CHECK(report.bytes == 10);
        CHECK(report.unique_count == 1);
    }
    SUBCASE("empty window") {
        std::vector<AccessEvent> events{{50, "UCSD", "/store/d0f0", 1}};
        const auto report = working_set_file(events, catalog, Window{0, 10});
        CHECK(report.bytes == 0);
        CHECK(report.unique_count == 0);
    }
    SUBCASE("window bounds are half-open") {
        std::vector<AccessEvent> events{{0, "UCSD", "/store/d0f0", 1},
                                        {10, "UCSD", "/store/d0f1", 1}};
        const auto report = working_set_file(events, catalog, Window{0, 10});
        CHECK(report.unique_count == 1);  // t=10 excluded
    }
    SUBCASE("tier filter restricts accounting") {
        std::vector<AccessEvent> events{{1, "UCSD", "/store/d0f0", 1},
                                        {2, "UCSD", "/store/d1f0", 1}};
        const auto all = working_set_file(events, catalog, Window{0, 10});
        CHECK(all.bytes == 110);
        const auto mini = working_set_file(events, catalog, Window{0, 10}, "MINIAOD");
        CHECK(mini.bytes == 10);
        const auto sim = working_set_file(events, catalog, Window{0, 10}, "MINIAODSIM");
        CHECK(sim.bytes == 100);
    }
    SUBCASE("bad window") {
        CHECK_THROWS_AS(working_set_file({}, catalog, Window{10, 10}), ValidationError);
    }
    SUBCASE("unknown lfn") {
        std::vector<AccessEvent> events{{1, "UCSD", "/store/nope", 1}};
        CHECK_THROWS_AS(working_set_file(events, catalog, Window{0, 10}), UnknownFileError);
    }
}

TEST_CASE("working_set_dataset") {
    const Catalog catalog = small_catalog();
    SUBCASE("one touch charges the whole dataset") {
        std::vector<AccessEvent> events{{1, "UCSD", "/store/d0f0", 1}};
        const auto report = working_set_dataset(events, catalog, Window{0, 10});
        CHECK(report.bytes == 30);  // 10 + 12 + 8
        CHECK(report.unique_count == 1);
    }
    SUBCASE("touching every file charges it once") {
        std::vector<AccessEvent> events{{1, "UCSD", "/store/d0f0", 1},
                                        {2, "UCSD", "/store/d0f1", 1},
                                        {3, "UCSD", "/store/d0f2", 1}};
        const auto report = working_set_dataset(events, catalog, Window{0, 10});
        CHECK(report.bytes == 30);
        CHECK(report.unique_count == 1);
    }
}

TEST_CASE("working sets match brute force on random traces, with properties") {
    testutil::Rng rng(8001);
    for (int round = 0; round < 10; ++round) {
        const auto fx = testutil::make_catalog(rng, 200, 20);
        const auto events = testutil::make_trace(rng, fx.lfns, 3000, 1e6);
        const Window window{2e5, 7e5};

        const auto file_report = working_set_file(events, fx.catalog, window);
        const auto dataset_report = working_set_dataset(events, fx.catalog, window);
        CHECK(file_report.bytes == file_oracle(events, fx.catalog, window.start, window.end));
        CHECK(dataset_report.bytes ==
              dataset_oracle(events, fx.catalog, window.start, window.end));

        // Dominance.
        CHECK(dataset_report.bytes >= file_report.bytes);

        // Idempotence under duplication of a random subset.
        auto duplicated = events;
        for (const auto& event : events) {
            if (testutil::rand_double(rng, 0, 1) < 0.3) {
                duplicated.push_back(event);
            }
        }
        CHECK(working_set_file(duplicated, fx.catalog, window).bytes == file_report.bytes);
        CHECK(working_set_dataset(duplicated, fx.catalog, window).bytes == dataset_report.bytes);

        // Monotonicity under window enlargement.
        const Window larger{window.start - 1e5, window.end + 1e5};
        CHECK(working_set_file(events, fx.catalog, larger).bytes >= file_report.bytes);
        CHECK(working_set_dataset(events, fx.catalog, larger).bytes >= dataset_report.bytes);

        // Bounded by the total size of the tiers present.
        std::set<std::string> tiers;
        for (const auto& event : events) {
            tiers.insert(fx.catalog.at(event.lfn).tier);
        }
        CHECK(file_report.bytes <= total_tier_size(fx.catalog, tiers));
    }
}

TEST_CASE("rolling_working_set") {
    const Catalog catalog = small_catalog();
    SUBCASE("trace shorter than the span yields nothing") {
        std::vector<AccessEvent> events{{0, "UCSD", "/store/d0f0", 1},
                                        {100, "UCSD", "/store/d0f0", 1}};
        CHECK(rolling_working_set(events, catalog, 1000, 100, Granularity::File).empty());
    }
    SUBCASE("weekly repeat of one file keeps unique_count at 1") {
        std::vector<AccessEvent> events;
        for (int week = 0; week < 12; ++week) {
            events.push_back({week * kDefaultStepS, "UCSD", "/store/d0f0", 1});
        }
        const auto reports = rolling_working_set(events, catalog, kDefaultSpanS, kDefaultStepS,
                                                 Granularity::File);
        REQUIRE(!reports.empty());
        for (const auto& report : reports) {
            CHECK(report.unique_count == 1);
            CHECK(report.bytes == 10);
        }
    }
    SUBCASE("every report equals a direct single-window computation") {
        testutil::Rng rng(8002);
        const auto fx = testutil::make_catalog(rng, 80, 10);
        const auto events = testutil::make_trace(rng, fx.lfns, 2000, 3e6);
        const auto reports =
            rolling_working_set(events, fx.catalog, 5e5, 1e5, Granularity::Dataset);
        CHECK(!reports.empty());
        for (const auto& report : reports) {
            const auto direct = working_set_dataset(events, fx.catalog, report.window);
            CHECK(report.bytes == direct.bytes);
            CHECK(report.unique_count == direct.unique_count);
        }
    }
    SUBCASE("empty events yield an empty sequence") {
        CHECK(rolling_working_set({}, catalog, 100, 10, Granularity::File).empty());
    }
    SUBCASE("non-positive span or step") {
        CHECK_THROWS_AS(rolling_working_set({}, catalog, 0, 10, Granularity::File),
                        ValidationError);
        CHECK_THROWS_AS(rolling_working_set({}, catalog, 10, -1, Granularity::File),
                        ValidationError);
    }
}

TEST_CASE("capacity_plan") {
    SUBCASE("socal hardware table") {
        // 11x12x2 + 1x48x11 = 792 TB, 2x30x6 = 360 TB.
        const std::vector<CapacityEntry> ucsd{{11, 12, 2}, {1, 48, 11}};
        const std::vector<CapacityEntry> caltech{{2, 30, 6}};
        CHECK(capacity_plan(ucsd) == 792000000000000ull);
        CHECK(capacity_plan(caltech) == 360000000000000ull);
        std::vector<CapacityEntry> all = ucsd;
        all.insert(all.end(), caltech.begin(), caltech.end());
        CHECK(capacity_plan(all) == 1152000000000000ull);
    }
    SUBCASE("unit entry") {
        CHECK(capacity_plan({{1, 1, 1}}) == 1000000000000ull);
    }
    SUBCASE("random entries match an independent product sum") {
        testutil::Rng rng(8003);
        for (int round = 0; round < 20; ++round) {
            std::vector<CapacityEntry> entries;
            unsigned __int128 expected = 0;
            const std::size_t n = testutil::rand_u64(rng, 1, 6);
            for (std::size_t i = 0; i < n; ++i) {
                CapacityEntry entry{testutil::rand_u64(rng, 1, 40),
                                    testutil::rand_u64(rng, 1, 60),
                                    testutil::rand_u64(rng, 1, 16)};
                expected += static_cast<unsigned __int128>(entry.node_count) *
                            entry.disks_per_node * entry.disk_tb * 1000000000000ull;
                entries.push_back(entry);
            }
            CHECK(capacity_plan(entries) == static_cast<std::uint64_t>(expected));
        }
    }
    SUBCASE("zero fields are rejected") {
        CHECK_THROWS_AS(capacity_plan({{0, 1, 1}}), ValidationError);
        CHECK_THROWS_AS(capacity_plan({{1, 0, 1}}), ValidationError);
        CHECK_THROWS_AS(capacity_plan({{1, 1, 0}}), ValidationError);
    }
    SUBCASE("overflow is detected") {
        CHECK_THROWS_WITH_AS(capacity_plan({{~0ull, 2, 2}}), doctest::Contains("overflow"),
                             ValidationError);
    }
}
