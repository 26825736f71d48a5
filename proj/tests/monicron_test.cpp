#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "testutil.hpp"
#include "xcsim/monicron.hpp"

using namespace xcsim;

namespace {

Catalog tiny_catalog() {
    return Catalog::from_entries({
        {"/store/a", "/p/c/MINIAOD", "MINIAOD", 100},
        {"/store/b", "/p/c/MINIAOD", "MINIAOD", 200},
        {"/store/c", "/q/c/MINIAODSIM", "MINIAODSIM", 400},
    });
}

std::vector<JobRecord> make_jobs(testutil::Rng& rng, std::size_t n, double t_max) {
    std::vector<JobRecord> jobs;
    for (std::size_t i = 0; i < n; ++i) {
        JobRecord job;
        job.t = testutil::rand_double(rng, 0, t_max);
        job.site = testutil::rand_u64(rng, 0, 1) == 0 ? "UCSD" : "CIT";
        job.success = testutil::rand_double(rng, 0, 1) < 0.8;
        job.bytes_read = testutil::rand_u64(rng, 0, 5000);
        job.read_time_s = testutil::rand_double(rng, 0, 50);
        job.cpu_time_s = testutil::rand_double(rng, 0, 100);
        job.wall_time_s = job.cpu_time_s + testutil::rand_double(rng, 0, 50);
        jobs.push_back(std::move(job));
    }
    std::sort(jobs.begin(), jobs.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    return jobs;
}

bool same_aggregate(const AggregateWindow& a, const AggregateWindow& b) {
    return a.window.start == b.window.start && a.window.end == b.window.end &&
           a.failure_rate == b.failure_rate && a.avg_read_speed_Bps == b.avg_read_speed_Bps &&
           a.cpu_efficiency == b.cpu_efficiency &&
           a.total_data_delivered_bytes == b.total_data_delivered_bytes &&
           a.unique_reads == b.unique_reads && a.working_set_bytes == b.working_set_bytes &&
           a.n_jobs == b.n_jobs && a.n_accesses == b.n_accesses &&
           a.undefined_flags == b.undefined_flags;
}

}  // namespace

TEST_CASE("aggregate basics") {
    const Catalog catalog = tiny_catalog();
    SUBCASE("failure rate over one window") {
        std::vector<JobRecord> jobs{
            {0, "UCSD", true, 100, 1, 1, 2},
            {10, "UCSD", false, 100, 1, 1, 2},
        };
        const auto windows = aggregate(jobs, {}, catalog, 3600);
        REQUIRE(windows.size() == 1);
        CHECK(windows[0].failure_rate == 0.5);
        CHECK(windows[0].n_jobs == 2);
        CHECK(windows[0].cpu_efficiency == 0.5);
        CHECK(windows[0].avg_read_speed_Bps == 100.0);
        CHECK(windows[0].undefined_flags.empty());
    }
    SUBCASE("gap windows come out all-zero with flags") {
        std::vector<AccessEvent> accesses{{0, "UCSD", "/store/a", 10},
                                          {2500, "UCSD", "/store/b", 20}};
        const auto windows = aggregate({}, accesses, catalog, 1000);
        REQUIRE(windows.size() == 3);
        const AggregateWindow& gap = windows[1];
        CHECK(gap.n_jobs == 0);
        CHECK(gap.n_accesses == 0);
        CHECK(gap.total_data_delivered_bytes == 0);
        CHECK(gap.working_set_bytes == 0);
        CHECK(gap.failure_rate == 0);
        CHECK(gap.undefined_flags ==
              std::vector<std::string>{"failure_rate", "avg_read_speed_Bps", "cpu_efficiency"});
        CHECK(windows[2].n_accesses == 1);
    }
    SUBCASE("windows are anchored at the earliest record of either stream") {
        std::vector<JobRecord> jobs{{500, "UCSD", true, 0, 0, 0, 0}};
        std::vector<AccessEvent> accesses{{100, "UCSD", "/store/a", 10}};
        const auto windows = aggregate(jobs, accesses, catalog, 1000);
        REQUIRE(windows.size() == 1);
        CHECK(windows[0].window.start == 100.0);
        CHECK(windows[0].window.end == 1100.0);
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(aggregate({}, {}, catalog, 0), ValidationError);
        CHECK_THROWS_AS(aggregate({}, {}, catalog, -5), ValidationError);
        std::vector<JobRecord> unsorted{{10, "UCSD", true, 0, 0, 0, 0},
                                        {5, "UCSD", true, 0, 0, 0, 0}};
        CHECK_THROWS_WITH_AS(aggregate(unsorted, {}, catalog, 100),
                             doctest::Contains("not time-sorted"), ValidationError);
        std::vector<AccessEvent> bad_access{{10, "UCSD", "/store/a", 1},
                                            {5, "UCSD", "/store/a", 1}};
        CHECK_THROWS_AS(aggregate({}, bad_access, catalog, 100), ValidationError);
        std::vector<JobRecord> bad_job{{0, "UCSD", true, 0, 1, 5, 2}};  // wall < cpu
        CHECK_THROWS_AS(aggregate(bad_job, {}, catalog, 100), ValidationError);
    }
    SUBCASE("empty streams yield no windows") {
        CHECK(aggregate({}, {}, catalog, 100).empty());
    }
}

TEST_CASE("aggregate matches per-window recomputation and partitions totals") {
    testutil::Rng rng(9001);
    const Catalog catalog = tiny_catalog();
    const std::vector<std::string> lfns{"/store/a", "/store/b", "/store/c"};
    for (int round = 0; round < 10; ++round) {
        const double horizon = 24 * 3600;
        const auto jobs = make_jobs(rng, 300, horizon);
        const auto accesses = testutil::make_trace(rng, lfns, 500, horizon);
        const double interval = 3600;
        const auto windows = aggregate(jobs, accesses, catalog, interval);
        REQUIRE(!windows.empty());

        std::uint64_t delivered = 0;
        std::uint64_t n_jobs = 0;
        std::uint64_t n_accesses = 0;
        for (const auto& window : windows) {
            // Independent filter-and-compute pass over the full streams.
            std::uint64_t w_jobs = 0, w_failed = 0, w_job_bytes = 0;
            double w_read_time = 0, w_cpu = 0, w_wall = 0;
            for (const auto& job : jobs) {
                if (job.t >= window.window.start && job.t < window.window.end) {
                    ++w_jobs;
                    if (!job.success) {
                        ++w_failed;
                    }
                    w_job_bytes += job.bytes_read;
                    w_read_time += job.read_time_s;
                    w_cpu += job.cpu_time_s;
                    w_wall += job.wall_time_s;
                }
            }
            std::uint64_t w_accesses = 0, w_bytes = 0;
            std::set<std::string> w_lfns;
            std::uint64_t w_ws_bytes = 0;
            for (const auto& access : accesses) {
                if (access.t >= window.window.start && access.t < window.window.end) {
                    ++w_accesses;
                    w_bytes += access.bytes_read;
                    if (w_lfns.insert(access.lfn).second) {
                        w_ws_bytes += catalog.entries().at(access.lfn).size_bytes;
                    }
                }
            }
            CHECK(window.n_jobs == w_jobs);
            CHECK(window.n_accesses == w_accesses);
            CHECK(window.total_data_delivered_bytes == w_bytes);
            CHECK(window.unique_reads == w_lfns.size());
            CHECK(window.working_set_bytes == w_ws_bytes);
            if (w_jobs > 0) {
                CHECK(window.failure_rate ==
                      static_cast<double>(w_failed) / static_cast<double>(w_jobs));
            }
            if (w_read_time > 0) {
                CHECK(window.avg_read_speed_Bps ==
                      doctest::Approx(static_cast<double>(w_job_bytes) / w_read_time)
                          .epsilon(1e-12));
            }
            if (w_wall > 0) {
                CHECK(window.cpu_efficiency == doctest::Approx(w_cpu / w_wall).epsilon(1e-12));
            }
            CHECK(window.failure_rate >= 0);
            CHECK(window.failure_rate <= 1);
            CHECK(window.cpu_efficiency >= 0);
            CHECK(window.cpu_efficiency <= 1);

            delivered += window.total_data_delivered_bytes;
            n_jobs += window.n_jobs;
            n_accesses += window.n_accesses;
        }
        std::uint64_t stream_bytes = 0;
        for (const auto& access : accesses) {
            stream_bytes += access.bytes_read;
        }
        CHECK(delivered == stream_bytes);
        CHECK(n_jobs == jobs.size());
        CHECK(n_accesses == accesses.size());
    }
}

TEST_CASE("persist and load round-trip") {
    const auto path =
        (std::filesystem::temp_directory_path() / "aggregates_test.jsonl").string();
    const Catalog catalog = tiny_catalog();

    SUBCASE("empty sequence writes an empty file") {
        CHECK(persist_aggregates({}, path) == 0);
        CHECK(std::filesystem::file_size(path) == 0);
        CHECK(load_aggregates(path).empty());
    }
    SUBCASE("single window round-trips exactly") {
        std::vector<JobRecord> jobs{{0, "UCSD", false, 100, 2.5, 1, 4}};
        const auto windows = aggregate(jobs, {}, catalog, 100);
        CHECK(persist_aggregates(windows, path) == 1);
        const auto loaded = load_aggregates(path);
        REQUIRE(loaded.size() == 1);
        CHECK(same_aggregate(loaded[0], windows[0]));
    }
    SUBCASE("a hundred random windows round-trip field for field") {
        testutil::Rng rng(9002);
        const std::vector<std::string> lfns{"/store/a", "/store/b", "/store/c"};
        const auto jobs = make_jobs(rng, 400, 100 * 3600.0);
        const auto accesses = testutil::make_trace(rng, lfns, 600, 100 * 3600.0);
        const auto windows = aggregate(jobs, accesses, catalog, 3600);
        REQUIRE(windows.size() >= 100);
        CHECK(persist_aggregates(windows, path) == windows.size());
        const auto loaded = load_aggregates(path);
        REQUIRE(loaded.size() == windows.size());
        for (std::size_t i = 0; i < loaded.size(); ++i) {
            CHECK(same_aggregate(loaded[i], windows[i]));
        }
    }
    SUBCASE("keep_last_n truncates the head") {
        std::vector<AccessEvent> accesses{{0, "UCSD", "/store/a", 1},
                                          {950, "UCSD", "/store/b", 1}};
        const auto windows = aggregate({}, accesses, catalog, 100);
        REQUIRE(windows.size() == 10);
        CHECK(persist_aggregates(windows, path, 3) == 3);
        const auto loaded = load_aggregates(path);
        REQUIRE(loaded.size() == 3);
        CHECK(same_aggregate(loaded[0], windows[7]));
        CHECK(same_aggregate(loaded[2], windows[9]));
    }
    SUBCASE("malformed line is reported with its number") {
        {
            std::ofstream out(path);
            out << R"({"window":{"start":0,"end":1},"failure_rate":0,"avg_read_speed_Bps":0,)"
                << R"("cpu_efficiency":0,"total_data_delivered_bytes":0,"unique_reads":0,)"
                << R"("working_set_bytes":0,"n_jobs":0,"n_accesses":0,"undefined_flags":[]})"
                << "\n";
            out << "{broken\n";
        }
        CHECK_THROWS_WITH_AS(load_aggregates(path), doctest::Contains("line 2"), ParseError);
    }
    SUBCASE("missing field is a parse error") {
        {
            std::ofstream out(path);
            out << R"({"window":{"start":0,"end":1}})" << "\n";
        }
        CHECK_THROWS_AS(load_aggregates(path), ParseError);
    }
}

TEST_CASE("unique_reads agrees with the file working set of the same window") {
    testutil::Rng rng(9003);
    const Catalog catalog = tiny_catalog();
    const std::vector<std::string> lfns{"/store/a", "/store/b", "/store/c"};
    const auto accesses = testutil::make_trace(rng, lfns, 200, 10000);
    const auto windows = aggregate({}, accesses, catalog, 1000);
    for (const auto& window : windows) {
        const auto report = working_set_file(accesses, catalog, window.window);
        CHECK(window.unique_reads == report.unique_count);
        CHECK(window.working_set_bytes == report.bytes);
    }
}

TEST_CASE("load_jobs parses and validates") {
    const auto path = (std::filesystem::temp_directory_path() / "jobs_test.csv").string();
    SUBCASE("good file") {
        {
            std::ofstream out(path);
            out << "t,site,success,bytes_read,read_time_s,cpu_time_s,wall_time_s\n";
            out << "0,UCSD,1,100,1.5,2,4\n";
            out << "10,CIT,0,200,0.5,1,1\n";
        }
        const auto jobs = load_jobs(path);
        REQUIRE(jobs.size() == 2);
        CHECK(jobs[0].success);
        CHECK_FALSE(jobs[1].success);
        CHECK(jobs[0].read_time_s == 1.5);
    }
    SUBCASE("bad success flag") {
        {
            std::ofstream out(path);
            out << "t,site,success,bytes_read,read_time_s,cpu_time_s,wall_time_s\n";
            out << "0,UCSD,yes,100,1.5,2,4\n";
        }
        CHECK_THROWS_WITH_AS(load_jobs(path), doctest::Contains("success"), ParseError);
    }
    SUBCASE("wall below cpu") {
        {
            std::ofstream out(path);
            out << "t,site,success,bytes_read,read_time_s,cpu_time_s,wall_time_s\n";
            out << "0,UCSD,1,100,1.5,5,4\n";
        }
        CHECK_THROWS_WITH_AS(load_jobs(path), doctest::Contains("line 2"), ParseError);
    }
}
