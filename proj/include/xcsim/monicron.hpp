#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xcsim/analytics.hpp"
#include "xcsim/catalog.hpp"
#include "xcsim/trace.hpp"

namespace xcsim {

// One job seen from the pool monitoring side.
struct JobRecord {
    double t = 0;
    std::string site;
    bool success = true;
    std::uint64_t bytes_read = 0;
    double read_time_s = 0;
    double cpu_time_s = 0;
    double wall_time_s = 0;
};

// Metrics of one aggregation interval. Zero-denominator metrics report 0
// and are named in undefined_flags so series stay dense.
struct AggregateWindow {
    Window window;
    double failure_rate = 0;
    double avg_read_speed_Bps = 0;
    double cpu_efficiency = 0;
    std::uint64_t total_data_delivered_bytes = 0;
    std::uint64_t unique_reads = 0;
    std::uint64_t working_set_bytes = 0;
    std::uint64_t n_jobs = 0;
    std::uint64_t n_accesses = 0;
    std::vector<std::string> undefined_flags;
};

// Partitions time into consecutive [k*interval, (k+1)*interval) windows
// anchored at the earliest record of either stream and computes the metric
// set per window. Gap windows are emitted as all-zero. Both streams must be
// time-sorted.
std::vector<AggregateWindow> aggregate(const std::vector<JobRecord>& jobs,
                                       const std::vector<AccessEvent>& accesses,
                                       const Catalog& catalog, double interval_s);

// JSON Lines persistence; one window per line. `keep_last_n` truncates to
// the most recent windows. Returns the number of records written. The write
// is atomic (temp file + rename).
std::size_t persist_aggregates(const std::vector<AggregateWindow>& aggregates,
                               const std::string& path,
                               std::optional<std::size_t> keep_last_n = std::nullopt);

// Inverse of persist_aggregates; field-for-field round-trip. Parse errors
// name the line.
std::vector<AggregateWindow> load_aggregates(const std::string& path);

// Loads a job stream CSV with header
// `t,site,success,bytes_read,read_time_s,cpu_time_s,wall_time_s`
// (success is 0 or 1; wall >= cpu >= 0 enforced).
std::vector<JobRecord> load_jobs(const std::string& path);

}  // namespace xcsim
