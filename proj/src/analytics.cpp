#include "xcsim/analytics.hpp"

#include <algorithm>
#include <unordered_set>

namespace xcsim {

const char* to_string(Granularity granularity) {
    return granularity == Granularity::File ? "file" : "dataset";
}

namespace {

void check_window(const Window& window) {
    if (!(window.start < window.end)) {
        throw ValidationError("window start must precede end (got [" +
                              std::to_string(window.start) + ", " + std::to_string(window.end) +
                              "))");
    }
}

bool in_window(double t, const Window& window) {
    return t >= window.start && t < window.end;
}

}  // namespace

WorkingSetReport working_set_file(std::span<const AccessEvent> events, const Catalog& catalog,
                                  const Window& window,
                                  const std::optional<std::string>& tier_filter) {
    check_window(window);
    WorkingSetReport report;
    report.window = window;
    report.granularity = Granularity::File;
    std::unordered_set<std::string> seen;
    for (const auto& event : events) {
        if (!in_window(event.t, window)) {
            continue;
        }
        const CatalogEntry& entry = catalog.at(event.lfn);
        if (tier_filter.has_value() && entry.tier != *tier_filter) {
            continue;
        }
        if (seen.insert(event.lfn).second) {
            report.bytes += entry.size_bytes;
        }
    }
    report.unique_count = seen.size();
    return report;
}

WorkingSetReport working_set_dataset(std::span<const AccessEvent> events, const Catalog& catalog,
                                     const Window& window,
                                     const std::optional<std::string>& tier_filter) {
    check_window(window);
    WorkingSetReport report;
    report.window = window;
    report.granularity = Granularity::Dataset;
    std::unordered_set<std::string> seen;
    for (const auto& event : events) {
        if (!in_window(event.t, window)) {
            continue;
        }
        const CatalogEntry& entry = catalog.at(event.lfn);
        if (tier_filter.has_value() && entry.tier != *tier_filter) {
            continue;
        }
        if (seen.insert(entry.dataset).second) {
            report.bytes += catalog.dataset_sizes().at(entry.dataset);
        }
    }
    report.unique_count = seen.size();
    return report;
}

std::vector<WorkingSetReport> rolling_working_set(std::span<const AccessEvent> events,
                                                  const Catalog& catalog, double span_s,
                                                  double step_s, Granularity granularity,
                                                  const std::optional<std::string>& tier_filter) {
    if (span_s <= 0 || step_s <= 0) {
        throw ValidationError("rolling window span and step must be positive");
    }
    std::vector<WorkingSetReport> reports;
    if (events.empty()) {
        return reports;
    }
    double first = events.front().t;
    double last = events.front().t;
    for (const auto& event : events) {
        first = std::min(first, event.t);
        last = std::max(last, event.t);
    }
    double prev_report_time = -1;
    for (std::uint64_t k = 0;; ++k) {
        const double report_time = first + span_s + static_cast<double>(k) * step_s;
        if (report_time > last) {
            break;
        }
        if (k > 0 && report_time <= prev_report_time) {
            throw ValidationError("step too small relative to trace timestamps");
        }
        prev_report_time = report_time;
        const Window window{report_time - span_s, report_time};
        reports.push_back(granularity == Granularity::File
                              ? working_set_file(events, catalog, window, tier_filter)
                              : working_set_dataset(events, catalog, window, tier_filter));
    }
    return reports;
}

std::uint64_t capacity_plan(const std::vector<CapacityEntry>& entries) {
    constexpr std::uint64_t kBytesPerTb = 1000ull * 1000ull * 1000ull * 1000ull;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const CapacityEntry& entry = entries[i];
        if (entry.node_count == 0 || entry.disks_per_node == 0 || entry.disk_tb == 0) {
            throw ValidationError("capacity entry " + std::to_string(i) +
                                  ": node count, disks per node, and disk size must be positive");
        }
        std::uint64_t bytes = 0;
        bool overflow = __builtin_mul_overflow(entry.node_count, entry.disks_per_node, &bytes) ||
                        __builtin_mul_overflow(bytes, entry.disk_tb, &bytes) ||
                        __builtin_mul_overflow(bytes, kBytesPerTb, &bytes) ||
                        __builtin_add_overflow(total, bytes, &total);
        if (overflow) {
            throw ValidationError("capacity plan overflows 64-bit byte arithmetic at entry " +
                                  std::to_string(i));
        }
    }
    return total;
}

}  // namespace xcsim
