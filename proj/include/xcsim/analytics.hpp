#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xcsim/catalog.hpp"
#include "xcsim/errors.hpp"
#include "xcsim/trace.hpp"

namespace xcsim {

// Half-open aggregation interval [start, end).
struct Window {
    double start = 0;
    double end = 0;
};

enum class Granularity { File, Dataset };

const char* to_string(Granularity granularity);

struct WorkingSetReport {
    Window window;
    Granularity granularity = Granularity::File;
    std::uint64_t bytes = 0;
    std::uint64_t unique_count = 0;
};

// Four-week span, one-week stride: the default rolling-report shape.
inline constexpr double kDefaultSpanS = 28.0 * 86400.0;  // 2,419,200
inline constexpr double kDefaultStepS = 7.0 * 86400.0;   // 604,800

// Working set at file granularity: distinct lfns touched in the window,
// charged at their own size. `tier_filter` restricts to events whose file
// belongs to that tier (detector vs Monte Carlo splits).
WorkingSetReport working_set_file(std::span<const AccessEvent> events, const Catalog& catalog,
                                  const Window& window,
                                  const std::optional<std::string>& tier_filter = std::nullopt);

// Working set at dataset granularity: touching any file charges the full
// dataset size, once per distinct dataset.
WorkingSetReport working_set_dataset(std::span<const AccessEvent> events, const Catalog& catalog,
                                     const Window& window,
                                     const std::optional<std::string>& tier_filter = std::nullopt);

// One report per time T = first_event + span + k*step while T <= last
// event, each over [T - span, T). Empty when the trace spans less than one
// full window.
std::vector<WorkingSetReport> rolling_working_set(
    std::span<const AccessEvent> events, const Catalog& catalog, double span_s, double step_s,
    Granularity granularity, const std::optional<std::string>& tier_filter = std::nullopt);

// One line of a hardware provisioning plan: `node_count` hosts, each with
// `disks_per_node` disks of `disk_tb` decimal terabytes.
struct CapacityEntry {
    std::uint64_t node_count = 0;
    std::uint64_t disks_per_node = 0;
    std::uint64_t disk_tb = 0;
};

// Total bytes across the plan (decimal SI: 1 TB = 10^12 bytes). All fields
// must be positive; overflow raises ValidationError.
std::uint64_t capacity_plan(const std::vector<CapacityEntry>& entries);

}  // namespace xcsim
