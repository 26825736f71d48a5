#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xcsim/cache.hpp"
#include "xcsim/catalog.hpp"
#include "xcsim/federation.hpp"
#include "xcsim/trace.hpp"

namespace xcsim {

// Open/transfer cost model. WAN opens price each redirector level consulted
// during resolution; transfers price bytes over the respective link.
struct LatencyModel {
    double lan_open_s = 0;
    double wan_open_per_hop_s = 0;
    double lan_bw_Bps = 0;
    double wan_bw_Bps = 0;

    // All fields strictly positive and WAN no faster than LAN.
    void validate() const;
};

enum class Mode { Cached, Direct };
enum class ReadResult { Hit, Miss, Unavailable };

const char* to_string(Mode mode);
const char* to_string(ReadResult result);

struct EventOutcome {
    AccessEvent event;
    Mode mode = Mode::Cached;
    ReadResult result = ReadResult::Miss;
    double read_time_s = 0;
    std::uint64_t bytes_from_wan = 0;
    std::optional<std::string> server;  // origin that satisfied the fetch
};

// Everything a replay needs. Copyable; replay never mutates the instance it
// is given (cache state is copied per run).
struct World {
    Topology topology;
    Catalog catalog;
    std::map<std::string, CacheNode> caches;  // by site
    LatencyModel latency;
};

// Loads a world config JSON bundling topology/catalog file paths, cache
// node configs, and the latency model. Relative paths are resolved against
// the config file's directory.
World load_world(const std::string& path);

// Replays a time-ordered trace. Cached mode consults the client site's
// cache and fetches whole files through the federation root on a miss;
// direct mode resolves and reads every event over the WAN. Averages
// reported downstream are per-read.
std::vector<EventOutcome> replay(const std::vector<AccessEvent>& events, const World& world,
                                 Mode mode);

struct Summary {
    double avg_read_time_s = 0;
    std::uint64_t total_bytes_delivered = 0;  // bytes_read over hit+miss outcomes
    std::uint64_t total_bytes_from_wan = 0;
    double hit_rate = 0;      // hits / (hits + found misses); 0 when undefined
    double failure_rate = 0;  // unavailable / total; 0 when empty
};

Summary summarize(const std::vector<EventOutcome>& outcomes);

struct CompareResult {
    double avg_cached_s = 0;
    double avg_direct_s = 0;
    double ratio_direct_over_cached = 0;
};

// Replays the trace in both modes (fresh cache state each) and reports the
// per-read averages and their ratio. Throws ValidationError on an empty
// trace.
CompareResult compare_modes(const std::vector<AccessEvent>& events, const World& world);

}  // namespace xcsim
