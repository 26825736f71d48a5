#include "xcsim/simulate.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace xcsim {

void LatencyModel::validate() const {
    if (!(lan_open_s > 0 && wan_open_per_hop_s > 0 && lan_bw_Bps > 0 && wan_bw_Bps > 0)) {
        throw ValidationError("latency model fields must all be strictly positive");
    }
    if (wan_bw_Bps > lan_bw_Bps) {
        throw ValidationError("wan_bw_Bps must not exceed lan_bw_Bps");
    }
}

const char* to_string(Mode mode) {
    return mode == Mode::Cached ? "cached" : "direct";
}

const char* to_string(ReadResult result) {
    switch (result) {
        case ReadResult::Hit:
            return "hit";
        case ReadResult::Miss:
            return "miss";
        default:
            return "unavailable";
    }
}

World load_world(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    const auto base = std::filesystem::path(path).parent_path();
    auto resolve_path = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).string();
    };
    World world;
    try {
        world.topology = load_topology(resolve_path(j.at("topology").get<std::string>()));
        world.catalog = load_catalog(resolve_path(j.at("catalog").get<std::string>()));
        for (const auto& jc : j.at("caches")) {
            CacheConfig config;
            config.site = jc.at("site").get<std::string>();
            config.disk_capacities = jc.at("disks").get<std::vector<std::uint64_t>>();
            config.high_watermark = jc.value("high_watermark", 0.95);
            config.low_watermark = jc.value("low_watermark", 0.90);
            if (world.caches.count(config.site) > 0) {
                throw ValidationError(path + ": duplicate cache for site '" + config.site + "'");
            }
            world.caches.emplace(config.site, CacheNode(config));
        }
        const auto& jl = j.at("latency");
        world.latency.lan_open_s = jl.at("lan_open_s").get<double>();
        world.latency.wan_open_per_hop_s = jl.at("wan_open_per_hop_s").get<double>();
        world.latency.lan_bw_Bps = jl.at("lan_bw_Bps").get<double>();
        world.latency.wan_bw_Bps = jl.at("wan_bw_Bps").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    world.latency.validate();
    return world;
}

std::vector<EventOutcome> replay(const std::vector<AccessEvent>& events, const World& world,
                                 Mode mode) {
    world.latency.validate();
    const LatencyModel& lat = world.latency;
    auto caches = world.caches;  // fresh mutable state per run
    std::vector<EventOutcome> outcomes;
    outcomes.reserve(events.size());
    double prev_t = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const AccessEvent& event = events[i];
        if (i > 0 && event.t < prev_t) {
            throw ValidationError("trace order violated at event " + std::to_string(i) + " (t=" +
                                  std::to_string(event.t) + " after t=" + std::to_string(prev_t) +
                                  ")");
        }
        prev_t = event.t;
        const CatalogEntry& entry = world.catalog.at(event.lfn);
        if (event.bytes_read > entry.size_bytes) {
            throw ValidationError("event " + std::to_string(i) + ": bytes_read exceeds size of '" +
                                  event.lfn + "'");
        }
        EventOutcome outcome;
        outcome.event = event;
        outcome.mode = mode;
        const double local_read_s = static_cast<double>(event.bytes_read) / lat.lan_bw_Bps;
        const double wan_read_s = static_cast<double>(event.bytes_read) / lat.wan_bw_Bps;
        if (mode == Mode::Cached) {
            auto cache_it = caches.find(event.site);
            if (cache_it == caches.end()) {
                throw ValidationError("no cache configured for site '" + event.site + "'");
            }
            CacheNode& cache = cache_it->second;
            if (cache.lookup(event.lfn, event.t).has_value()) {
                outcome.result = ReadResult::Hit;
                outcome.read_time_s = lat.lan_open_s + local_read_s;
            } else {
                const ResolveTrace trace = resolve(world.topology, world.topology.root(),
                                                   event.lfn);
                const double open_s = lat.wan_open_per_hop_s * trace.depth_queried;
                if (trace.found()) {
                    // Store-and-forward: the cache pulls the whole file,
                    // then the client reads locally.
                    const std::uint64_t file_size = entry.size_bytes;
                    outcome.result = ReadResult::Miss;
                    outcome.read_time_s =
                        lat.lan_open_s + open_s +
                        static_cast<double>(file_size) / lat.wan_bw_Bps + local_read_s;
                    outcome.bytes_from_wan = file_size;
                    outcome.server = trace.server;
                    if (cache.can_admit(file_size)) {
                        cache.admit(event.lfn, file_size, event.t);
                    }
                } else {
                    outcome.result = ReadResult::Unavailable;
                    outcome.read_time_s = open_s;
                }
            }
        } else {
            const ResolveTrace trace = resolve(world.topology, world.topology.root(), event.lfn);
            const double open_s = lat.wan_open_per_hop_s * trace.depth_queried;
            if (trace.found()) {
                outcome.result = ReadResult::Miss;
                outcome.read_time_s = open_s + wan_read_s;
                outcome.bytes_from_wan = event.bytes_read;
                outcome.server = trace.server;
            } else {
                outcome.result = ReadResult::Unavailable;
                outcome.read_time_s = open_s;
            }
        }
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

Summary summarize(const std::vector<EventOutcome>& outcomes) {
    Summary summary;
    if (outcomes.empty()) {
        return summary;
    }
    std::uint64_t hits = 0;
    std::uint64_t found_misses = 0;
    std::uint64_t unavailable = 0;
    double total_time = 0;
    for (const auto& outcome : outcomes) {
        total_time += outcome.read_time_s;
        summary.total_bytes_from_wan += outcome.bytes_from_wan;
        switch (outcome.result) {
            case ReadResult::Hit:
                ++hits;
                summary.total_bytes_delivered += outcome.event.bytes_read;
                break;
            case ReadResult::Miss:
                ++found_misses;
                summary.total_bytes_delivered += outcome.event.bytes_read;
                break;
            default:
                ++unavailable;
                break;
        }
    }
    summary.avg_read_time_s = total_time / static_cast<double>(outcomes.size());
    if (hits + found_misses > 0) {
        summary.hit_rate =
            static_cast<double>(hits) / static_cast<double>(hits + found_misses);
    }
    summary.failure_rate = static_cast<double>(unavailable) / static_cast<double>(outcomes.size());
    return summary;
}

CompareResult compare_modes(const std::vector<AccessEvent>& events, const World& world) {
    if (events.empty()) {
        throw ValidationError("comparison undefined for an empty trace");
    }
    const Summary cached = summarize(replay(events, world, Mode::Cached));
    const Summary direct = summarize(replay(events, world, Mode::Direct));
    if (!(cached.avg_read_time_s > 0)) {
        throw ValidationError("ratio undefined: cached average read time is zero");
    }
    CompareResult result;
    result.avg_cached_s = cached.avg_read_time_s;
    result.avg_direct_s = direct.avg_read_time_s;
    result.ratio_direct_over_cached = direct.avg_read_time_s / cached.avg_read_time_s;
    return result;
}

}  // namespace xcsim
