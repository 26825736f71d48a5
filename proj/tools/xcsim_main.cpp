#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xcsim/analytics.hpp"
#include "xcsim/catalog.hpp"
#include "xcsim/csv.hpp"
#include "xcsim/errors.hpp"
#include "xcsim/manifest.hpp"
#include "xcsim/monicron.hpp"
#include "xcsim/simulate.hpp"
#include "xcsim/trace.hpp"
#include "xcsim/version.hpp"

namespace {

using namespace xcsim;

std::string fmt(double v) {
    return csv::format_double(v);
}

// Loads the world and records the three content digests that pin a run.
World load_world_for_manifest(const std::string& world_path, RunManifest& manifest) {
    manifest.add_input("world", world_path);
    World world = load_world(world_path);
    // Re-derive the referenced paths for the manifest.
    std::ifstream in(world_path);
    nlohmann::json j = nlohmann::json::parse(in);
    const auto base = std::filesystem::path(world_path).parent_path();
    auto resolve_path = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).string();
    };
    manifest.add_input("topology", resolve_path(j.at("topology").get<std::string>()));
    manifest.add_input("catalog", resolve_path(j.at("catalog").get<std::string>()));
    return world;
}

std::string outcomes_csv(const std::vector<EventOutcome>& outcomes) {
    std::string out = "t,site,lfn,bytes_read,mode,result,read_time_s,bytes_from_wan,server\n";
    for (const auto& o : outcomes) {
        out += fmt(o.event.t);
        out += ',' + o.event.site;
        out += ',' + o.event.lfn;
        out += ',' + std::to_string(o.event.bytes_read);
        out += ',';
        out += to_string(o.mode);
        out += ',';
        out += to_string(o.result);
        out += ',' + fmt(o.read_time_s);
        out += ',' + std::to_string(o.bytes_from_wan);
        out += ',' + o.server.value_or("");
        out += '\n';
    }
    return out;
}

std::string summary_json(const Summary& summary, Mode mode, std::size_t n_events) {
    nlohmann::json j;
    j["mode"] = to_string(mode);
    j["events"] = n_events;
    j["avg_read_time_s"] = summary.avg_read_time_s;
    j["read_time_basis"] = "per-read";
    j["total_bytes_delivered"] = summary.total_bytes_delivered;
    j["total_bytes_from_wan"] = summary.total_bytes_from_wan;
    j["hit_rate"] = summary.hit_rate;
    j["failure_rate"] = summary.failure_rate;
    return j.dump(2) + "\n";
}

std::string workset_csv(const std::vector<WorkingSetReport>& reports) {
    std::string out = "window_start,window_end,granularity,bytes,unique_count\n";
    for (const auto& r : reports) {
        out += fmt(r.window.start);
        out += ',' + fmt(r.window.end);
        out += ',';
        out += to_string(r.granularity);
        out += ',' + std::to_string(r.bytes);
        out += ',' + std::to_string(r.unique_count);
        out += '\n';
    }
    return out;
}

struct HardwareEntry {
    std::string site;
    CapacityEntry plan;
};

std::vector<HardwareEntry> load_hardware(const std::string& path) {
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
    std::vector<HardwareEntry> entries;
    try {
        for (const auto& je : j.at("nodes")) {
            HardwareEntry entry;
            entry.site = je.at("site").get<std::string>();
            entry.plan.node_count = je.at("count").get<std::uint64_t>();
            entry.plan.disks_per_node = je.at("disks_per_node").get<std::uint64_t>();
            entry.plan.disk_tb = je.at("disk_tb").get<std::uint64_t>();
            entries.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return entries;
}

int cmd_replay(const std::string& world_path, const std::string& trace_path,
               const std::string& mode_name, const std::string& out_path) {
    RunManifest manifest;
    manifest.command = "replay";
    manifest.version = kVersion;
    manifest.add_input("trace", trace_path);
    const World world = load_world_for_manifest(world_path, manifest);
    manifest.flags = {{"mode", mode_name}, {"out", out_path}};
    const std::string summary_path = out_path + ".summary.json";
    const std::string manifest_path = out_path + ".manifest.json";
    manifest.output_paths = {out_path, summary_path};

    const Mode mode = mode_name == "direct" ? Mode::Direct : Mode::Cached;
    const auto events = load_trace(trace_path);
    const auto outcomes = replay(events, world, mode);
    const Summary summary = summarize(outcomes);

    write_text_atomic(out_path, outcomes_csv(outcomes));
    write_text_atomic(summary_path, summary_json(summary, mode, events.size()));
    write_text_atomic(manifest_path, manifest.to_json());
    return 0;
}

int cmd_compare(const std::string& world_path, const std::string& trace_path,
                const std::string& out_path) {
    RunManifest manifest;
    manifest.command = "compare";
    manifest.version = kVersion;
    manifest.add_input("trace", trace_path);
    const World world = load_world_for_manifest(world_path, manifest);
    manifest.flags = {{"out", out_path}};
    manifest.output_paths = {out_path};

    const auto events = load_trace(trace_path);
    const CompareResult result = compare_modes(events, world);

    std::string csv_text = "avg_cached_s,avg_direct_s,ratio_direct_over_cached\n";
    csv_text += fmt(result.avg_cached_s) + ',' + fmt(result.avg_direct_s) + ',' +
                fmt(result.ratio_direct_over_cached) + '\n';
    write_text_atomic(out_path, csv_text);
    write_text_atomic(out_path + ".manifest.json", manifest.to_json());
    return 0;
}

int cmd_workset(const std::string& catalog_path, const std::string& trace_path,
                const std::string& granularity_name, std::optional<double> window_start,
                std::optional<double> window_end, std::optional<double> span_s,
                std::optional<double> step_s, const std::optional<std::string>& tier,
                const std::string& out_path) {
    RunManifest manifest;
    manifest.command = "workset";
    manifest.version = kVersion;
    manifest.add_input("trace", trace_path);
    manifest.add_input("catalog", catalog_path);
    manifest.flags = {{"granularity", granularity_name}, {"out", out_path}};
    if (tier.has_value()) {
        manifest.flags["tier"] = *tier;
    }
    manifest.output_paths = {out_path};

    const Catalog catalog = load_catalog(catalog_path);
    const auto events = load_trace(trace_path);
    const Granularity granularity =
        granularity_name == "dataset" ? Granularity::Dataset : Granularity::File;

    std::vector<WorkingSetReport> reports;
    const bool single = window_start.has_value() || window_end.has_value();
    const bool rolling = span_s.has_value() || step_s.has_value();
    if (single && rolling) {
        throw UsageError("pass either --window-start/--window-end or --span/--step, not both");
    }
    if (single) {
        if (!window_start.has_value() || !window_end.has_value()) {
            throw UsageError("--window-start and --window-end must be given together");
        }
        manifest.flags["window_start"] = fmt(*window_start);
        manifest.flags["window_end"] = fmt(*window_end);
        const Window window{*window_start, *window_end};
        reports.push_back(granularity == Granularity::File
                              ? working_set_file(events, catalog, window, tier)
                              : working_set_dataset(events, catalog, window, tier));
    } else {
        const double span = span_s.value_or(kDefaultSpanS);
        const double step = step_s.value_or(kDefaultStepS);
        manifest.flags["span"] = fmt(span);
        manifest.flags["step"] = fmt(step);
        manifest.flags["window_alignment"] = "first-event";
        reports = rolling_working_set(events, catalog, span, step, granularity, tier);
    }

    write_text_atomic(out_path, workset_csv(reports));
    write_text_atomic(out_path + ".manifest.json", manifest.to_json());
    return 0;
}

int cmd_capacity(const std::string& hardware_path, const std::optional<std::string>& out_path) {
    RunManifest manifest;
    manifest.command = "capacity";
    manifest.version = kVersion;
    manifest.add_input("hardware", hardware_path);

    const auto entries = load_hardware(hardware_path);
    // Per-site subtotals in first-appearance order, then the grand total.
    std::vector<std::string> site_order;
    std::map<std::string, std::vector<CapacityEntry>> by_site;
    std::vector<CapacityEntry> all;
    for (const auto& entry : entries) {
        if (by_site.find(entry.site) == by_site.end()) {
            site_order.push_back(entry.site);
        }
        by_site[entry.site].push_back(entry.plan);
        all.push_back(entry.plan);
    }
    constexpr std::uint64_t kBytesPerTb = 1000ull * 1000ull * 1000ull * 1000ull;
    std::string csv_text = "site,total_tb,total_bytes\n";
    for (const auto& site : site_order) {
        const std::uint64_t bytes = capacity_plan(by_site[site]);
        csv_text += site + ',' + std::to_string(bytes / kBytesPerTb) + ',' +
                    std::to_string(bytes) + '\n';
    }
    const std::uint64_t total = all.empty() ? 0 : capacity_plan(all);
    csv_text += "TOTAL," + std::to_string(total / kBytesPerTb) + ',' + std::to_string(total) + '\n';

    std::cout << csv_text;
    if (out_path.has_value()) {
        manifest.flags["out"] = *out_path;
        manifest.output_paths = {*out_path};
        write_text_atomic(*out_path, csv_text);
        write_text_atomic(*out_path + ".manifest.json", manifest.to_json());
    }
    return 0;
}

int cmd_aggregate(const std::string& catalog_path, const std::string& trace_path,
                  const std::string& jobs_path, double interval_s,
                  std::optional<std::size_t> keep_last, const std::string& out_path) {
    RunManifest manifest;
    manifest.command = "aggregate";
    manifest.version = kVersion;
    manifest.add_input("trace", trace_path);
    manifest.add_input("catalog", catalog_path);
    manifest.add_input("jobs", jobs_path);
    manifest.flags = {{"interval", fmt(interval_s)},
                      {"out", out_path},
                      {"window_alignment", "first-record"}};
    if (keep_last.has_value()) {
        manifest.flags["keep_last"] = std::to_string(*keep_last);
    }
    manifest.output_paths = {out_path};

    const Catalog catalog = load_catalog(catalog_path);
    const auto accesses = load_trace(trace_path);
    const auto jobs = load_jobs(jobs_path);
    const auto aggregates = aggregate(jobs, accesses, catalog, interval_s);
    persist_aggregates(aggregates, out_path, keep_last);
    write_text_atomic(out_path + ".manifest.json", manifest.to_json());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Federated cache trace simulator and analytics"};
    app.set_version_flag("--version", std::string(xcsim::kVersion));
    app.require_subcommand(1);

    std::string world_path;
    std::string trace_path;
    std::string catalog_path;
    std::string jobs_path;
    std::string hardware_path;
    std::string out_path;
    std::string mode_name = "cached";
    std::string granularity_name = "file";
    std::optional<double> window_start;
    std::optional<double> window_end;
    std::optional<double> span_s;
    std::optional<double> step_s;
    std::optional<std::string> tier;
    std::optional<std::string> capacity_out;
    std::optional<std::size_t> keep_last;
    double interval_s = 3600;

    CLI::App* replay_cmd =
        app.add_subcommand("replay", "Replay a trace against a world and write outcomes");
    replay_cmd->add_option("--world", world_path, "World config JSON")->required();
    replay_cmd->add_option("--trace", trace_path, "Access trace CSV")->required();
    replay_cmd->add_option("--mode", mode_name, "cached or direct")
        ->check(CLI::IsMember({"cached", "direct"}));
    replay_cmd->add_option("--out", out_path, "Outcomes CSV path")->required();

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Replay in cached and direct modes and compare averages");
    compare_cmd->add_option("--world", world_path, "World config JSON")->required();
    compare_cmd->add_option("--trace", trace_path, "Access trace CSV")->required();
    compare_cmd->add_option("--out", out_path, "Comparison CSV path")->required();

    CLI::App* workset_cmd =
        app.add_subcommand("workset", "Working-set reports over a trace (single or rolling)");
    workset_cmd->add_option("--catalog", catalog_path, "Catalog CSV")->required();
    workset_cmd->add_option("--trace", trace_path, "Access trace CSV")->required();
    workset_cmd->add_option("--granularity", granularity_name, "file or dataset")
        ->check(CLI::IsMember({"file", "dataset"}));
    workset_cmd->add_option("--window-start", window_start, "Window start (seconds, inclusive)");
    workset_cmd->add_option("--window-end", window_end, "Window end (seconds, exclusive)");
    workset_cmd->add_option("--span", span_s, "Rolling window span in seconds (default 4 weeks)");
    workset_cmd->add_option("--step", step_s, "Rolling stride in seconds (default 1 week)");
    workset_cmd->add_option("--tier", tier, "Restrict to one data tier");
    workset_cmd->add_option("--out", out_path, "Report CSV path")->required();

    CLI::App* capacity_cmd =
        app.add_subcommand("capacity", "Total provisioned bytes from a hardware spec");
    capacity_cmd->add_option("--hardware", hardware_path, "Hardware spec JSON")->required();
    capacity_cmd->add_option("--out", capacity_out, "Also write the table to this CSV path");

    CLI::App* aggregate_cmd =
        app.add_subcommand("aggregate", "Windowed metric aggregation of job and access streams");
    aggregate_cmd->add_option("--catalog", catalog_path, "Catalog CSV")->required();
    aggregate_cmd->add_option("--trace", trace_path, "Access trace CSV")->required();
    aggregate_cmd->add_option("--jobs", jobs_path, "Job stream CSV")->required();
    aggregate_cmd->add_option("--interval", interval_s, "Window length in seconds")->required();
    aggregate_cmd->add_option("--keep-last", keep_last, "Persist only the last N windows");
    aggregate_cmd->add_option("--out", out_path, "Aggregates JSON Lines path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (replay_cmd->parsed()) {
            return cmd_replay(world_path, trace_path, mode_name, out_path);
        }
        if (compare_cmd->parsed()) {
            return cmd_compare(world_path, trace_path, out_path);
        }
        if (workset_cmd->parsed()) {
            return cmd_workset(catalog_path, trace_path, granularity_name, window_start,
                               window_end, span_s, step_s, tier, out_path);
        }
        if (capacity_cmd->parsed()) {
            return cmd_capacity(hardware_path, capacity_out);
        }
        if (aggregate_cmd->parsed()) {
            return cmd_aggregate(catalog_path, trace_path, jobs_path, interval_s, keep_last,
                                 out_path);
        }
    } catch (const xcsim::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const xcsim::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
