#include "xcsim/monicron.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <unordered_set>

#include <json.hpp>

#include "xcsim/csv.hpp"
#include "xcsim/manifest.hpp"

namespace xcsim {

namespace {

void check_sorted_jobs(const std::vector<JobRecord>& jobs) {
    for (std::size_t i = 1; i < jobs.size(); ++i) {
        if (jobs[i].t < jobs[i - 1].t) {
            throw ValidationError("job stream not time-sorted at index " + std::to_string(i));
        }
    }
}

void check_sorted_accesses(const std::vector<AccessEvent>& accesses) {
    for (std::size_t i = 1; i < accesses.size(); ++i) {
        if (accesses[i].t < accesses[i - 1].t) {
            throw ValidationError("access stream not time-sorted at index " + std::to_string(i));
        }
    }
}

void check_job_invariants(const JobRecord& job, std::size_t index) {
    if (job.cpu_time_s < 0 || job.wall_time_s < job.cpu_time_s || job.read_time_s < 0) {
        throw ValidationError("job record " + std::to_string(index) +
                              ": requires wall_time_s >= cpu_time_s >= 0 and read_time_s >= 0");
    }
}

nlohmann::json to_json(const AggregateWindow& window) {
    return nlohmann::json{{"window", {{"start", window.window.start}, {"end", window.window.end}}},
                          {"failure_rate", window.failure_rate},
                          {"avg_read_speed_Bps", window.avg_read_speed_Bps},
                          {"cpu_efficiency", window.cpu_efficiency},
                          {"total_data_delivered_bytes", window.total_data_delivered_bytes},
                          {"unique_reads", window.unique_reads},
                          {"working_set_bytes", window.working_set_bytes},
                          {"n_jobs", window.n_jobs},
                          {"n_accesses", window.n_accesses},
                          {"undefined_flags", window.undefined_flags}};
}

AggregateWindow from_json(const nlohmann::json& j) {
    AggregateWindow window;
    window.window.start = j.at("window").at("start").get<double>();
    window.window.end = j.at("window").at("end").get<double>();
    window.failure_rate = j.at("failure_rate").get<double>();
    window.avg_read_speed_Bps = j.at("avg_read_speed_Bps").get<double>();
    window.cpu_efficiency = j.at("cpu_efficiency").get<double>();
    window.total_data_delivered_bytes = j.at("total_data_delivered_bytes").get<std::uint64_t>();
    window.unique_reads = j.at("unique_reads").get<std::uint64_t>();
    window.working_set_bytes = j.at("working_set_bytes").get<std::uint64_t>();
    window.n_jobs = j.at("n_jobs").get<std::uint64_t>();
    window.n_accesses = j.at("n_accesses").get<std::uint64_t>();
    window.undefined_flags = j.at("undefined_flags").get<std::vector<std::string>>();
    return window;
}

}  // namespace

std::vector<AggregateWindow> aggregate(const std::vector<JobRecord>& jobs,
                                       const std::vector<AccessEvent>& accesses,
                                       const Catalog& catalog, double interval_s) {
    if (!(interval_s > 0)) {
        throw ValidationError("aggregation interval must be positive");
    }
    check_sorted_jobs(jobs);
    check_sorted_accesses(accesses);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        check_job_invariants(jobs[i], i);
    }
    std::vector<AggregateWindow> windows;
    if (jobs.empty() && accesses.empty()) {
        return windows;
    }
    double earliest = std::numeric_limits<double>::infinity();
    double latest = -std::numeric_limits<double>::infinity();
    if (!jobs.empty()) {
        earliest = std::min(earliest, jobs.front().t);
        latest = std::max(latest, jobs.back().t);
    }
    if (!accesses.empty()) {
        earliest = std::min(earliest, accesses.front().t);
        latest = std::max(latest, accesses.back().t);
    }
    std::size_t job_idx = 0;
    std::size_t access_idx = 0;
    for (std::uint64_t k = 0;; ++k) {
        const double window_start = earliest + static_cast<double>(k) * interval_s;
        const double window_end = earliest + static_cast<double>(k + 1) * interval_s;
        if (window_start > latest) {
            break;
        }
        if (!(window_start < window_end)) {
            throw ValidationError("interval too small relative to stream timestamps");
        }
        AggregateWindow window;
        window.window = Window{window_start, window_end};

        double read_time_sum = 0;
        double cpu_sum = 0;
        double wall_sum = 0;
        std::uint64_t job_bytes = 0;
        std::uint64_t failed_jobs = 0;
        while (job_idx < jobs.size() && jobs[job_idx].t < window_end) {
            const JobRecord& job = jobs[job_idx];
            ++window.n_jobs;
            if (!job.success) {
                ++failed_jobs;
            }
            job_bytes += job.bytes_read;
            read_time_sum += job.read_time_s;
            cpu_sum += job.cpu_time_s;
            wall_sum += job.wall_time_s;
            ++job_idx;
        }

        const std::size_t first_access = access_idx;
        std::unordered_set<std::string> distinct_lfns;
        while (access_idx < accesses.size() && accesses[access_idx].t < window_end) {
            const AccessEvent& access = accesses[access_idx];
            ++window.n_accesses;
            window.total_data_delivered_bytes += access.bytes_read;
            distinct_lfns.insert(access.lfn);
            ++access_idx;
        }
        window.unique_reads = distinct_lfns.size();
        window.working_set_bytes =
            working_set_file(std::span<const AccessEvent>(accesses.data() + first_access,
                                                          access_idx - first_access),
                             catalog, window.window)
                .bytes;

        if (window.n_jobs > 0) {
            window.failure_rate =
                static_cast<double>(failed_jobs) / static_cast<double>(window.n_jobs);
        } else {
            window.undefined_flags.push_back("failure_rate");
        }
        if (read_time_sum > 0) {
            window.avg_read_speed_Bps = static_cast<double>(job_bytes) / read_time_sum;
        } else {
            window.undefined_flags.push_back("avg_read_speed_Bps");
        }
        if (wall_sum > 0) {
            window.cpu_efficiency = cpu_sum / wall_sum;
        } else {
            window.undefined_flags.push_back("cpu_efficiency");
        }
        windows.push_back(std::move(window));
    }
    return windows;
}

std::size_t persist_aggregates(const std::vector<AggregateWindow>& aggregates,
                               const std::string& path,
                               std::optional<std::size_t> keep_last_n) {
    std::size_t first = 0;
    if (keep_last_n.has_value() && *keep_last_n < aggregates.size()) {
        first = aggregates.size() - *keep_last_n;
    }
    std::string content;
    for (std::size_t i = first; i < aggregates.size(); ++i) {
        content += to_json(aggregates[i]).dump();
        content += '\n';
    }
    write_text_atomic(path, content);
    return aggregates.size() - first;
}

std::vector<AggregateWindow> load_aggregates(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::vector<AggregateWindow> aggregates;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        try {
            aggregates.push_back(from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path + ": line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return aggregates;
}

std::vector<JobRecord> load_jobs(const std::string& path) {
    const auto rows =
        csv::read_rows(path, "t,site,success,bytes_read,read_time_s,cpu_time_s,wall_time_s");
    std::vector<JobRecord> jobs;
    jobs.reserve(rows.size());
    for (const auto& row : rows) {
        if (row.fields.size() != 7) {
            throw ParseError(path + ": line " + std::to_string(row.line_no) +
                             ": expected 7 columns, got " + std::to_string(row.fields.size()));
        }
        JobRecord job;
        job.t = csv::parse_double(row.fields[0], row.line_no, "t");
        job.site = row.fields[1];
        if (row.fields[2] == "0") {
            job.success = false;
        } else if (row.fields[2] == "1") {
            job.success = true;
        } else {
            throw ParseError(path + ": line " + std::to_string(row.line_no) +
                             ": column 'success' must be 0 or 1, got '" + row.fields[2] + "'");
        }
        job.bytes_read = csv::parse_u64(row.fields[3], row.line_no, "bytes_read");
        job.read_time_s = csv::parse_double(row.fields[4], row.line_no, "read_time_s");
        job.cpu_time_s = csv::parse_double(row.fields[5], row.line_no, "cpu_time_s");
        job.wall_time_s = csv::parse_double(row.fields[6], row.line_no, "wall_time_s");
        if (job.cpu_time_s < 0 || job.wall_time_s < job.cpu_time_s || job.read_time_s < 0) {
            throw ParseError(path + ": line " + std::to_string(row.line_no) +
                             ": requires wall_time_s >= cpu_time_s >= 0 and read_time_s >= 0");
        }
        jobs.push_back(std::move(job));
    }
    return jobs;
}

}  // namespace xcsim
