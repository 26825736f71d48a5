#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xcsim/errors.hpp"

namespace xcsim {

// One JBOD member: an independent whole-file store with recency stamps.
// No striping or redundancy across disks; losing a disk loses exactly its
// resident files.
class Disk {
public:
    explicit Disk(std::uint64_t capacity_bytes);

    std::uint64_t capacity_bytes() const { return capacity_; }
    std::uint64_t used_bytes() const { return used_; }
    double used_fraction() const;
    bool failed() const { return failed_; }
    std::size_t file_count() const { return resident_.size(); }
    bool resident(const std::string& lfn) const { return resident_.count(lfn) > 0; }
    std::optional<std::uint64_t> size_of(const std::string& lfn) const;
    std::optional<double> last_access_of(const std::string& lfn) const;
    std::vector<std::string> resident_lfns() const;  // sorted

    // Stores a file; the caller must have made room. Throws ValidationError
    // on duplicates, capacity overflow, or a failed disk.
    void insert(const std::string& lfn, std::uint64_t size_bytes, double now);

    // Refreshes the recency stamp; false if the lfn is not resident.
    bool touch(const std::string& lfn, double now);

    // Evicts least-recently-used files (ties broken by smallest lfn) until
    // used <= low_watermark * capacity. Returns evicted lfns in eviction
    // order. Throws ValidationError on a failed disk.
    std::vector<std::string> purge(double low_watermark);

    // Further LRU eviction until `incoming_bytes` fits under the hard
    // capacity bound. Same ordering rule as purge.
    std::vector<std::string> make_room(std::uint64_t incoming_bytes);

    // Marks the disk failed and drops its contents; returns the lost lfns
    // (sorted). The disk stays usable for nothing until replaced.
    std::vector<std::string> fail();

private:
    std::vector<std::string> evict_while_above(std::uint64_t target_used);

    struct Stamp {
        std::uint64_t size_bytes = 0;
        double last_access = 0;
    };

    std::uint64_t capacity_ = 0;
    std::uint64_t used_ = 0;
    bool failed_ = false;
    std::map<std::string, Stamp> resident_;
    std::set<std::pair<double, std::string>> by_age_;  // (last_access, lfn)
};

struct CacheConfig {
    std::vector<std::uint64_t> disk_capacities;
    double high_watermark = 0.95;
    double low_watermark = 0.90;
    std::string site;
};

// One caching proxy node: an ordered set of independent disks with
// watermark-based LRU eviction. A mutable state machine owned by one
// logical driver at a time; never mutate concurrently.
class CacheNode {
public:
    explicit CacheNode(CacheConfig config);

    const std::string& site() const { return site_; }
    double high_watermark() const { return high_; }
    double low_watermark() const { return low_; }
    const std::vector<Disk>& disks() const { return disks_; }

    // Hit iff the lfn resides on a non-failed disk; a hit refreshes the
    // file's recency stamp to `now`. Returns the disk index on hit.
    std::optional<std::size_t> lookup(const std::string& lfn, double now);

    // Residence query without touching recency.
    std::optional<std::size_t> resident_disk(const std::string& lfn) const;

    // True when some non-failed disk could ever hold a file of this size.
    bool can_admit(std::uint64_t size_bytes) const;

    // Places the file on the non-failed disk with the most free bytes among
    // those large enough (tie-break: lowest index). Runs a watermark purge
    // first when the placement would exceed high_watermark * capacity, and
    // keeps evicting if the file still does not fit under the capacity.
    // Returns the chosen disk index.
    std::size_t admit(const std::string& lfn, std::uint64_t size_bytes, double now);

    // Watermark purge of one disk; returns evicted lfns in eviction order.
    std::vector<std::string> purge_disk(std::size_t disk_index);

    // Marks a disk failed; returns the lost lfns. Other disks are untouched
    // and lost files simply miss until re-admitted.
    std::vector<std::string> fail_disk(std::size_t disk_index);

    std::size_t resident_count() const { return location_.size(); }

private:
    Disk& disk_at(std::size_t index);
    void forget(const std::vector<std::string>& lfns);

    std::vector<Disk> disks_;
    double high_ = 0.95;
    double low_ = 0.90;
    std::string site_;
    std::map<std::string, std::size_t> location_;  // lfn -> disk index
};

}  // namespace xcsim
