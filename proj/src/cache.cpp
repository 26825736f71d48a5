#include "xcsim/cache.hpp"

#include <cmath>

namespace xcsim {

Disk::Disk(std::uint64_t capacity_bytes) : capacity_(capacity_bytes) {
    if (capacity_ == 0) {
        throw ValidationError("disk capacity must be positive");
    }
}

double Disk::used_fraction() const {
    return static_cast<double>(used_) / static_cast<double>(capacity_);
}

std::optional<std::uint64_t> Disk::size_of(const std::string& lfn) const {
    auto it = resident_.find(lfn);
    if (it == resident_.end()) {
        return std::nullopt;
    }
    return it->second.size_bytes;
}

std::optional<double> Disk::last_access_of(const std::string& lfn) const {
    auto it = resident_.find(lfn);
    if (it == resident_.end()) {
        return std::nullopt;
    }
    return it->second.last_access;
}

std::vector<std::string> Disk::resident_lfns() const {
    std::vector<std::string> out;
    out.reserve(resident_.size());
    for (const auto& [lfn, stamp] : resident_) {
        out.push_back(lfn);
    }
    return out;
}

void Disk::insert(const std::string& lfn, std::uint64_t size_bytes, double now) {
    if (failed_) {
        throw ValidationError("cannot insert into failed disk");
    }
    if (resident_.count(lfn) > 0) {
        throw ValidationError("file '" + lfn + "' already resident on this disk");
    }
    if (used_ + size_bytes > capacity_) {
        throw ValidationError("inserting '" + lfn + "' would exceed disk capacity");
    }
    resident_.emplace(lfn, Stamp{size_bytes, now});
    by_age_.emplace(now, lfn);
    used_ += size_bytes;
}

bool Disk::touch(const std::string& lfn, double now) {
    auto it = resident_.find(lfn);
    if (it == resident_.end()) {
        return false;
    }
    by_age_.erase({it->second.last_access, lfn});
    it->second.last_access = now;
    by_age_.emplace(now, lfn);
    return true;
}

std::vector<std::string> Disk::evict_while_above(std::uint64_t target_used) {
    std::vector<std::string> evicted;
    while (used_ > target_used && !by_age_.empty()) {
        const auto oldest = by_age_.begin();
        const std::string lfn = oldest->second;
        auto it = resident_.find(lfn);
        used_ -= it->second.size_bytes;
        by_age_.erase(oldest);
        resident_.erase(it);
        evicted.push_back(lfn);
    }
    return evicted;
}

std::vector<std::string> Disk::purge(double low_watermark) {
    if (failed_) {
        throw ValidationError("cannot purge a failed disk");
    }
    // used > low*capacity with integer `used` is equivalent to comparing
    // against the floor of the real threshold.
    const double threshold = low_watermark * static_cast<double>(capacity_);
    return evict_while_above(static_cast<std::uint64_t>(std::floor(threshold)));
}

std::vector<std::string> Disk::make_room(std::uint64_t incoming_bytes) {
    if (failed_) {
        throw ValidationError("cannot make room on a failed disk");
    }
    if (incoming_bytes > capacity_) {
        throw ValidationError("file larger than disk capacity");
    }
    return evict_while_above(capacity_ - incoming_bytes);
}

std::vector<std::string> Disk::fail() {
    if (failed_) {
        throw ValidationError("disk already failed");
    }
    failed_ = true;
    std::vector<std::string> lost = resident_lfns();
    resident_.clear();
    by_age_.clear();
    used_ = 0;
    return lost;
}

CacheNode::CacheNode(CacheConfig config)
    : high_(config.high_watermark), low_(config.low_watermark), site_(std::move(config.site)) {
    if (!(low_ > 0.0 && low_ < high_ && high_ <= 1.0)) {
        throw ValidationError("watermarks must satisfy 0 < low < high <= 1 (got low=" +
                              std::to_string(low_) + ", high=" + std::to_string(high_) + ")");
    }
    disks_.reserve(config.disk_capacities.size());
    for (std::uint64_t capacity : config.disk_capacities) {
        disks_.emplace_back(capacity);
    }
}

Disk& CacheNode::disk_at(std::size_t index) {
    if (index >= disks_.size()) {
        throw ValidationError("unknown disk index " + std::to_string(index) + " (node has " +
                              std::to_string(disks_.size()) + " disks)");
    }
    return disks_[index];
}

void CacheNode::forget(const std::vector<std::string>& lfns) {
    for (const auto& lfn : lfns) {
        location_.erase(lfn);
    }
}

std::optional<std::size_t> CacheNode::resident_disk(const std::string& lfn) const {
    auto it = location_.find(lfn);
    if (it == location_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<std::size_t> CacheNode::lookup(const std::string& lfn, double now) {
    auto it = location_.find(lfn);
    if (it == location_.end()) {
        return std::nullopt;
    }
    disks_[it->second].touch(lfn, now);
    return it->second;
}

bool CacheNode::can_admit(std::uint64_t size_bytes) const {
    for (const Disk& disk : disks_) {
        if (!disk.failed() && disk.capacity_bytes() >= size_bytes) {
            return true;
        }
    }
    return false;
}

std::size_t CacheNode::admit(const std::string& lfn, std::uint64_t size_bytes, double now) {
    if (location_.count(lfn) > 0) {
        throw ValidationError("duplicate admission of '" + lfn + "'");
    }
    bool any_alive = false;
    bool any_fits = false;
    std::size_t chosen = 0;
    std::uint64_t best_free = 0;
    for (std::size_t i = 0; i < disks_.size(); ++i) {
        const Disk& disk = disks_[i];
        if (disk.failed()) {
            continue;
        }
        any_alive = true;
        if (disk.capacity_bytes() < size_bytes) {
            continue;
        }
        const std::uint64_t free = disk.capacity_bytes() - disk.used_bytes();
        if (!any_fits || free > best_free) {
            chosen = i;
            best_free = free;
        }
        any_fits = true;
    }
    if (!any_alive) {
        throw ValidationError("no usable disk: every disk of this node has failed");
    }
    if (!any_fits) {
        throw ValidationError("unstorable file '" + lfn + "' (" + std::to_string(size_bytes) +
                              " bytes exceeds every non-failed disk capacity)");
    }
    Disk& disk = disks_[chosen];
    const double high_threshold = high_ * static_cast<double>(disk.capacity_bytes());
    if (static_cast<double>(disk.used_bytes() + size_bytes) > high_threshold) {
        forget(disk.purge(low_));
    }
    if (disk.used_bytes() + size_bytes > disk.capacity_bytes()) {
        forget(disk.make_room(size_bytes));
    }
    disk.insert(lfn, size_bytes, now);
    location_[lfn] = chosen;
    return chosen;
}

std::vector<std::string> CacheNode::purge_disk(std::size_t disk_index) {
    auto evicted = disk_at(disk_index).purge(low_);
    forget(evicted);
    return evicted;
}

std::vector<std::string> CacheNode::fail_disk(std::size_t disk_index) {
    auto lost = disk_at(disk_index).fail();
    forget(lost);
    return lost;
}

}  // namespace xcsim
