#include "xcsim/catalog.hpp"

#include <utility>

#include "xcsim/csv.hpp"

namespace xcsim {

namespace {

std::vector<std::string> split_components(const std::string& name) {
    std::string s = name;
    if (!s.empty() && s.front() == '/') {
        s.erase(0, 1);
    }
    std::vector<std::string> parts;
    std::string current;
    for (char c : s) {
        if (c == '/') {
            parts.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    parts.push_back(std::move(current));
    return parts;
}

}  // namespace

std::string tier_of(const std::string& dataset_name) {
    const auto parts = split_components(dataset_name);
    bool ok = parts.size() == 3;
    for (const auto& p : parts) {
        ok = ok && !p.empty();
    }
    if (!ok) {
        throw ValidationError("dataset name '" + dataset_name +
                              "' must have exactly three non-empty slash-separated components");
    }
    return parts[2];
}

Catalog Catalog::from_entries(std::vector<CatalogEntry> entries) {
    Catalog catalog;
    for (auto& entry : entries) {
        const std::string expected_tier = tier_of(entry.dataset);
        if (entry.tier != expected_tier) {
            throw ValidationError("entry '" + entry.lfn + "': tier '" + entry.tier +
                                  "' does not match dataset tier '" + expected_tier + "'");
        }
        auto [it, inserted] = catalog.entries_.emplace(entry.lfn, entry);
        if (!inserted) {
            throw ValidationError("duplicate lfn '" + entry.lfn + "'");
        }
        catalog.dataset_sizes_[entry.dataset] += entry.size_bytes;
    }
    return catalog;
}

const CatalogEntry* Catalog::find(const std::string& lfn) const {
    auto it = entries_.find(lfn);
    return it == entries_.end() ? nullptr : &it->second;
}

const CatalogEntry& Catalog::at(const std::string& lfn) const {
    const CatalogEntry* entry = find(lfn);
    if (entry == nullptr) {
        throw UnknownFileError("unknown lfn '" + lfn + "'");
    }
    return *entry;
}

Catalog load_catalog(const std::string& path) {
    const auto rows = csv::read_rows(path, "lfn,dataset,tier,size_bytes");
    std::vector<CatalogEntry> entries;
    entries.reserve(rows.size());
    std::set<std::string> seen;
    for (const auto& row : rows) {
        if (row.fields.size() != 4) {
            throw ParseError(path + ": line " + std::to_string(row.line_no) + ": expected 4 " +
                             "columns, got " + std::to_string(row.fields.size()));
        }
        CatalogEntry entry;
        entry.lfn = row.fields[0];
        entry.dataset = row.fields[1];
        entry.tier = row.fields[2];
        entry.size_bytes = csv::parse_u64(row.fields[3], row.line_no, "size_bytes");
        if (entry.lfn.empty()) {
            throw ParseError(path + ": line " + std::to_string(row.line_no) + ": empty lfn");
        }
        std::string expected_tier;
        try {
            expected_tier = tier_of(entry.dataset);
        } catch (const ValidationError& e) {
            throw ParseError(path + ": line " + std::to_string(row.line_no) + ": " + e.what());
        }
        if (entry.tier != expected_tier) {
            throw ParseError(path + ": line " + std::to_string(row.line_no) + ": tier '" +
                             entry.tier + "' does not match dataset tier '" + expected_tier + "'");
        }
        if (!seen.insert(entry.lfn).second) {
            throw ValidationError(path + ": line " + std::to_string(row.line_no) +
                                  ": duplicate lfn '" + entry.lfn + "'");
        }
        entries.push_back(std::move(entry));
    }
    return Catalog::from_entries(std::move(entries));
}

std::uint64_t total_tier_size(const Catalog& catalog, const std::set<std::string>& tiers) {
    std::uint64_t total = 0;
    for (const auto& [lfn, entry] : catalog.entries()) {
        if (tiers.count(entry.tier) > 0) {
            total += entry.size_bytes;
        }
    }
    return total;
}

std::map<std::string, double> job_tier_share(const std::vector<AccessEvent>& events,
                                             const Catalog& catalog) {
    std::map<std::string, double> share;
    if (events.empty()) {
        return share;
    }
    std::map<std::string, std::uint64_t> counts;
    for (const auto& event : events) {
        counts[catalog.at(event.lfn).tier] += 1;
    }
    const double total = static_cast<double>(events.size());
    for (const auto& [tier, count] : counts) {
        share[tier] = static_cast<double>(count) / total;
    }
    return share;
}

}  // namespace xcsim
