#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "xcsim/errors.hpp"
#include "xcsim/trace.hpp"

namespace xcsim {

// One file in the namespace. `tier` always equals the tier component of
// `dataset` (third slash-separated component); enforced on construction.
struct CatalogEntry {
    std::string lfn;
    std::string dataset;
    std::string tier;
    std::uint64_t size_bytes = 0;
};

// File/dataset namespace. Immutable once built; all queries are pure and
// safe for unrestricted concurrent use.
class Catalog {
public:
    Catalog() = default;

    // Validates uniqueness of lfns and tier/dataset consistency.
    static Catalog from_entries(std::vector<CatalogEntry> entries);

    const CatalogEntry* find(const std::string& lfn) const;
    // Throws UnknownFileError when the lfn is absent.
    const CatalogEntry& at(const std::string& lfn) const;

    const std::unordered_map<std::string, CatalogEntry>& entries() const { return entries_; }
    const std::unordered_map<std::string, std::uint64_t>& dataset_sizes() const {
        return dataset_sizes_;
    }
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, CatalogEntry> entries_;
    std::unordered_map<std::string, std::uint64_t> dataset_sizes_;
};

// Loads a catalog CSV with header `lfn,dataset,tier,size_bytes`.
Catalog load_catalog(const std::string& path);

// Extracts the data tier from a dataset name of the form
// "/primary/processed/TIER" (the leading slash is optional). Throws
// ValidationError unless there are exactly three non-empty components.
std::string tier_of(const std::string& dataset_name);

// Total bytes over entries whose tier is in `tiers`. Unknown tiers
// contribute nothing.
std::uint64_t total_tier_size(const Catalog& catalog, const std::set<std::string>& tiers);

// Fraction of events per data tier; empty input yields an empty map.
// Throws UnknownFileError for an event whose lfn is not in the catalog.
std::map<std::string, double> job_tier_share(const std::vector<AccessEvent>& events,
                                             const Catalog& catalog);

}  // namespace xcsim
