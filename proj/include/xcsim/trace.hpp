#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xcsim {

// One read from the access log. Timestamps are seconds of virtual time and
// must be non-decreasing within a trace that gets replayed.
struct AccessEvent {
    double t = 0;
    std::string site;
    std::string lfn;
    std::uint64_t bytes_read = 0;
};

// Loads a trace CSV with header `t,site,lfn,bytes_read`. Ordering is not
// enforced here; replay rejects out-of-order traces, the analytics
// operations accept any order.
std::vector<AccessEvent> load_trace(const std::string& path);

}  // namespace xcsim
