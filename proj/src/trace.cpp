#include "xcsim/trace.hpp"

#include "xcsim/csv.hpp"
#include "xcsim/errors.hpp"

namespace xcsim {

std::vector<AccessEvent> load_trace(const std::string& path) {
    const auto rows = csv::read_rows(path, "t,site,lfn,bytes_read");
    std::vector<AccessEvent> events;
    events.reserve(rows.size());
    for (const auto& row : rows) {
        if (row.fields.size() != 4) {
            throw ParseError(path + ": line " + std::to_string(row.line_no) +
                             ": expected 4 columns, got " + std::to_string(row.fields.size()));
        }
        AccessEvent event;
        event.t = csv::parse_double(row.fields[0], row.line_no, "t");
        event.site = row.fields[1];
        event.lfn = row.fields[2];
        event.bytes_read = csv::parse_u64(row.fields[3], row.line_no, "bytes_read");
        if (event.lfn.empty()) {
            throw ParseError(path + ": line " + std::to_string(row.line_no) + ": empty lfn");
        }
        events.push_back(std::move(event));
    }
    return events;
}

}  // namespace xcsim
