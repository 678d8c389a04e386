#include "crlp/report.hpp"

#include <algorithm>
#include <tuple>

namespace crlp {

void Report::sort() {
    std::stable_sort(records.begin(), records.end(),
                     [](const ReportRecord& a, const ReportRecord& b) {
                         return std::tie(a.family, a.machine, a.n, a.fuel, a.kind) <
                                std::tie(b.family, b.machine, b.n, b.fuel, b.kind);
                     });
}

std::string Report::to_jsonl(bool with_wall_time) const {
    std::string out;
    for (const ReportRecord& r : records) {
        nlohmann::ordered_json j;
        j["family"] = r.family;
        j["machine"] = r.machine;
        j["n"] = r.n;
        j["fuel"] = r.fuel;
        j["kind"] = r.kind;
        for (const auto& [key, value] : r.payload.items())
            j[key] = value;
        if (with_wall_time)
            j["wall_ms"] = r.wall_ms;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace crlp
