#pragma once

// Gallery/analyze report records: append-only, self-describing, emitted as
// JSON Lines. Records are deterministic given the inputs, except for the
// wall-time field, which emission can omit.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace crlp {

struct ReportRecord {
    std::string family;  // "P".."D", or "-" for records outside a family
    std::string machine;
    std::uint64_t n = 0;
    std::uint32_t fuel = 0;
    std::string kind;  // the query that produced the record
    nlohmann::ordered_json payload;
    double wall_ms = 0.0;
};

struct Report {
    std::vector<ReportRecord> records;
    bool invariant_violation = false;  // oracle mismatch; must never happen

    /// Deterministic order: (family, machine, n, fuel, kind).
    void sort();
    std::string to_jsonl(bool with_wall_time = true) const;
};

}  // namespace crlp
