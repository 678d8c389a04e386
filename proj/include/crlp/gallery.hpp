#pragma once

// The gallery runner: instantiates every counterexample family over a set of
// machines, sweeps fuel on a doubling schedule, records every verdict, and
// cross-checks each Decided verdict against exact ground truth whenever the
// machine's halting status is known to the harness.
//
// Ground truth comes from two honest sources: a bounded halting probe, and
// the static observation that a program without HALT instructions never
// halts. Machines that elude both are reported with unknown status and their
// verdicts go uncross-checked.

#include "crlp/engine.hpp"
#include "crlp/machine.hpp"
#include "crlp/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace crlp {

struct GalleryConfig {
    std::vector<StepMachine> machines;
    std::uint64_t n_min = 1;
    std::uint64_t n_max = 1;
    std::uint32_t fuel_cap = 64;
    std::uint64_t probe_budget = 1u << 14;
};

/// Halting status as the harness can honestly know it.
HaltStatus ground_truth(const StepMachine& m, std::uint64_t n, std::uint64_t probe_budget);

/// Doubling fuel schedule 1, 2, 4, ... capped at (and including) `cap`.
std::vector<std::uint32_t> fuel_schedule(std::uint32_t cap);

struct GalleryResult {
    Report report;
    bool ok = true;  // false iff some Decided verdict contradicted ground truth
};

GalleryResult run_gallery(const GalleryConfig& cfg);

}  // namespace crlp
