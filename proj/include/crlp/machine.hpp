#pragma once

// Deterministic partial algorithms as Minsky-style counter machines, plus the
// halting-derived Crn sequences built on top of them. A machine transforms a
// natural input into 0 or 1 when it halts; whether it halts is the sole
// source of undecidability in the workbench.
//
// Instruction set: INC r | DECJZ r label | HALT0 | HALT1. Input n loads into
// register 0, all others start at 0. Steps count completed instruction
// executions starting at 1; Halted(bit, m) records the step that executed a
// HALT. A pc that leaves the program never halts (the machine is stuck, which
// is just one more way to diverge).

#include "crlp/crn.hpp"
#include "crlp/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace crlp {

enum class OpCode { Inc, DecJz, Halt0, Halt1 };

struct Instr {
    OpCode op;
    std::uint32_t reg = 0;     // Inc, DecJz
    std::uint32_t target = 0;  // DecJz
};

struct StepMachine {
    std::string name;  // not part of the wire format; assigned by the loader
    std::uint32_t registers = 1;
    std::vector<Instr> code;
    std::map<std::string, std::uint32_t> labels;

    /// True when the program contains no HALT instruction at all, which
    /// proves non-halting on every input.
    bool halt_free() const;
};

struct MachineState {
    std::uint64_t pc = 0;
    std::vector<std::uint64_t> regs;
};

struct Running {
    MachineState state;
};
struct Halted {
    int bit = 0;
    std::uint64_t step = 0;
};
using RunStatus = std::variant<Running, Halted>;

inline bool has_halted(const RunStatus& s) { return std::holds_alternative<Halted>(s); }

/// Thrown on malformed machine specs; running a loaded machine never throws.
struct MachineSpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rejects out-of-range registers and jump targets.
void validate_machine(const StepMachine& m);

/// Runs at most k steps on input n. Pure: identical arguments always produce
/// the identical status.
RunStatus run_bounded(const StepMachine& m, std::uint64_t n, std::uint64_t k);

/// Halting probe: (bit, halt step) if the machine halts on n within `budget`.
std::optional<std::pair<int, std::uint64_t>> probe_halt(const StepMachine& m, std::uint64_t n,
                                                        std::uint64_t budget);

/// The k-th term of the halting sequence s_n: 0 while the machine is still
/// running at step budget k, +-2^-m once it halted at step m with output 1/0.
Rational specker_term(const StepMachine& m, std::uint64_t n, std::uint64_t k);

/// s_n as a Crn: fund(k) = specker_term(m, n, k), regulator t = smallest
/// natural with 2^-t <= eps (the sequence converges at geometric speed).
Crn specker_crn(const StepMachine& m, std::uint64_t n);

/// The (a_n, b_n) pair: both 0 while running; (2^-m, 0) after halting with 0;
/// (0, 2^-m) after halting with 1. Same geometric regulator as specker_crn.
std::pair<Crn, Crn> split_pair_crn(const StepMachine& m, std::uint64_t n);

// Built-in machines. Tests and the gallery use these to control halting
// ground truth exactly.

/// Halts at exactly step m (m >= 1) with the given output bit, on any input.
StepMachine make_halts_at(std::uint64_t m, int bit);

/// Single self-jump on a register that is never incremented; contains no HALT
/// instruction, so it provably never halts.
StepMachine make_never_halts();

/// Halts on every input with bit = parity of n (1 for even); the halt step
/// grows with n, giving input-dependent Specker values.
StepMachine make_even_odd();

/// Halts (bit 1) only on input 0; loops forever on n > 0. Its non-halting
/// inputs are not statically recognizable, so the gallery treats their ground
/// truth as unknown.
StepMachine make_halts_iff_zero();

/// All of the above under their canonical names.
std::vector<StepMachine> builtin_machines();

// Wire format: {"registers": int, "code": [["INC", r] | ["DECJZ", r, label] |
// ["HALT0"] | ["HALT1"]], "labels": {name: index}}. DECJZ's label operand is
// either an instruction index or a name from "labels". Unknown fields are
// rejected.

StepMachine machine_from_json_text(const std::string& text, const std::string& name = "");
std::string machine_to_json_text(const StepMachine& m);

}  // namespace crlp
