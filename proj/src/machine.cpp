#include "crlp/machine.hpp"

#include <nlohmann/json.hpp>

#include <utility>

namespace crlp {

using nlohmann::json;

bool StepMachine::halt_free() const {
    for (const Instr& in : code)
        if (in.op == OpCode::Halt0 || in.op == OpCode::Halt1)
            return false;
    return true;
}

void validate_machine(const StepMachine& m) {
    if (m.registers == 0)
        throw MachineSpecError("machine needs at least one register (input goes to register 0)");
    for (std::size_t i = 0; i < m.code.size(); ++i) {
        const Instr& in = m.code[i];
        if ((in.op == OpCode::Inc || in.op == OpCode::DecJz) && in.reg >= m.registers)
            throw MachineSpecError("instruction " + std::to_string(i) + " references register " +
                                   std::to_string(in.reg) + " but only " +
                                   std::to_string(m.registers) + " are declared");
        if (in.op == OpCode::DecJz && in.target >= m.code.size())
            throw MachineSpecError("instruction " + std::to_string(i) + " jumps to " +
                                   std::to_string(in.target) + ", past the end of the program");
    }
    for (const auto& [name, idx] : m.labels)
        if (idx >= m.code.size())
            throw MachineSpecError("label '" + name + "' points past the end of the program");
}

RunStatus run_bounded(const StepMachine& m, std::uint64_t n, std::uint64_t k) {
    MachineState st;
    st.regs.assign(m.registers, 0);
    st.regs[0] = n;
    for (std::uint64_t step = 1; step <= k; ++step) {
        if (st.pc >= m.code.size())
            return Running{std::move(st)};  // stuck: diverges without halting
        const Instr& in = m.code[st.pc];
        switch (in.op) {
            case OpCode::Inc:
                ++st.regs[in.reg];
                ++st.pc;
                break;
            case OpCode::DecJz:
                if (st.regs[in.reg] == 0) {
                    st.pc = in.target;
                } else {
                    --st.regs[in.reg];
                    ++st.pc;
                }
                break;
            case OpCode::Halt0:
                return Halted{0, step};
            case OpCode::Halt1:
                return Halted{1, step};
        }
    }
    return Running{std::move(st)};
}

std::optional<std::pair<int, std::uint64_t>> probe_halt(const StepMachine& m, std::uint64_t n,
                                                        std::uint64_t budget) {
    RunStatus s = run_bounded(m, n, budget);
    if (const auto* h = std::get_if<Halted>(&s))
        return std::make_pair(h->bit, h->step);
    return std::nullopt;
}

Rational specker_term(const StepMachine& m, std::uint64_t n, std::uint64_t k) {
    RunStatus s = run_bounded(m, n, k);
    if (const auto* h = std::get_if<Halted>(&s)) {
        Rational mag = Rational::pow2(-static_cast<long>(h->step));
        return h->bit == 1 ? mag : -mag;
    }
    return Rational(0);
}

namespace {

/// Smallest natural t with 2^-t <= eps, i.e. with num * 2^t >= den.
Index geometric_reg(const Rational& eps) {
    Index t = 0;
    BigInt acc = eps.num();  // eps > 0 is guaranteed by Crn::reg
    const BigInt& den = eps.den();
    while (acc < den) {
        acc <<= 1;
        ++t;
    }
    return t;
}

}  // namespace

Crn specker_crn(const StepMachine& m, std::uint64_t n) {
    auto shared = std::make_shared<const StepMachine>(m);
    return Crn([shared, n](Index k) { return specker_term(*shared, n, k); }, geometric_reg);
}

std::pair<Crn, Crn> split_pair_crn(const StepMachine& m, std::uint64_t n) {
    auto shared = std::make_shared<const StepMachine>(m);
    auto a_term = [shared, n](Index k) {
        RunStatus s = run_bounded(*shared, n, k);
        if (const auto* h = std::get_if<Halted>(&s); h && h->bit == 0)
            return Rational::pow2(-static_cast<long>(h->step));
        return Rational(0);
    };
    auto b_term = [shared, n](Index k) {
        RunStatus s = run_bounded(*shared, n, k);
        if (const auto* h = std::get_if<Halted>(&s); h && h->bit == 1)
            return Rational::pow2(-static_cast<long>(h->step));
        return Rational(0);
    };
    return {Crn(a_term, geometric_reg), Crn(b_term, geometric_reg)};
}

StepMachine make_halts_at(std::uint64_t m, int bit) {
    if (m == 0)
        throw MachineSpecError("halts_at: the halt step must be >= 1");
    StepMachine mach;
    mach.name = "halts_at_" + std::to_string(m) + "_" + std::to_string(bit);
    mach.registers = 2;
    for (std::uint64_t i = 0; i + 1 < m; ++i)
        mach.code.push_back({OpCode::Inc, 1, 0});
    mach.code.push_back({bit == 1 ? OpCode::Halt1 : OpCode::Halt0, 0, 0});
    return mach;
}

StepMachine make_never_halts() {
    StepMachine mach;
    mach.name = "never_halts";
    mach.registers = 2;
    mach.code.push_back({OpCode::DecJz, 1, 0});  // register 1 stays 0: self-loop
    return mach;
}

StepMachine make_even_odd() {
    StepMachine mach;
    mach.name = "even_odd";
    mach.registers = 2;
    mach.code = {
        {OpCode::DecJz, 0, 3},  // 0: n == 0 -> even
        {OpCode::DecJz, 0, 4},  // 1: n == 0 -> odd
        {OpCode::DecJz, 1, 0},  // 2: unconditional jump back
        {OpCode::Halt1, 0, 0},  // 3
        {OpCode::Halt0, 0, 0},  // 4
    };
    mach.labels = {{"loop", 0}, {"even", 3}, {"odd", 4}};
    return mach;
}

StepMachine make_halts_iff_zero() {
    StepMachine mach;
    mach.name = "halts_iff_zero";
    mach.registers = 2;
    mach.code = {
        {OpCode::DecJz, 0, 2},  // 0: n == 0 -> halt
        {OpCode::DecJz, 1, 1},  // 1: self-loop forever
        {OpCode::Halt1, 0, 0},  // 2
    };
    mach.labels = {{"spin", 1}, {"done", 2}};
    return mach;
}

std::vector<StepMachine> builtin_machines() {
    return {make_halts_at(3, 1), make_halts_at(4, 0), make_halts_at(10, 1), make_never_halts(),
            make_even_odd(),     make_halts_iff_zero()};
}

namespace {

Instr instr_from_json(const json& j, const std::map<std::string, std::uint32_t>& labels,
                      std::size_t idx) {
    auto fail = [idx](const std::string& msg) -> Instr {
        throw MachineSpecError("code[" + std::to_string(idx) + "]: " + msg);
    };
    if (!j.is_array() || j.empty() || !j[0].is_string())
        return fail("expected [\"INC\", r], [\"DECJZ\", r, label], [\"HALT0\"] or [\"HALT1\"]");
    const std::string op = j[0].get<std::string>();
    if (op == "INC") {
        if (j.size() != 2 || !j[1].is_number_unsigned())
            return fail("INC takes one register operand");
        return {OpCode::Inc, j[1].get<std::uint32_t>(), 0};
    }
    if (op == "DECJZ") {
        if (j.size() != 3 || !j[1].is_number_unsigned())
            return fail("DECJZ takes a register and a label");
        std::uint32_t target = 0;
        if (j[2].is_number_unsigned()) {
            target = j[2].get<std::uint32_t>();
        } else if (j[2].is_string()) {
            auto it = labels.find(j[2].get<std::string>());
            if (it == labels.end())
                return fail("unknown label '" + j[2].get<std::string>() + "'");
            target = it->second;
        } else {
            return fail("DECJZ label must be an index or a declared label name");
        }
        return {OpCode::DecJz, j[1].get<std::uint32_t>(), target};
    }
    if (op == "HALT0" || op == "HALT1") {
        if (j.size() != 1)
            return fail(op + " takes no operands");
        return {op == "HALT1" ? OpCode::Halt1 : OpCode::Halt0, 0, 0};
    }
    return fail("unknown opcode '" + op + "'");
}

}  // namespace

StepMachine machine_from_json_text(const std::string& text, const std::string& name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw MachineSpecError(std::string("machine spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw MachineSpecError("machine spec must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (key != "registers" && key != "code" && key != "labels")
            throw MachineSpecError("unknown field '" + key + "' in machine spec");
    if (!j.contains("registers") || !j["registers"].is_number_unsigned())
        throw MachineSpecError("machine spec needs a nonnegative integer 'registers' field");
    if (!j.contains("code") || !j["code"].is_array())
        throw MachineSpecError("machine spec needs a 'code' array");

    StepMachine m;
    m.name = name;
    m.registers = j["registers"].get<std::uint32_t>();
    if (j.contains("labels")) {
        if (!j["labels"].is_object())
            throw MachineSpecError("'labels' must map names to instruction indices");
        for (const auto& [lname, lidx] : j["labels"].items()) {
            if (!lidx.is_number_unsigned())
                throw MachineSpecError("label '" + lname + "' must be a nonnegative index");
            m.labels[lname] = lidx.get<std::uint32_t>();
        }
    }
    const json& code = j["code"];
    for (std::size_t i = 0; i < code.size(); ++i)
        m.code.push_back(instr_from_json(code[i], m.labels, i));
    validate_machine(m);
    return m;
}

std::string machine_to_json_text(const StepMachine& m) {
    std::string out = "{\n  \"registers\": " + std::to_string(m.registers) + ",\n  \"code\": [";
    for (std::size_t i = 0; i < m.code.size(); ++i) {
        const Instr& in = m.code[i];
        out += i == 0 ? "\n    " : ",\n    ";
        switch (in.op) {
            case OpCode::Inc:
                out += "[\"INC\", " + std::to_string(in.reg) + "]";
                break;
            case OpCode::DecJz:
                out += "[\"DECJZ\", " + std::to_string(in.reg) + ", " +
                       std::to_string(in.target) + "]";
                break;
            case OpCode::Halt0:
                out += "[\"HALT0\"]";
                break;
            case OpCode::Halt1:
                out += "[\"HALT1\"]";
                break;
        }
    }
    out += m.code.empty() ? "],\n" : "\n  ],\n";
    out += "  \"labels\": {";
    bool first = true;
    for (const auto& [name, idx] : m.labels) {
        out += first ? "" : ", ";
        out += json(name).dump() + ": " + std::to_string(idx);
        first = false;
    }
    out += "}\n}\n";
    return out;
}

}  // namespace crlp
