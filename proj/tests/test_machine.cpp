#include <doctest.h>

#include "crlp/machine.hpp"

#include <cstdint>

using namespace crlp;

namespace {

bool statuses_equal(const RunStatus& a, const RunStatus& b) {
    if (a.index() != b.index())
        return false;
    if (const auto* ha = std::get_if<Halted>(&a))
        return ha->bit == std::get<Halted>(b).bit && ha->step == std::get<Halted>(b).step;
    const auto& ra = std::get<Running>(a).state;
    const auto& rb = std::get<Running>(b).state;
    return ra.pc == rb.pc && ra.regs == rb.regs;
}

}  // namespace

TEST_SUITE("machine") {

TEST_CASE("halts_at runs for exactly m steps") {
    StepMachine m = make_halts_at(3, 1);
    CHECK(std::holds_alternative<Running>(run_bounded(m, 0, 2)));
    RunStatus s = run_bounded(m, 0, 3);
    REQUIRE(std::holds_alternative<Halted>(s));
    CHECK(std::get<Halted>(s).bit == 1);
    CHECK(std::get<Halted>(s).step == 3);

    StepMachine one = make_halts_at(1, 0);
    RunStatus s1 = run_bounded(one, 9, 1);
    REQUIRE(std::holds_alternative<Halted>(s1));
    CHECK(std::get<Halted>(s1).step == 1);
    CHECK(std::get<Halted>(s1).bit == 0);
}

TEST_CASE("never_halts never halts and is statically halt-free") {
    StepMachine m = make_never_halts();
    CHECK(m.halt_free());
    CHECK(std::holds_alternative<Running>(run_bounded(m, 0, 100000)));
    CHECK(std::holds_alternative<Running>(run_bounded(m, 17, 100000)));
    CHECK(!make_halts_at(3, 1).halt_free());
}

TEST_CASE("even_odd computes parity with input-dependent halt step") {
    StepMachine m = make_even_odd();
    auto h4 = probe_halt(m, 4, 1000);
    auto h5 = probe_halt(m, 5, 1000);
    auto h10 = probe_halt(m, 10, 1000);
    REQUIRE(h4);
    REQUIRE(h5);
    REQUIRE(h10);
    CHECK(h4->first == 1);
    CHECK(h5->first == 0);
    CHECK(h10->first == 1);
    CHECK(h10->second > h4->second);
}

TEST_CASE("halts_iff_zero") {
    StepMachine m = make_halts_iff_zero();
    auto h0 = probe_halt(m, 0, 100);
    REQUIRE(h0);
    CHECK(h0->first == 1);
    CHECK(!probe_halt(m, 3, 100000));
    CHECK(!m.halt_free());  // its non-halting is not statically visible
}

TEST_CASE("determinism and budget monotonicity") {
    for (const StepMachine& m : builtin_machines()) {
        for (std::uint64_t n : {0ull, 1ull, 5ull}) {
            for (std::uint64_t k : {0ull, 1ull, 3ull, 7ull, 20ull}) {
                RunStatus a = run_bounded(m, n, k);
                RunStatus b = run_bounded(m, n, k);
                CHECK(statuses_equal(a, b));
                if (const auto* h = std::get_if<Halted>(&a)) {
                    CHECK(h->step <= k);
                    for (std::uint64_t extra : {1ull, 10ull}) {
                        RunStatus later = run_bounded(m, n, k + extra);
                        REQUIRE(std::holds_alternative<Halted>(later));
                        CHECK(std::get<Halted>(later).bit == h->bit);
                        CHECK(std::get<Halted>(later).step == h->step);
                    }
                }
            }
        }
    }
}

TEST_CASE("validation rejects malformed programs") {
    StepMachine bad_reg;
    bad_reg.registers = 1;
    bad_reg.code = {{OpCode::Inc, 3, 0}};
    CHECK_THROWS_AS(validate_machine(bad_reg), MachineSpecError);

    StepMachine bad_target;
    bad_target.registers = 1;
    bad_target.code = {{OpCode::DecJz, 0, 5}};
    CHECK_THROWS_AS(validate_machine(bad_target), MachineSpecError);

    StepMachine no_regs;
    no_regs.registers = 0;
    CHECK_THROWS_AS(validate_machine(no_regs), MachineSpecError);
}

TEST_CASE("spec json round trip") {
    for (const StepMachine& m : builtin_machines()) {
        StepMachine back = machine_from_json_text(machine_to_json_text(m), m.name);
        CHECK(back.registers == m.registers);
        CHECK(back.labels == m.labels);
        REQUIRE(back.code.size() == m.code.size());
        for (std::size_t i = 0; i < m.code.size(); ++i) {
            CHECK(back.code[i].op == m.code[i].op);
            CHECK(back.code[i].reg == m.code[i].reg);
            CHECK(back.code[i].target == m.code[i].target);
        }
    }
}

TEST_CASE("spec json accepts label names and rejects junk") {
    StepMachine m = machine_from_json_text(R"({
        "registers": 2,
        "code": [["DECJZ", 0, "done"], ["DECJZ", 1, 1], ["HALT1"]],
        "labels": {"done": 2}
    })");
    CHECK(m.code[0].target == 2);

    CHECK_THROWS_AS(machine_from_json_text(R"({"registers": 1, "code": [], "extra": 1})"),
                    MachineSpecError);
    CHECK_THROWS_AS(machine_from_json_text(R"({"code": []})"), MachineSpecError);
    CHECK_THROWS_AS(machine_from_json_text(R"({"registers": 1, "code": [["NOP"]]})"),
                    MachineSpecError);
    CHECK_THROWS_AS(machine_from_json_text(R"({"registers": 1, "code": [["DECJZ", 0, "x"]]})"),
                    MachineSpecError);
    CHECK_THROWS_AS(machine_from_json_text(R"({"registers": 1, "code": [["INC", 2]]})"),
                    MachineSpecError);
    CHECK_THROWS_AS(machine_from_json_text("not json"), MachineSpecError);
}

TEST_CASE("specker terms") {
    StepMachine m31 = make_halts_at(3, 1);
    CHECK(specker_term(m31, 0, 2) == Rational(0));
    CHECK(specker_term(m31, 0, 7) == Rational(1, 8));
    CHECK(specker_term(make_halts_at(4, 0), 0, 9) == Rational(-1, 16));
    CHECK(specker_term(make_never_halts(), 0, 64) == Rational(0));
}

TEST_CASE("specker cauchy bound on all pairs up to 64") {
    for (const StepMachine& m : {make_halts_at(3, 1), make_halts_at(4, 0), make_never_halts(),
                                 make_even_odd()}) {
        for (std::uint64_t j = 0; j <= 64; ++j) {
            for (std::uint64_t k = j; k <= 64; ++k) {
                Rational diff = abs(specker_term(m, 6, j) - specker_term(m, 6, k));
                CHECK(diff <= Rational::pow2(-static_cast<long>(j)));
            }
        }
    }
}

TEST_CASE("specker crn") {
    Crn zero = specker_crn(make_never_halts(), 1);
    for (int k = 0; k <= 20; k += 5)
        CHECK(approx(zero, Rational::pow2(-k)) == Rational(0));

    Crn s = specker_crn(make_halts_at(5, 1), 1);
    CHECK(approx(s, Rational::pow2(-10)) == Rational(1, 32));
    CHECK(s.reg(Rational(1, 100)) == 7);
    CHECK(s.reg(Rational(1)) == 0);
    CHECK(approx(specker_crn(make_halts_at(3, 1), 9), Rational(1, 1024)) == Rational(1, 8));
}

TEST_CASE("split pair cases") {
    auto [a0, b0] = split_pair_crn(make_never_halts(), 1);
    CHECK(approx(a0, Rational::pow2(-12)) == Rational(0));
    CHECK(approx(b0, Rational::pow2(-12)) == Rational(0));

    auto [a1, b1] = split_pair_crn(make_halts_at(3, 0), 1);
    CHECK(approx(a1, Rational::pow2(-12)) == Rational(1, 8));
    CHECK(approx(b1, Rational::pow2(-12)) == Rational(0));

    auto [a2, b2] = split_pair_crn(make_halts_at(4, 1), 1);
    CHECK(approx(a2, Rational::pow2(-12)) == Rational(0));
    CHECK(approx(b2, Rational::pow2(-12)) == Rational(1, 16));
}

TEST_CASE("pair identity: s = b - a as reals") {
    for (const StepMachine& m : {make_halts_at(3, 1), make_halts_at(4, 0), make_never_halts(),
                                 make_even_odd()}) {
        Crn s = specker_crn(m, 2);
        auto [a, b] = split_pair_crn(m, 2);
        Crn diff = b - a;
        for (int k = 1; k <= 16; k += 3) {
            Rational eps = Rational::pow2(-k);
            CHECK(abs(approx(s, eps) - approx(diff, eps)) <= eps + eps);
        }
    }
}

TEST_CASE("stuck machines diverge instead of erroring") {
    // INC as the last instruction walks the pc off the program; the machine
    // then never halts.
    StepMachine m;
    m.registers = 1;
    m.code = {{OpCode::Inc, 0, 0}};
    validate_machine(m);
    CHECK(std::holds_alternative<Running>(run_bounded(m, 0, 1000)));
    CHECK(specker_term(m, 0, 50) == Rational(0));
}

}  // TEST_SUITE
