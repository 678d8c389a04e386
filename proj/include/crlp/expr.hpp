#pragma once

// Symbolic coefficient expressions over constructive reals. A CrnExpr is an
// immutable tree whose leaves are rational literals or machine-derived
// sequences (s, a, b); it evaluates to a Crn against an environment that
// resolves machine names.
//
// Expressions with no machine leaf are exactly evaluable, and the engine
// exploits that: their interval snapshot is a point, which is what makes the
// semi-deciders exact on all-rational problems.

#include "crlp/crn.hpp"
#include "crlp/machine.hpp"
#include "crlp/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace crlp {

struct UnboundMachineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Machine bindings for evaluation.
struct MachineEnv {
    std::map<std::string, std::shared_ptr<const StepMachine>> machines;

    void bind(const StepMachine& m) {
        machines[m.name] = std::make_shared<const StepMachine>(m);
    }
    void bind(std::string name, const StepMachine& m) {
        StepMachine copy = m;
        copy.name = name;
        machines[std::move(name)] = std::make_shared<const StepMachine>(std::move(copy));
    }
    const StepMachine& resolve(const std::string& name) const {
        auto it = machines.find(name);
        if (it == machines.end())
            throw UnboundMachineError("machine '" + name + "' is not bound");
        return *it->second;
    }
    bool has(const std::string& name) const { return machines.count(name) != 0; }
};

class CrnExpr {
public:
    enum class Op { RatLit, Specker, PairA, PairB, Add, Neg, Mul, Max, Min, DivRat };

    static CrnExpr rat(Rational q);
    static CrnExpr specker(std::string machine, std::uint64_t n);
    static CrnExpr pair_a(std::string machine, std::uint64_t n);
    static CrnExpr pair_b(std::string machine, std::uint64_t n);
    static CrnExpr add(CrnExpr l, CrnExpr r);
    static CrnExpr sub(CrnExpr l, CrnExpr r) { return add(std::move(l), neg(std::move(r))); }
    static CrnExpr neg(CrnExpr e);
    static CrnExpr mul(CrnExpr l, CrnExpr r);
    static CrnExpr vmax(CrnExpr l, CrnExpr r);
    static CrnExpr vmin(CrnExpr l, CrnExpr r);
    static CrnExpr div_rat(CrnExpr e, Rational divisor);  // divisor != 0

    Op op() const { return node_->op; }
    /// No Specker/PairA/PairB leaf anywhere in the tree.
    bool machine_free() const { return node_->machine_free; }
    /// Exact rational value; only defined when machine_free().
    Rational exact_value() const;

    /// Grammar-compatible rendering; parsing it back yields an equal tree.
    std::string str() const;

    friend bool operator==(const CrnExpr& a, const CrnExpr& b) { return equal(*a.node_, *b.node_); }
    friend bool operator!=(const CrnExpr& a, const CrnExpr& b) { return !(a == b); }

    struct Node {
        Op op;
        Rational lit;         // RatLit value or DivRat divisor
        std::string machine;  // Specker / PairA / PairB
        std::uint64_t n = 0;
        std::shared_ptr<const Node> lhs, rhs;
        bool machine_free = true;
    };
    const Node& node() const { return *node_; }

private:
    explicit CrnExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static bool equal(const Node& a, const Node& b);
    std::shared_ptr<const Node> node_;
};

/// Structural evaluation: equal expressions over equal environments denote
/// equal real numbers (though possibly different presentations).
Crn eval_expr(const CrnExpr& e, const MachineEnv& env);

/// Sound enclosure of the expression's value at working precision 2^-t:
/// an exact point for machine-free expressions, approx +- 2^-t otherwise.
Interval enclose_expr(const CrnExpr& e, const MachineEnv& env, Fuel level);

// Ground-truth evaluation, used only by oracles and the gallery cross-check.

struct HaltStatus {
    enum class Kind { Halts, NeverHalts, Unknown };
    Kind kind = Kind::Unknown;
    int bit = 0;
    std::uint64_t step = 0;

    static HaltStatus halts(int bit, std::uint64_t step) {
        return {Kind::Halts, bit, step};
    }
    static HaltStatus never() { return {Kind::NeverHalts, 0, 0}; }
    static HaltStatus unknown() { return {Kind::Unknown, 0, 0}; }
};

using GroundFn = std::function<HaltStatus(const std::string& machine, std::uint64_t n)>;

/// The exact rational the expression denotes under known halting behavior;
/// nullopt when any machine leaf has unknown status.
std::optional<Rational> exact_value_under(const CrnExpr& e, const GroundFn& ground);

}  // namespace crlp
