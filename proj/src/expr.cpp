#include "crlp/expr.hpp"

#include <utility>

namespace crlp {

namespace {

using Node = CrnExpr::Node;
using Op = CrnExpr::Op;

std::shared_ptr<const Node> leaf(Op op, Rational lit, std::string machine, std::uint64_t n,
                                 bool machine_free) {
    auto node = std::make_shared<Node>();
    node->op = op;
    node->lit = std::move(lit);
    node->machine = std::move(machine);
    node->n = n;
    node->machine_free = machine_free;
    return node;
}

std::shared_ptr<const Node> inner(Op op, std::shared_ptr<const Node> l,
                                  std::shared_ptr<const Node> r, Rational lit = Rational(0)) {
    auto node = std::make_shared<Node>();
    node->op = op;
    node->lit = std::move(lit);
    node->machine_free = (!l || l->machine_free) && (!r || r->machine_free);
    node->lhs = std::move(l);
    node->rhs = std::move(r);
    return node;
}

}  // namespace

CrnExpr CrnExpr::rat(Rational q) {
    return CrnExpr(leaf(Op::RatLit, std::move(q), "", 0, true));
}
CrnExpr CrnExpr::specker(std::string machine, std::uint64_t n) {
    return CrnExpr(leaf(Op::Specker, Rational(0), std::move(machine), n, false));
}
CrnExpr CrnExpr::pair_a(std::string machine, std::uint64_t n) {
    return CrnExpr(leaf(Op::PairA, Rational(0), std::move(machine), n, false));
}
CrnExpr CrnExpr::pair_b(std::string machine, std::uint64_t n) {
    return CrnExpr(leaf(Op::PairB, Rational(0), std::move(machine), n, false));
}
CrnExpr CrnExpr::add(CrnExpr l, CrnExpr r) {
    return CrnExpr(inner(Op::Add, l.node_, r.node_));
}
CrnExpr CrnExpr::neg(CrnExpr e) {
    // Fold literal negation so built trees agree with parsed ones: the
    // grammar has no way to spell Neg(RatLit).
    if (e.op() == Op::RatLit)
        return rat(-e.node_->lit);
    return CrnExpr(inner(Op::Neg, e.node_, nullptr));
}
CrnExpr CrnExpr::mul(CrnExpr l, CrnExpr r) {
    return CrnExpr(inner(Op::Mul, l.node_, r.node_));
}
CrnExpr CrnExpr::vmax(CrnExpr l, CrnExpr r) {
    return CrnExpr(inner(Op::Max, l.node_, r.node_));
}
CrnExpr CrnExpr::vmin(CrnExpr l, CrnExpr r) {
    return CrnExpr(inner(Op::Min, l.node_, r.node_));
}
CrnExpr CrnExpr::div_rat(CrnExpr e, Rational divisor) {
    if (divisor.is_zero())
        throw std::domain_error("CrnExpr: division by the zero rational");
    return CrnExpr(inner(Op::DivRat, e.node_, nullptr, std::move(divisor)));
}

bool CrnExpr::equal(const Node& a, const Node& b) {
    if (a.op != b.op || a.lit != b.lit || a.machine != b.machine || a.n != b.n)
        return false;
    if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs) ||
        static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs))
        return false;
    if (a.lhs && !equal(*a.lhs, *b.lhs))
        return false;
    if (a.rhs && !equal(*a.rhs, *b.rhs))
        return false;
    return true;
}

namespace {

Rational exact_of(const Node& n) {
    switch (n.op) {
        case Op::RatLit:
            return n.lit;
        case Op::Add:
            return exact_of(*n.lhs) + exact_of(*n.rhs);
        case Op::Neg:
            return -exact_of(*n.lhs);
        case Op::Mul:
            return exact_of(*n.lhs) * exact_of(*n.rhs);
        case Op::Max:
            return max(exact_of(*n.lhs), exact_of(*n.rhs));
        case Op::Min:
            return min(exact_of(*n.lhs), exact_of(*n.rhs));
        case Op::DivRat:
            return exact_of(*n.lhs) / n.lit;
        default:
            throw std::logic_error("exact_value on a machine-dependent expression");
    }
}

Crn eval_node(const Node& n, const MachineEnv& env) {
    switch (n.op) {
        case Op::RatLit:
            return Crn::from_rational(n.lit);
        case Op::Specker:
            return specker_crn(env.resolve(n.machine), n.n);
        case Op::PairA:
            return split_pair_crn(env.resolve(n.machine), n.n).first;
        case Op::PairB:
            return split_pair_crn(env.resolve(n.machine), n.n).second;
        case Op::Add:
            return eval_node(*n.lhs, env) + eval_node(*n.rhs, env);
        case Op::Neg:
            return -eval_node(*n.lhs, env);
        case Op::Mul:
            return eval_node(*n.lhs, env) * eval_node(*n.rhs, env);
        case Op::Max:
            return cmax(eval_node(*n.lhs, env), eval_node(*n.rhs, env));
        case Op::Min:
            return cmin(eval_node(*n.lhs, env), eval_node(*n.rhs, env));
        case Op::DivRat:
            return div_rational(eval_node(*n.lhs, env), n.lit);
    }
    throw std::logic_error("unreachable");
}

// Rendering with just enough parentheses to reparse to the same tree.
// Precedence levels: 0 sum, 1 product, 2 factor.
std::string render(const Node& n, int level);

std::string render_call(const char* fn, const Node& n) {
    return std::string(fn) + "(" + n.machine + "," + std::to_string(n.n) + ")";
}

/// A leading '-' at the head of a term is consumed by the sum level and
/// negates the whole product, so such operands need factor parentheses.
bool starts_negative(const Node& n) {
    return n.op == Op::Neg || (n.op == Op::RatLit && n.lit.sign() < 0);
}

std::string render(const Node& n, int level) {
    auto wrap = [&](const std::string& s, int mine) {
        return mine < level ? "(" + s + ")" : s;
    };
    switch (n.op) {
        case Op::RatLit: {
            std::string s = n.lit.str();
            // A leading minus only parses as a factor-level negation.
            return n.lit.sign() < 0 ? wrap(s, 1) : s;
        }
        case Op::Specker:
            return render_call("s", n);
        case Op::PairA:
            return render_call("a", n);
        case Op::PairB:
            return render_call("b", n);
        case Op::Add:
            if (n.rhs->op == Op::Neg)
                return wrap(render(*n.lhs, 0) + " - " + render(*n.rhs->lhs, 2), 0);
            if (n.rhs->op == Op::RatLit && n.rhs->lit.sign() < 0)
                return wrap(render(*n.lhs, 0) + " - " + (-n.rhs->lit).str(), 0);
            return wrap(render(*n.lhs, 0) + " + " + render(*n.rhs, 1), 0);
        case Op::Neg:
            return wrap("-" + render(*n.lhs, 2), 1);
        case Op::Mul:
            return wrap(render(*n.lhs, starts_negative(*n.lhs) ? 2 : 1) + "*" +
                            render(*n.rhs, 2),
                        1);
        case Op::Max:
            return "max(" + render(*n.lhs, 0) + ", " + render(*n.rhs, 0) + ")";
        case Op::Min:
            return "min(" + render(*n.lhs, 0) + ", " + render(*n.rhs, 0) + ")";
        case Op::DivRat: {
            std::string lhs = render(*n.lhs, 2);
            // A bare integer directly before '/' would lex into the divisor
            // as its numerator ("2/1/2" reads as (2/1)/2).
            if (n.lhs->op == Op::RatLit && n.lhs->lit.is_integer() &&
                n.lhs->lit.sign() >= 0)
                lhs = "(" + lhs + ")";
            return wrap(lhs + "/" + n.lit.str(), 1);
        }
    }
    throw std::logic_error("unreachable");
}

std::optional<Rational> ground_of(const Node& n, const GroundFn& ground) {
    auto machine_value = [&](bool want_a, bool want_b) -> std::optional<Rational> {
        HaltStatus st = ground(n.machine, n.n);
        if (st.kind == HaltStatus::Kind::Unknown)
            return std::nullopt;
        if (st.kind == HaltStatus::Kind::NeverHalts)
            return Rational(0);
        Rational mag = Rational::pow2(-static_cast<long>(st.step));
        if (want_a)
            return st.bit == 0 ? mag : Rational(0);
        if (want_b)
            return st.bit == 1 ? mag : Rational(0);
        return st.bit == 1 ? mag : -mag;
    };
    auto bin = [&](auto combine) -> std::optional<Rational> {
        auto l = ground_of(*n.lhs, ground);
        auto r = ground_of(*n.rhs, ground);
        if (!l || !r)
            return std::nullopt;
        return combine(*l, *r);
    };
    switch (n.op) {
        case Op::RatLit:
            return n.lit;
        case Op::Specker:
            return machine_value(false, false);
        case Op::PairA:
            return machine_value(true, false);
        case Op::PairB:
            return machine_value(false, true);
        case Op::Add:
            return bin([](const Rational& a, const Rational& b) { return a + b; });
        case Op::Mul:
            return bin([](const Rational& a, const Rational& b) { return a * b; });
        case Op::Max:
            return bin([](const Rational& a, const Rational& b) { return max(a, b); });
        case Op::Min:
            return bin([](const Rational& a, const Rational& b) { return min(a, b); });
        case Op::Neg: {
            auto l = ground_of(*n.lhs, ground);
            return l ? std::optional<Rational>(-*l) : std::nullopt;
        }
        case Op::DivRat: {
            auto l = ground_of(*n.lhs, ground);
            return l ? std::optional<Rational>(*l / n.lit) : std::nullopt;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

Rational CrnExpr::exact_value() const { return exact_of(*node_); }

std::string CrnExpr::str() const { return render(*node_, 0); }

Crn eval_expr(const CrnExpr& e, const MachineEnv& env) { return eval_node(e.node(), env); }

Interval enclose_expr(const CrnExpr& e, const MachineEnv& env, Fuel level) {
    if (e.machine_free())
        return Interval::point(e.exact_value());
    return enclose(eval_expr(e, env), level.eps());
}

std::optional<Rational> exact_value_under(const CrnExpr& e, const GroundFn& ground) {
    return ground_of(e.node(), ground);
}

}  // namespace crlp
