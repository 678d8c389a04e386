#include "crlp/parse.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace crlp {

namespace {

// ---------------------------------------------------------------- lexing

struct Token {
    enum class Kind { Int, Ident, Sym, End };
    Kind kind = Kind::End;
    std::string text;
    SrcLoc loc;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) { next(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        next();
        return t;
    }
    bool at_sym(const char* sym) const {
        return tok_.kind == Token::Kind::Sym && tok_.text == sym;
    }
    bool accept_sym(const char* sym) {
        if (!at_sym(sym))
            return false;
        next();
        return true;
    }
    void expect_sym(const char* sym) {
        if (!accept_sym(sym))
            throw ParseError(tok_.loc, std::string("expected '") + sym + "'");
    }

    struct State {
        std::size_t pos;
        SrcLoc loc;
        Token tok;
    };
    State save() const { return {pos_, loc_, tok_}; }
    void restore(const State& st) {
        pos_ = st.pos;
        loc_ = st.loc;
        tok_ = st.tok;
    }

private:
    void next() {
        for (;;) {
            while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r' ||
                                        s_[pos_] == '\n'))
                advance();
            if (pos_ < s_.size() && s_[pos_] == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n')
                    advance();
                continue;
            }
            break;
        }
        tok_.loc = loc_;
        if (pos_ >= s_.size()) {
            tok_ = {Token::Kind::End, "", loc_};
            return;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string text;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                text += s_[pos_];
                advance();
            }
            tok_ = {Token::Kind::Int, std::move(text), tok_.loc};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string text;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                        s_[pos_] == '_')) {
                text += s_[pos_];
                advance();
            }
            tok_ = {Token::Kind::Ident, std::move(text), tok_.loc};
            return;
        }
        if (c == '<' || c == '>') {
            SrcLoc at = loc_;
            advance();
            if (pos_ >= s_.size() || s_[pos_] != '=')
                throw ParseError(at, std::string("expected '") + c + "='");
            advance();
            tok_ = {Token::Kind::Sym, std::string(1, c) + "=", at};
            return;
        }
        if (std::string("+-*/(),;=").find(c) != std::string::npos) {
            SrcLoc at = loc_;
            advance();
            tok_ = {Token::Kind::Sym, std::string(1, c), at};
            return;
        }
        throw ParseError(loc_, std::string("unexpected character '") + c + "'");
    }

    void advance() {
        if (s_[pos_] == '\n') {
            ++loc_.line;
            loc_.col = 1;
        } else {
            ++loc_.col;
        }
        ++pos_;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    SrcLoc loc_{1, 1};
    Token tok_;
};

// ------------------------------------------------------------- lin forms

// A linear form over the problem variables. A missing coefficient expression
// means the bare variable (unit coefficient); it is materialized to the
// literal 1 only when the form is lowered into a Clpp.
struct LinForm {
    std::map<std::string, std::optional<CrnExpr>> coef;
    std::optional<CrnExpr> cst;
};

CrnExpr materialize(const std::optional<CrnExpr>& coef) {
    return coef ? *coef : CrnExpr::rat(Rational(1));
}

struct ProblemParser {
    Lexer& lx;
    std::map<std::string, SrcLoc>* used_machines = nullptr;

    // -- scalar/linear expression parsing

    LinForm parse_linexpr() {
        bool negate = false;
        if (lx.accept_sym("-"))
            negate = true;
        else
            lx.accept_sym("+");
        LinForm acc = parse_term();
        if (negate)
            acc = neg(std::move(acc));
        for (;;) {
            if (lx.accept_sym("+"))
                acc = add(std::move(acc), parse_term(), false);
            else if (lx.accept_sym("-"))
                acc = add(std::move(acc), parse_term(), true);
            else
                return acc;
        }
    }

    LinForm parse_term() {
        LinForm acc = parse_factor();
        for (;;) {
            if (lx.accept_sym("*")) {
                acc = mul(std::move(acc), parse_factor(), lx.peek().loc);
            } else if (lx.at_sym("/")) {
                SrcLoc at = lx.peek().loc;
                lx.take();
                Rational d = parse_rational_literal();
                if (d.is_zero())
                    throw ParseError(at, "division by the zero rational");
                acc = div(std::move(acc), d);
            } else {
                return acc;
            }
        }
    }

    LinForm parse_factor() {
        const Token& t = lx.peek();
        if (t.kind == Token::Kind::Int) {
            return constant(CrnExpr::rat(parse_rational_literal()));
        }
        if (lx.accept_sym("-")) {
            return neg(parse_factor());
        }
        if (lx.accept_sym("(")) {
            LinForm inner = parse_linexpr();
            lx.expect_sym(")");
            return inner;
        }
        if (t.kind == Token::Kind::Ident) {
            Token name = lx.take();
            if (lx.accept_sym("(")) {
                LinForm out = parse_call(name);
                lx.expect_sym(")");
                return out;
            }
            LinForm v;
            v.coef[name.text] = std::nullopt;
            return v;
        }
        throw ParseError(t.loc, "expected a rational, a function call, '(' or a variable");
    }

    LinForm parse_call(const Token& name) {
        if (name.text == "s" || name.text == "a" || name.text == "b") {
            const Token& mt = lx.peek();
            if (mt.kind != Token::Kind::Ident)
                throw ParseError(mt.loc, "expected a machine name");
            Token machine = lx.take();
            if (used_machines && !used_machines->count(machine.text))
                (*used_machines)[machine.text] = machine.loc;
            lx.expect_sym(",");
            const Token& nt = lx.peek();
            if (nt.kind != Token::Kind::Int)
                throw ParseError(nt.loc, "expected a natural input number");
            std::uint64_t n = std::stoull(lx.take().text);
            if (name.text == "s")
                return constant(CrnExpr::specker(machine.text, n));
            if (name.text == "a")
                return constant(CrnExpr::pair_a(machine.text, n));
            return constant(CrnExpr::pair_b(machine.text, n));
        }
        if (name.text == "max" || name.text == "min") {
            CrnExpr l = expect_scalar(parse_linexpr(), name.loc);
            lx.expect_sym(",");
            CrnExpr r = expect_scalar(parse_linexpr(), name.loc);
            return constant(name.text == "max" ? CrnExpr::vmax(std::move(l), std::move(r))
                                               : CrnExpr::vmin(std::move(l), std::move(r)));
        }
        throw ParseError(name.loc, "unknown function '" + name.text + "'");
    }

    Rational parse_rational_literal() {
        // A sign is only reachable here from divisor position; bare factors
        // route '-' through negation instead.
        bool negative = lx.accept_sym("-");
        const Token& t = lx.peek();
        if (t.kind != Token::Kind::Int)
            throw ParseError(t.loc, "expected a rational literal");
        BigInt num(lx.take().text);
        if (negative)
            num = -num;
        if (lx.at_sym("/")) {
            // Longest match: 'x/1/2' divides by the rational 1/2.
            auto mark = lx.save();
            SrcLoc slash = lx.take().loc;
            if (lx.peek().kind == Token::Kind::Int) {
                BigInt den(lx.take().text);
                if (den == 0)
                    throw ParseError(slash, "division by the zero rational");
                return Rational(num, den);
            }
            lx.restore(mark);
        }
        return Rational(num);
    }

    // -- lin form algebra

    static LinForm constant(CrnExpr e) {
        LinForm f;
        f.cst = std::move(e);
        return f;
    }

    CrnExpr expect_scalar(const LinForm& f, SrcLoc at) {
        if (!f.coef.empty())
            throw ParseError(at, "variables are not allowed inside max/min arguments");
        return f.cst ? *f.cst : CrnExpr::rat(Rational(0));
    }

    static LinForm neg(LinForm f) {
        for (auto& [_, c] : f.coef)
            c = c ? CrnExpr::neg(*c) : std::optional<CrnExpr>(CrnExpr::rat(Rational(-1)));
        if (f.cst)
            f.cst = CrnExpr::neg(*f.cst);
        return f;
    }

    static LinForm add(LinForm l, LinForm r, bool subtract) {
        if (subtract)
            r = neg(std::move(r));
        for (auto& [v, c] : r.coef) {
            auto it = l.coef.find(v);
            if (it == l.coef.end())
                l.coef.emplace(v, std::move(c));
            else
                it->second = CrnExpr::add(materialize(it->second), materialize(c));
        }
        if (r.cst)
            l.cst = l.cst ? CrnExpr::add(*l.cst, *r.cst) : std::move(*r.cst);
        return l;
    }

    static LinForm mul(LinForm l, LinForm r, SrcLoc at) {
        if (!l.coef.empty() && !r.coef.empty())
            throw ParseError(at, "nonlinear term: both factors contain variables");
        if (!r.coef.empty())
            std::swap(l, r);  // now only l may carry variables
        if (!r.cst)
            return l;  // multiplying by an empty constant form cannot happen
        const CrnExpr& k = *r.cst;
        for (auto& [_, c] : l.coef)
            c = c ? CrnExpr::mul(*c, k) : std::optional<CrnExpr>(k);
        if (l.cst)
            l.cst = CrnExpr::mul(*l.cst, k);
        return l;
    }

    static LinForm div(LinForm f, const Rational& d) {
        for (auto& [_, c] : f.coef)
            c = c ? CrnExpr::div_rat(*c, d)
                  : std::optional<CrnExpr>(CrnExpr::rat(Rational(1) / d));
        if (f.cst)
            f.cst = CrnExpr::div_rat(*f.cst, d);
        return f;
    }
};

struct RawConstraint {
    LinForm lhs;
    Rel rel;
    LinForm rhs;
    SrcLoc loc;
};

/// Subtracting the two sides of a constraint: per-variable coefficient
/// expressions and a single right-hand-side expression.
struct LoweredRow {
    std::map<std::string, CrnExpr> coef;
    CrnExpr rhs = CrnExpr::rat(Rational(0));
    Rel rel = Rel::Eq;
    SrcLoc loc;
};

LoweredRow lower_constraint(RawConstraint rc) {
    LoweredRow out;
    out.rel = rc.rel;
    out.loc = rc.loc;
    for (auto& [v, c] : rc.lhs.coef)
        out.coef.emplace(v, materialize(c));
    for (auto& [v, c] : rc.rhs.coef) {
        CrnExpr neg = CrnExpr::neg(materialize(c));
        auto it = out.coef.find(v);
        if (it == out.coef.end())
            out.coef.emplace(v, std::move(neg));
        else
            it->second = CrnExpr::add(it->second, neg);
    }
    if (rc.rhs.cst && rc.lhs.cst)
        out.rhs = CrnExpr::add(*rc.rhs.cst, CrnExpr::neg(*rc.lhs.cst));
    else if (rc.rhs.cst)
        out.rhs = *rc.rhs.cst;
    else if (rc.lhs.cst)
        out.rhs = CrnExpr::neg(*rc.lhs.cst);
    return out;
}

}  // namespace

ParsedProblem parse_problem(const std::string& text) {
    // Binding lines are handled before tokenization so paths keep slashes.
    std::string body;
    std::vector<std::pair<std::string, std::string>> bindings;
    {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string trimmed = line;
            trimmed.erase(0, trimmed.find_first_not_of(" \t"));
            if (trimmed.rfind("machine ", 0) == 0 || trimmed == "machine") {
                std::istringstream ls(trimmed);
                std::string kw, name, eq, path;
                ls >> kw >> name >> eq >> path;
                if (name.empty() || eq != "=" || path.empty())
                    throw ParseError({lineno, 1}, "expected 'machine <name> = <path>'");
                std::string extra;
                if (ls >> extra)
                    throw ParseError({lineno, 1}, "trailing text after machine binding");
                bindings.emplace_back(name, path);
                body += "\n";  // keep line numbers aligned
            } else {
                body += line;
                body += "\n";
            }
        }
    }

    Lexer lx(body);
    ParsedProblem out;
    out.machine_bindings = std::move(bindings);
    ProblemParser pp{lx, &out.used_machines};

    const Token& sense = lx.peek();
    if (sense.kind != Token::Kind::Ident || (sense.text != "max" && sense.text != "min"))
        throw ParseError(sense.loc, "a problem starts with 'max' or 'min'");
    out.problem.sense = lx.take().text == "max" ? Sense::Max : Sense::Min;

    LinForm objective = pp.parse_linexpr();
    lx.expect_sym(";");
    const Token& st = lx.peek();
    if (st.kind != Token::Kind::Ident || st.text != "st")
        throw ParseError(st.loc, "expected 'st' before the constraint list");
    lx.take();

    std::vector<RawConstraint> constraints;
    for (;;) {
        SrcLoc at = lx.peek().loc;
        LinForm lhs = pp.parse_linexpr();
        Rel rel;
        if (lx.accept_sym("="))
            rel = Rel::Eq;
        else if (lx.accept_sym("<="))
            rel = Rel::Le;
        else if (lx.accept_sym(">="))
            rel = Rel::Ge;
        else
            throw ParseError(lx.peek().loc, "expected '=', '<=' or '>='");
        LinForm rhs = pp.parse_linexpr();
        constraints.push_back({std::move(lhs), rel, std::move(rhs), at});
        if (!lx.accept_sym(","))
            break;
    }
    if (lx.accept_sym(";")) {
        const Token& kw = lx.peek();
        if (kw.kind != Token::Kind::Ident || kw.text != "free")
            throw ParseError(kw.loc, "expected 'free' after ';'");
        lx.take();
        do {
            const Token& v = lx.peek();
            if (v.kind != Token::Kind::Ident)
                throw ParseError(v.loc, "expected a variable name");
            out.free_vars.push_back(lx.take().text);
        } while (lx.accept_sym(","));
    }
    if (lx.peek().kind != Token::Kind::End)
        throw ParseError(lx.peek().loc, "unexpected trailing input");

    // Variable order: first appearance, objective first.
    std::vector<std::string> vars;
    auto note_var = [&](const std::string& v) {
        if (std::find(vars.begin(), vars.end(), v) == vars.end())
            vars.push_back(v);
    };
    for (const auto& [v, _] : objective.coef)
        note_var(v);
    std::vector<LoweredRow> lowered;
    for (RawConstraint& rc : constraints)
        lowered.push_back(lower_constraint(std::move(rc)));
    for (const LoweredRow& r : lowered)
        for (const auto& [v, _] : r.coef)
            note_var(v);
    if (vars.empty())
        throw ParseError({1, 1}, "the problem mentions no variables");

    Clpp& p = out.problem;
    p.var_names = vars;
    p.upper.assign(vars.size(), std::nullopt);
    if (objective.cst && !(objective.cst->machine_free() &&
                           objective.cst->exact_value().is_zero()))
        throw ParseError({1, 1}, "the objective cannot carry a constant term");
    for (const std::string& v : vars) {
        auto it = objective.coef.find(v);
        p.objective.push_back(it == objective.coef.end() ? CrnExpr::rat(Rational(0))
                                                         : materialize(it->second));
    }

    auto var_index = [&](const std::string& v) {
        return static_cast<std::size_t>(
            std::find(vars.begin(), vars.end(), v) - vars.begin());
    };
    for (LoweredRow& r : lowered) {
        // Single-variable rational constraints fold into bounds where the
        // bound model can express them: x >= 0 is the implicit sign
        // restriction, x <= u an upper bound. Everything else stays a row.
        if (r.coef.size() == 1 && r.coef.begin()->second.machine_free() &&
            r.rhs.machine_free()) {
            const auto& [v, cexpr] = *r.coef.begin();
            Rational c = cexpr.exact_value();
            if (!c.is_zero()) {
                Rational bound = r.rhs.exact_value() / c;
                Rel rel = r.rel;
                if (c < Rational(0))
                    rel = rel == Rel::Le ? Rel::Ge : (rel == Rel::Ge ? Rel::Le : Rel::Eq);
                if (rel == Rel::Ge && bound.is_zero())
                    continue;  // the implicit sign restriction
                if (rel == Rel::Le && bound >= Rational(0)) {
                    std::size_t i = var_index(v);
                    if (!p.upper[i] || bound < *p.upper[i])
                        p.upper[i] = bound;
                    continue;
                }
            }
        }
        ClppRow row;
        row.rel = r.rel;
        row.b = r.rhs;
        for (const std::string& v : vars) {
            auto it = r.coef.find(v);
            row.a.push_back(it == r.coef.end() ? CrnExpr::rat(Rational(0)) : it->second);
        }
        p.rows.push_back(std::move(row));
    }

    for (const std::string& v : out.free_vars)
        if (std::find(vars.begin(), vars.end(), v) == vars.end())
            throw ParseError({1, 1}, "free variable '" + v + "' does not occur in the problem");

    validate_clpp(p);
    return out;
}

CrnExpr parse_expr(const std::string& text) {
    Lexer lx(text);
    ProblemParser pp{lx, nullptr};
    LinForm f = pp.parse_linexpr();
    if (lx.peek().kind != Token::Kind::End)
        throw ParseError(lx.peek().loc, "unexpected trailing input");
    if (!f.coef.empty())
        throw ParseError({1, 1}, "expected a scalar expression without variables");
    return f.cst ? *f.cst : CrnExpr::rat(Rational(0));
}

void require_machines_bound(const ParsedProblem& p, const std::set<std::string>& known) {
    std::set<std::string> bound = known;
    for (const auto& [name, _] : p.machine_bindings)
        bound.insert(name);
    for (const auto& [name, loc] : p.used_machines)
        if (!bound.count(name))
            throw ParseError(loc, "machine '" + name + "' is not bound");
}

Clpp to_clpp(const ParsedProblem& p) {
    if (!p.free_vars.empty())
        throw LpValidationError(
            "constructive problems need sign-restricted variables; 'free' is only "
            "supported by solve-rational");
    return p.problem;
}

RatLp to_ratlp(const ParsedProblem& p) {
    const Clpp& src = p.problem;
    RatLp lp;
    lp.sense = src.sense;
    lp.nvars = src.var_names.size();
    for (const CrnExpr& e : src.objective) {
        if (!e.machine_free())
            throw LpValidationError("solve-rational requires machine-free coefficients");
        lp.c.push_back(e.exact_value());
    }
    for (const ClppRow& r : src.rows) {
        RatRow row;
        row.rel = r.rel;
        if (!r.b.machine_free())
            throw LpValidationError("solve-rational requires machine-free coefficients");
        row.b = r.b.exact_value();
        for (const CrnExpr& e : r.a) {
            if (!e.machine_free())
                throw LpValidationError("solve-rational requires machine-free coefficients");
            row.a.push_back(e.exact_value());
        }
        lp.rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < lp.nvars; ++i) {
        bool is_free = std::find(p.free_vars.begin(), p.free_vars.end(), src.var_names[i]) !=
                       p.free_vars.end();
        lp.vars.push_back({is_free, src.upper[i]});
    }
    return lp;
}

namespace {

/// Renders one coefficient as the "c*" prefix of a c*var term, reporting
/// whether the term should join the sum with '-'. Negation is pulled out so
/// the text reparses to the same tree the parser's literal folding builds.
std::pair<std::string, bool> render_coef(const CrnExpr& c) {
    if (c.op() == CrnExpr::Op::RatLit) {
        const Rational& q = c.node().lit;
        Rational mag = abs(q);
        return {mag == Rational(1) ? "" : mag.str() + "*", q.sign() < 0};
    }
    if (c.op() == CrnExpr::Op::Neg) {
        // str() renders "-<child-as-factor>"; the stripped child is already
        // parenthesized wherever the factor position demands it.
        return {c.str().substr(1) + "*", true};
    }
    std::string s = c.str();
    if (c.op() == CrnExpr::Op::Add)
        s = "(" + s + ")";
    return {s + "*", false};
}

/// One sum of coefficient*variable terms; zero-literal coefficients are
/// skipped (they reparse identically), and a degenerate all-zero row keeps
/// one explicit 0*x term so the constraint still has a left-hand side.
std::string render_linear(const std::vector<CrnExpr>& coefs,
                          const std::vector<std::string>& vars) {
    std::string out;
    for (std::size_t i = 0; i < coefs.size(); ++i) {
        const CrnExpr& c = coefs[i];
        if (c.op() == CrnExpr::Op::RatLit && c.node().lit.is_zero())
            continue;
        auto [prefix, negative] = render_coef(c);
        std::string term = prefix + vars[i];
        if (out.empty())
            out += negative ? "-" + term : term;
        else
            out += negative ? " - " + term : " + " + term;
    }
    if (out.empty())
        out = "0*" + vars.front();
    return out;
}

}  // namespace

std::string format_problem(const Clpp& p) {
    validate_clpp(p);
    std::string out = p.sense == Sense::Max ? "max " : "min ";
    bool all_zero = true;
    for (const CrnExpr& c : p.objective)
        all_zero = all_zero &&
                   (c.op() == CrnExpr::Op::RatLit && c.node().lit.is_zero());
    out += all_zero ? "0" : render_linear(p.objective, p.var_names);
    out += " ; st ";
    bool first = true;
    for (const ClppRow& r : p.rows) {
        if (!first)
            out += ", ";
        first = false;
        out += render_linear(r.a, p.var_names);
        out += " ";
        out += rel_text(r.rel);
        out += " ";
        out += r.b.str();
    }
    for (std::size_t i = 0; i < p.upper.size(); ++i) {
        if (p.upper[i]) {
            if (!first)
                out += ", ";
            first = false;
            out += p.var_names[i] + " <= " + p.upper[i]->str();
        }
    }
    return out;
}

}  // namespace crlp
