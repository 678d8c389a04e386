#pragma once

// Problem-file parsing and formatting.
//
// Grammar (constraint relations are =, <=, >=):
//   file       := binding* problem
//   binding    := 'machine' NAME '=' PATH            (one per line)
//   problem    := ('max'|'min') linexpr ';' 'st' constraint (',' constraint)*
//                 [';' 'free' NAME (',' NAME)*]
//   constraint := linexpr rel linexpr
//   linexpr    := ['+'|'-'] term (('+'|'-') term)*
//   term       := factor (('*' factor) | ('/' rational))*
//   factor     := rational | 's(' name ',' nat ')' | 'a(' name ',' nat ')'
//               | 'b(' name ',' nat ')' | 'max(' linexpr ',' linexpr ')'
//               | 'min(' linexpr ',' linexpr ')' | '(' linexpr ')'
//               | '-' factor | NAME
//   rational   := int | int '/' posint                (longest match after '/')
//
// A bare NAME is a variable. Variables are nonnegative by default;
// single-variable rational constraints fold into bounds ('x >= 0' is the
// implicit sign restriction, 'x <= u' an upper bound); everything else stays
// a row. '#' starts a line comment.

#include "crlp/engine.hpp"
#include "crlp/expr.hpp"
#include "crlp/simplex.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace crlp {

struct SrcLoc {
    int line = 1;
    int col = 1;
};

struct ParseError : std::runtime_error {
    SrcLoc loc;
    ParseError(SrcLoc where, const std::string& msg)
        : std::runtime_error("line " + std::to_string(where.line) + ", col " +
                             std::to_string(where.col) + ": " + msg),
          loc(where) {}
};

struct ParsedProblem {
    Clpp problem;  // with every variable sign-restricted; free vars recorded below
    std::vector<std::pair<std::string, std::string>> machine_bindings;  // name -> path
    std::vector<std::string> free_vars;
    std::map<std::string, SrcLoc> used_machines;  // name -> first reference
};

ParsedProblem parse_problem(const std::string& text);

/// Scalar coefficient expression; rejects variables.
CrnExpr parse_expr(const std::string& text);

/// Throws ParseError (at the first reference) for machine names that are
/// neither bound in the file nor in `known`.
void require_machines_bound(const ParsedProblem& p, const std::set<std::string>& known);

/// The analyze route: requires sign-restricted variables, so `free` is
/// rejected here.
Clpp to_clpp(const ParsedProblem& p);

/// The solve-rational route: all coefficients must be machine-free; free
/// variables are allowed and marked for the solver to split.
RatLp to_ratlp(const ParsedProblem& p);

/// Canonical rendering; parse(format_problem(p)) is structurally equal to p.
std::string format_problem(const Clpp& p);

}  // namespace crlp
