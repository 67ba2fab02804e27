#pragma once

#include <set>
#include <string>
#include <vector>

#include "cloak/frontend/ast.hpp"

namespace cloak::frontend {

class ParseError : public std::runtime_error {
  public:
    ParseError(SourceLoc loc, std::vector<std::string> expected, const std::string& msg)
        : std::runtime_error(msg), loc(loc), expected(std::move(expected)) {}
    SourceLoc loc;
    std::vector<std::string> expected;
};

/// Recursive-descent parser over a token list.
///
/// Desugarings performed here (all visible in the AST):
///   - omitted owner annotations become `all`;
///   - `x op= e`, `x++`, `x--` become compound Assign nodes;
///   - `T x = e;` becomes Decl followed by Assign in the enclosing block;
///   - `for (init; cond; step) body` becomes `init; while (cond) { body; step; }`;
///   - `else if` nests an If in the else block.
ContractAst parse(const std::vector<Token>& tokens);

/// tokenize + parse.
ContractAst parseSource(std::string_view source);

/// Parses a single expression (tests and tooling).
Expr parseExpression(std::string_view source);

}  // namespace cloak::frontend
