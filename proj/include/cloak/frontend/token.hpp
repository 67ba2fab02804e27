#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cloak::frontend {

struct SourceLoc {
    int line = 1;
    int col = 1;
    std::string str() const { return std::to_string(line) + ":" + std::to_string(col); }
    // Locations never take part in AST equality: two trees are structurally
    // equal regardless of where they were parsed from.
    friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

enum class TokenKind {
    // keywords
    KwContract, KwFunction, KwReturns, KwMapping, KwReveal, KwRequire, KwFinal, KwMe, KwAll, KwTee,
    KwPublic, KwIf, KwElse, KwWhile, KwFor, KwReturn, KwTrue, KwFalse, KwBool, KwUint, KwAddress, KwBin,
    // atoms
    Ident, IntLit,
    // sigils and punctuation
    At, Bang, LParen, RParen, LBrace, RBrace, LBracket, RBracket, Semi, Comma, Dot, Question, Colon, Arrow,
    // operators
    Assign, PlusAssign, MinusAssign, StarAssign, PlusPlus, MinusMinus, Plus, Minus, Star, Slash, Percent,
    EqEq, NotEq, Lt, Gt, Le, Ge, AndAnd, OrOr,
};

std::string_view tokenKindName(TokenKind k);

struct Token {
    TokenKind kind;
    std::string text;
    SourceLoc loc;
};

class LexError : public std::runtime_error {
  public:
    LexError(SourceLoc loc, const std::string& msg) : std::runtime_error(msg), loc(loc) {}
    SourceLoc loc;
};

/// Splits Cloak source into tokens; `//` and `/* */` comments are dropped.
std::vector<Token> tokenize(std::string_view source);

}  // namespace cloak::frontend
