#include <cctype>
#include <unordered_map>

#include "cloak/frontend/token.hpp"

namespace cloak::frontend {

std::string_view tokenKindName(TokenKind k) {
    switch (k) {
        case TokenKind::KwContract: return "contract";
        case TokenKind::KwFunction: return "function";
        case TokenKind::KwReturns: return "returns";
        case TokenKind::KwMapping: return "mapping";
        case TokenKind::KwReveal: return "reveal";
        case TokenKind::KwRequire: return "require";
        case TokenKind::KwFinal: return "final";
        case TokenKind::KwMe: return "me";
        case TokenKind::KwAll: return "all";
        case TokenKind::KwTee: return "tee";
        case TokenKind::KwPublic: return "public";
        case TokenKind::KwIf: return "if";
        case TokenKind::KwElse: return "else";
        case TokenKind::KwWhile: return "while";
        case TokenKind::KwFor: return "for";
        case TokenKind::KwReturn: return "return";
        case TokenKind::KwTrue: return "true";
        case TokenKind::KwFalse: return "false";
        case TokenKind::KwBool: return "bool";
        case TokenKind::KwUint: return "uint";
        case TokenKind::KwAddress: return "address";
        case TokenKind::KwBin: return "bin";
        case TokenKind::Ident: return "identifier";
        case TokenKind::IntLit: return "integer literal";
        case TokenKind::At: return "@";
        case TokenKind::Bang: return "!";
        case TokenKind::LParen: return "(";
        case TokenKind::RParen: return ")";
        case TokenKind::LBrace: return "{";
        case TokenKind::RBrace: return "}";
        case TokenKind::LBracket: return "[";
        case TokenKind::RBracket: return "]";
        case TokenKind::Semi: return ";";
        case TokenKind::Comma: return ",";
        case TokenKind::Dot: return ".";
        case TokenKind::Question: return "?";
        case TokenKind::Colon: return ":";
        case TokenKind::Arrow: return "=>";
        case TokenKind::Assign: return "=";
        case TokenKind::PlusAssign: return "+=";
        case TokenKind::MinusAssign: return "-=";
        case TokenKind::StarAssign: return "*=";
        case TokenKind::PlusPlus: return "++";
        case TokenKind::MinusMinus: return "--";
        case TokenKind::Plus: return "+";
        case TokenKind::Minus: return "-";
        case TokenKind::Star: return "*";
        case TokenKind::Slash: return "/";
        case TokenKind::Percent: return "%";
        case TokenKind::EqEq: return "==";
        case TokenKind::NotEq: return "!=";
        case TokenKind::Lt: return "<";
        case TokenKind::Gt: return ">";
        case TokenKind::Le: return "<=";
        case TokenKind::Ge: return ">=";
        case TokenKind::AndAnd: return "&&";
        case TokenKind::OrOr: return "||";
    }
    return "?";
}

namespace {

const std::unordered_map<std::string_view, TokenKind>& keywords() {
    static const std::unordered_map<std::string_view, TokenKind> kw = {
        {"contract", TokenKind::KwContract}, {"function", TokenKind::KwFunction}, {"returns", TokenKind::KwReturns},
        {"mapping", TokenKind::KwMapping},   {"reveal", TokenKind::KwReveal},     {"require", TokenKind::KwRequire},
        {"final", TokenKind::KwFinal},       {"me", TokenKind::KwMe},             {"all", TokenKind::KwAll},
        {"tee", TokenKind::KwTee},           {"public", TokenKind::KwPublic},     {"if", TokenKind::KwIf},
        {"else", TokenKind::KwElse},         {"while", TokenKind::KwWhile},       {"for", TokenKind::KwFor},
        {"return", TokenKind::KwReturn},     {"true", TokenKind::KwTrue},         {"false", TokenKind::KwFalse},
        {"bool", TokenKind::KwBool},         {"uint", TokenKind::KwUint},         {"uint256", TokenKind::KwUint},
        {"address", TokenKind::KwAddress},   {"bin", TokenKind::KwBin},
    };
    return kw;
}

struct Punct {
    std::string_view text;
    TokenKind kind;
};

// Longest match first.
constexpr Punct kPuncts[] = {
    {"=>", TokenKind::Arrow},      {"==", TokenKind::EqEq},        {"!=", TokenKind::NotEq},
    {"<=", TokenKind::Le},         {">=", TokenKind::Ge},          {"&&", TokenKind::AndAnd},
    {"||", TokenKind::OrOr},       {"+=", TokenKind::PlusAssign},  {"-=", TokenKind::MinusAssign},
    {"*=", TokenKind::StarAssign}, {"++", TokenKind::PlusPlus},    {"--", TokenKind::MinusMinus},
    {"@", TokenKind::At},          {"!", TokenKind::Bang},         {"(", TokenKind::LParen},
    {")", TokenKind::RParen},      {"{", TokenKind::LBrace},       {"}", TokenKind::RBrace},
    {"[", TokenKind::LBracket},    {"]", TokenKind::RBracket},     {";", TokenKind::Semi},
    {",", TokenKind::Comma},       {".", TokenKind::Dot},          {"?", TokenKind::Question},
    {":", TokenKind::Colon},       {"=", TokenKind::Assign},       {"+", TokenKind::Plus},
    {"-", TokenKind::Minus},       {"*", TokenKind::Star},         {"/", TokenKind::Slash},
    {"%", TokenKind::Percent},     {"<", TokenKind::Lt},           {">", TokenKind::Gt},
};

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    SourceLoc loc;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++loc.line;
                loc.col = 1;
            } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
                ++loc.col;  // count code points, not UTF-8 continuation bytes
            }
        }
    };

    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (src.substr(i, 2) == "//") {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (src.substr(i, 2) == "/*") {
            SourceLoc start = loc;
            advance(2);
            while (i < src.size() && src.substr(i, 2) != "*/") advance(1);
            if (i >= src.size()) throw LexError(start, "unterminated block comment");
            advance(2);
            continue;
        }
        SourceLoc start = loc;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            std::string_view word = src.substr(i, j - i);
            auto it = keywords().find(word);
            out.push_back({it == keywords().end() ? TokenKind::Ident : it->second, std::string(word), start});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            if (src.substr(i, 2) == "0x" || src.substr(i, 2) == "0X") {
                j += 2;
                while (j < src.size() && std::isxdigit(static_cast<unsigned char>(src[j]))) ++j;
                if (j == i + 2) throw LexError(start, "malformed hex literal");
            } else {
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < src.size() && (std::isalpha(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                throw LexError(start, "malformed numeric literal");
            out.push_back({TokenKind::IntLit, std::string(src.substr(i, j - i)), start});
            advance(j - i);
            continue;
        }
        bool matched = false;
        for (const auto& p : kPuncts) {
            if (src.substr(i, p.text.size()) == p.text) {
                out.push_back({p.kind, std::string(p.text), start});
                advance(p.text.size());
                matched = true;
                break;
            }
        }
        if (!matched) {
            std::size_t len = 1;
            auto lead = static_cast<unsigned char>(c);
            if (lead >= 0xF0) len = 4;
            else if (lead >= 0xE0) len = 3;
            else if (lead >= 0xC0) len = 2;
            throw LexError(start, "unrecognized character '" + std::string(src.substr(i, len)) + "'");
        }
    }
    return out;
}

}  // namespace cloak::frontend
