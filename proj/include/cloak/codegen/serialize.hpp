// Canonical JSON form of contract ASTs. Object keys are sorted and the dump
// carries no whitespace, so equal trees always serialize to equal bytes.
#pragma once

#include "json.hpp"
#include <string>

#include "cloak/frontend/ast.hpp"

namespace cloak::codegen {

using json = nlohmann::json;

json typeToJson(const frontend::AnnotatedType& t);
json dataTypeToJson(const frontend::DataType& t);
json exprToJson(const frontend::Expr& e);
json stmtToJson(const frontend::Stmt& s);
json contractToJson(const frontend::ContractAst& c);

frontend::AnnotatedType typeFromJson(const json& j);
frontend::DataType dataTypeFromJson(const json& j);
frontend::Expr exprFromJson(const json& j);
frontend::Stmt stmtFromJson(const json& j);
frontend::ContractAst contractFromJson(const json& j);

/// Compact dump with sorted keys.
std::string canonical(const json& j);

}  // namespace cloak::codegen
