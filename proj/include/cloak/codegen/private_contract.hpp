#pragma once

#include <map>

#include "cloak/typecheck/checker.hpp"

namespace cloak::codegen {

/// Erases every owner annotation (named mappings and arrays become their plain
/// counterparts) and drops the functions classified PUT. reveal() nodes stay as
/// markers for auditors.
frontend::ContractAst stripContract(const frontend::ContractAst& ast, const std::map<std::string, typecheck::FunctionKind>& kinds);

frontend::ContractAst generatePrivateContract(const typecheck::CheckedContract& c);

}  // namespace cloak::codegen
