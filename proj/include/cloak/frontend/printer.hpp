#pragma once

#include <string>

#include "cloak/frontend/ast.hpp"

namespace cloak::frontend {

std::string printOwner(const OwnerAtom& o);
/// Data type without its own owner, e.g. `mapping(address!k => uint256@k)`.
std::string printDataType(const DataType& t);
/// `<data> @<owner>`; the owner is omitted when it is `all` unless `explicitAll`.
std::string printType(const AnnotatedType& t, bool explicitAll = false);
std::string printExpr(const Expr& e);
/// Source text that parses back to a structurally identical contract.
std::string printContract(const ContractAst& c);

}  // namespace cloak::frontend
