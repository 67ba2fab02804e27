// Privacy type checker: infers the owner of every expression, enforces the
// assignment and reveal rules, and classifies functions as PUT/PRT/MPT.
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cloak/frontend/ast.hpp"
#include "cloak/typecheck/owner.hpp"

namespace cloak::typecheck {

using frontend::AnnotatedType;
using frontend::ContractAst;
using frontend::DataType;
using frontend::Expr;
using frontend::FunctionDecl;
using frontend::OwnerAtom;
using frontend::SourceLoc;
using frontend::Stmt;

enum class Severity { Error, Warning, Note };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;  // TypeError, PrivacyViolation, PrivateBranch, RuntimeOwnerFlow, JointUpdate, JointComputation
    SourceLoc loc;
    std::string message;

    bool isError() const { return severity == Severity::Error; }
    std::string str(std::string_view file = {}) const;
};

std::string_view severityName(Severity s);

enum class FunctionKind { PUT, PRT, MPT };
std::string_view kindName(FunctionKind k);

/// How an accepted assignment satisfied the flow rules.
enum class FlowRule {
    Public,        // rhs owned by all
    SameOwner,     // owners provably equal
    RuntimeOwner,  // rhs owned by a dynamically indexed element; resolved in the enclave
    JointUpdate,   // compound update mixing the target's owner with another owner
};
std::string_view flowRuleName(FlowRule r);

struct ExprOwnerRecord {
    std::string function;
    SourceLoc loc;
    std::string text;
    std::string owner;  // representative key at the time of typing
};

struct AssignRecord {
    std::string function;
    SourceLoc loc;
    std::string target;
    std::string targetOwner;
    std::string valueOwner;
    FlowRule rule = FlowRule::SameOwner;
};

struct RevealSite {
    std::string function;
    SourceLoc loc;
    std::string expr;
    std::string target;  // owner atom as written
};

/// `address[!p] A` together with `T[@p] D`: A and D must have equal length at runtime.
struct PairedArrays {
    std::string function;  // empty for state variables
    std::string addressArray;
    std::string dataArray;
    std::string tag;
};

struct FunctionInfo {
    std::string name;
    FunctionKind kind = FunctionKind::PUT;
    std::set<std::string> ownerSet;  // alpha_o, representatives
};

struct CheckedContract {
    ContractAst ast;
    std::vector<FunctionInfo> functions;  // declaration order
    std::vector<Diagnostic> diagnostics;
    std::vector<ExprOwnerRecord> exprOwners;
    std::vector<AssignRecord> assigns;
    std::vector<RevealSite> reveals;
    std::vector<PairedArrays> pairedArrays;

    bool ok() const;
    std::size_t errorCount() const;
    const FunctionInfo* function(std::string_view name) const;
    FunctionKind kindOf(std::string_view name) const;
};

/// Data type plus inferred owner of an expression.
struct ExprType {
    DataType data;
    OwnerRef owner;
    bool poisoned = false;  // an error was already reported below this node
};

struct Collector;

/// Typing context for one function body (Gamma plus the owner union-find).
/// Copied on entry to nested blocks so declarations and merges stay scoped.
class TypingContext {
  public:
    enum class Scope { State, Param, Return, Local };
    struct Binding {
        AnnotatedType type;
        Scope scope = Scope::Local;
        bool isFinal = false;
    };

    /// A null `sink` gets a private one (diagnostics are then discarded).
    TypingContext(const ContractAst& contract, std::shared_ptr<Collector> sink, std::string function = {});

    void bind(const std::string& name, AnnotatedType type, Scope scope, bool isFinal = false);
    const Binding* lookup(const std::string& name) const;
    void pushScope();

    OwnerUnion& owners() { return uf_; }
    const OwnerUnion& owners() const { return uf_; }
    const std::string& functionName() const { return function_; }
    Collector& sink() { return *sink_; }

    /// Declared owner annotation resolved in this context (tags, address variables, me/all/tee).
    OwnerRef resolveOwner(const OwnerAtom& atom, const std::map<std::string, OwnerRef>& tagEnv = {}, SourceLoc loc = {});
    /// Owner denoted by an address-valued expression, e.g. `tenderer`, `me`, `parties[i]`.
    OwnerRef addressOwner(const Expr& e) const;
    /// Name of the variable declaring named-array tag `tag`, if any.
    const std::string* arrayForTag(const std::string& tag) const;

    const ContractAst& contract() const { return *contract_; }

  private:
    const ContractAst* contract_;
    std::shared_ptr<Collector> sink_;
    std::string function_;
    std::vector<std::map<std::string, Binding>> scopes_;
    std::map<std::string, std::string> tagArrays_;
    OwnerUnion uf_;
};

ExprType typeOfExpr(TypingContext& ctx, const Expr& e);
TypingContext checkStmt(TypingContext ctx, const Stmt& s);

/// Function rule over a set of owner representatives.
FunctionKind classifyOwners(const std::set<std::string>& ownerSet);
/// Type-checks `f` and classifies it.
FunctionInfo classifyFunction(const ContractAst& contract, const FunctionDecl& f, std::vector<Diagnostic>* diags = nullptr);

CheckedContract checkContract(const ContractAst& ast);

}  // namespace cloak::typecheck
