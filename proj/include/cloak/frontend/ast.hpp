// Abstract syntax of Cloak contracts.
//
// Nodes are plain values: copying a tree deep-copies it and `==` compares
// structure only (source locations are ignored).
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cloak/frontend/token.hpp"

namespace cloak::frontend {

/// Owning, copyable, nullable pointer for recursive value types.
template <typename T>
class Box {
  public:
    Box() = default;
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& o) : ptr_(o.ptr_ ? std::make_unique<T>(*o.ptr_) : nullptr) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& o) {
        if (this != &o) ptr_ = o.ptr_ ? std::make_unique<T>(*o.ptr_) : nullptr;
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    explicit operator bool() const { return static_cast<bool>(ptr_); }
    T& operator*() { return *ptr_; }
    const T& operator*() const { return *ptr_; }
    T* operator->() { return ptr_.get(); }
    const T* operator->() const { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) {
        if (!a.ptr_ || !b.ptr_) return !a.ptr_ && !b.ptr_;
        return *a.ptr_ == *b.ptr_;
    }

  private:
    std::unique_ptr<T> ptr_;
};

struct OwnerAtom {
    enum class Kind { All, Tee, Me, Named };
    Kind kind = Kind::All;
    std::string name;  // Named only

    static OwnerAtom all() { return {Kind::All, {}}; }
    static OwnerAtom tee() { return {Kind::Tee, {}}; }
    static OwnerAtom me() { return {Kind::Me, {}}; }
    static OwnerAtom named(std::string id) { return {Kind::Named, std::move(id)}; }

    bool isAll() const { return kind == Kind::All; }
    std::string str() const;
    bool operator==(const OwnerAtom&) const = default;
};

struct AnnotatedType;

struct DataType {
    enum class Kind { Bool, Uint256, Address, Bin, Mapping, NamedMapping, Array, NamedAddressArray };
    Kind kind = Kind::Uint256;
    Box<DataType> key;          // Mapping
    Box<AnnotatedType> value;   // Mapping / NamedMapping value, Array element
    std::string tag;            // NamedMapping key tag, NamedAddressArray element tag

    static DataType scalar(Kind k) { return DataType{k, {}, {}, {}}; }
    static DataType mapping(DataType key, AnnotatedType value);
    static DataType namedMapping(std::string tag, AnnotatedType value);
    static DataType array(AnnotatedType elem);
    static DataType namedAddressArray(std::string tag);

    bool isScalar() const { return kind == Kind::Bool || kind == Kind::Uint256 || kind == Kind::Address || kind == Kind::Bin; }
    bool isMapping() const { return kind == Kind::Mapping || kind == Kind::NamedMapping; }
    bool isArray() const { return kind == Kind::Array || kind == Kind::NamedAddressArray; }
    /// Element / value type of an indexable type (arrays of named tags yield address@all).
    AnnotatedType elementType() const;

    bool operator==(const DataType&) const = default;
};

struct AnnotatedType {
    DataType data;
    OwnerAtom owner;
    bool operator==(const AnnotatedType&) const = default;
};

struct Expr {
    struct Const {
        enum class Kind { Int, Bool };
        Kind kind = Kind::Int;
        std::string digits;  // normalised base-10 for Int
        bool boolean = false;
        bool operator==(const Const&) const = default;
    };
    struct MeAddr {
        bool operator==(const MeAddr&) const = default;
    };
    struct Location {
        std::string base;
        std::vector<Expr> indexes;
        bool operator==(const Location&) const = default;
    };
    struct Reveal {
        Box<Expr> inner;
        OwnerAtom target;
        bool operator==(const Reveal&) const = default;
    };
    /// Native operator application; `op` is the operator spelling ("+", "<",
    /// "!", ...) or "length" for `x.length`.
    struct NativeApply {
        std::string op;
        std::vector<Expr> args;
        bool operator==(const NativeApply&) const = default;
    };
    struct Ternary {
        Box<Expr> cond, then, otherwise;
        bool operator==(const Ternary&) const = default;
    };

    std::variant<Const, MeAddr, Location, Reveal, NativeApply, Ternary> node;
    SourceLoc loc;

    template <typename T>
    const T* as() const { return std::get_if<T>(&node); }
    template <typename T>
    T* as() { return std::get_if<T>(&node); }

    static Expr intConst(std::string digits, SourceLoc loc = {});
    static Expr boolConst(bool b, SourceLoc loc = {});
    static Expr location(std::string base, std::vector<Expr> indexes = {}, SourceLoc loc = {});
    static Expr apply(std::string op, std::vector<Expr> args, SourceLoc loc = {});

    bool operator==(const Expr&) const = default;
};

struct Stmt {
    struct Skip {
        bool operator==(const Skip&) const = default;
    };
    struct Decl {
        std::string name;
        AnnotatedType type;
        bool operator==(const Decl&) const = default;
    };
    /// `target = value`. For `target op= rhs` (and `++`/`--`) the parser stores
    /// value = NativeApply(op, [target, rhs]) and sets `compound`.
    struct Assign {
        Expr target;
        Expr value;
        bool compound = false;
        bool operator==(const Assign&) const = default;
    };
    struct Seq {
        std::vector<Stmt> stmts;
        bool operator==(const Seq&) const = default;
    };
    struct Require {
        Expr cond;
        bool operator==(const Require&) const = default;
    };
    struct If {
        Expr cond;
        Seq thenBlock;
        Seq elseBlock;
        bool operator==(const If&) const = default;
    };
    struct While {
        Expr cond;
        Seq body;
        bool operator==(const While&) const = default;
    };
    struct Return {
        std::vector<Expr> values;
        bool operator==(const Return&) const = default;
    };

    std::variant<Skip, Decl, Assign, Seq, Require, If, While, Return> node;
    SourceLoc loc;

    template <typename T>
    const T* as() const { return std::get_if<T>(&node); }

    bool operator==(const Stmt&) const = default;
};

struct Param {
    std::string name;
    AnnotatedType type;
    SourceLoc loc;
    bool operator==(const Param&) const = default;
};

struct FunctionDecl {
    std::string name;
    std::vector<Param> params;
    std::vector<Param> returns;
    Stmt::Seq body;
    SourceLoc loc;
    bool operator==(const FunctionDecl&) const = default;
};

struct StateVar {
    std::string name;
    AnnotatedType type;
    bool isFinal = false;
    SourceLoc loc;
    bool operator==(const StateVar&) const = default;
};

struct ContractAst {
    std::string name;
    std::vector<StateVar> stateVars;
    std::vector<FunctionDecl> functions;

    const StateVar* findState(std::string_view n) const;
    const FunctionDecl* findFunction(std::string_view n) const;
    bool operator==(const ContractAst&) const = default;
};

}  // namespace cloak::frontend
