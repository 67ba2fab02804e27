#pragma once

#include <map>
#include <string>

namespace cloak::typecheck {

/// The owner of a value as seen by the checker. Besides the source-level
/// atoms this distinguishes the element owners of named address arrays
/// (`parties[i]`) and owners denoted by an address-valued expression.
struct OwnerRef {
    enum class Kind {
        All,
        Tee,
        Me,
        Var,      // the address held by variable `base`
        Element,  // the address held by `base[index]`
        Family,   // "each element of `base`" in a declared array type
        Opaque,   // the address denoted by an arbitrary expression `base`
    };
    Kind kind = Kind::All;
    std::string base;
    std::string index;
    bool dynamicIndex = false;  // Element: index is not a literal

    static OwnerRef all() { return {}; }
    static OwnerRef tee() { return {Kind::Tee, {}, {}, false}; }
    static OwnerRef me() { return {Kind::Me, {}, {}, false}; }
    static OwnerRef var(std::string n) { return {Kind::Var, std::move(n), {}, false}; }
    static OwnerRef element(std::string arr, std::string idx, bool dyn) { return {Kind::Element, std::move(arr), std::move(idx), dyn}; }
    static OwnerRef family(std::string arr) { return {Kind::Family, std::move(arr), {}, false}; }
    static OwnerRef opaque(std::string text) { return {Kind::Opaque, std::move(text), {}, false}; }

    bool isAll() const { return kind == Kind::All; }
    bool isTee() const { return kind == Kind::Tee; }
    bool isPrivate() const { return kind != Kind::All; }
    /// Stable identity used by the union-find and in checker records.
    std::string key() const;

    bool operator==(const OwnerRef&) const = default;
};

/// Union-find over owner keys. `all` and `tee` are never merged with anything
/// else; merge() refuses such requests.
class OwnerUnion {
  public:
    std::string find(const std::string& key) const;
    bool merge(const OwnerRef& a, const OwnerRef& b);
    bool same(const OwnerRef& a, const OwnerRef& b) const { return find(a.key()) == find(b.key()); }
    std::string rep(const OwnerRef& o) const { return find(o.key()); }

  private:
    std::map<std::string, std::string> parent_;
};

}  // namespace cloak::typecheck
