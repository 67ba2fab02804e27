#include "cloak/typecheck/owner.hpp"

namespace cloak::typecheck {

std::string OwnerRef::key() const {
    switch (kind) {
        case Kind::All: return "all";
        case Kind::Tee: return "tee";
        case Kind::Me: return "me";
        case Kind::Var: return base;
        case Kind::Element: return base + "[" + index + "]";
        case Kind::Family: return base + "[*]";
        case Kind::Opaque: return "<" + base + ">";
    }
    return "?";
}

std::string OwnerUnion::find(const std::string& key) const {
    std::string cur = key;
    for (auto it = parent_.find(cur); it != parent_.end() && it->second != cur; it = parent_.find(cur)) cur = it->second;
    return cur;
}

bool OwnerUnion::merge(const OwnerRef& a, const OwnerRef& b) {
    if (a.isAll() || b.isAll() || a.isTee() || b.isTee()) return a == b;
    std::string ra = find(a.key()), rb = find(b.key());
    if (ra == rb) return true;
    // Deterministic representative: the lexicographically smaller key.
    if (rb < ra) std::swap(ra, rb);
    parent_[ra] = ra;
    parent_[rb] = ra;
    return true;
}

}  // namespace cloak::typecheck
