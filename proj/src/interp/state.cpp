#include "cloak/interp/state.hpp"

namespace cloak::interp {

std::string CellId::str() const { return key ? var + "[" + key->str() + "]" : var; }

Bytes CellId::encode() const {
    Bytes out;
    appendU64(out, var.size());
    append(out, toBytes(var));
    out.push_back(key ? 1 : 0);
    if (key) append(out, key->encode());
    return out;
}

bool CellId::operator<(const CellId& o) const {
    if (var != o.var) return var < o.var;
    if (key.has_value() != o.key.has_value()) return !key.has_value();
    return key && *key < *o.key;
}

const Value* StateStore::find(const CellId& id) const {
    auto it = cells_.find(id);
    return it == cells_.end() ? nullptr : &it->second;
}

Value StateStore::read(const CellId& id, const frontend::DataType& type) const {
    if (const auto* v = find(id)) return *v;
    return defaultValue(type);
}

void StateStore::write(const CellId& id, Value v) { cells_[id] = std::move(v); }

std::vector<CellId> StateStore::cellsOf(std::string_view var) const {
    std::vector<CellId> out;
    for (const auto& [id, _] : cells_)
        if (id.var == var) out.push_back(id);
    return out;
}

}  // namespace cloak::interp
