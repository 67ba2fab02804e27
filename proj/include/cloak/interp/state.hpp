#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>

#include "cloak/interp/value.hpp"

namespace cloak::interp {

/// One storage cell: a scalar or array state variable, or one mapping entry.
struct CellId {
    std::string var;
    std::optional<Value> key;

    static CellId scalar(std::string v) { return {std::move(v), std::nullopt}; }
    static CellId entry(std::string v, Value k) { return {std::move(v), std::move(k)}; }

    /// `var` or `var[key]`.
    std::string str() const;
    Bytes encode() const;

    bool operator==(const CellId&) const = default;
    bool operator<(const CellId& o) const;
};

/// Contract state. Cells never written read as their type's default value.
class StateStore {
  public:
    const Value* find(const CellId& id) const;
    Value read(const CellId& id, const frontend::DataType& type) const;
    void write(const CellId& id, Value v);
    void erase(const CellId& id) { cells_.erase(id); }
    bool contains(const CellId& id) const { return cells_.count(id) != 0; }

    const std::map<CellId, Value>& cells() const { return cells_; }
    std::vector<CellId> cellsOf(std::string_view var) const;
    std::size_t size() const { return cells_.size(); }

    bool operator==(const StateStore&) const = default;

  private:
    std::map<CellId, Value> cells_;
};

/// Records of every state cell touched during an execution.
struct AccessLog {
    std::set<CellId> reads;
    std::set<CellId> writes;
};

}  // namespace cloak::interp
