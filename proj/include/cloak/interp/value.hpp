// Runtime values of the private-contract interpreter.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <variant>
#include <vector>

#include "cloak/crypto/bytes.hpp"
#include "cloak/frontend/ast.hpp"
#include "json.hpp"

namespace cloak::interp {

/// Checked 256-bit unsigned integer: wrap-around throws std::overflow_error.
using U256 = boost::multiprecision::checked_uint256_t;

struct Value;

struct ArrayV {
    std::vector<Value> items;
    bool operator==(const ArrayV&) const;
};

/// Keys and values kept in parallel, sorted by key encoding.
struct MapV {
    std::vector<Value> keys;
    std::vector<Value> values;
    bool operator==(const MapV&) const;
};

struct Value {
    std::variant<U256, bool, Address, Bytes, ArrayV, MapV> v;

    Value() : v(U256(0)) {}
    Value(U256 x) : v(std::move(x)) {}
    Value(bool b) : v(b) {}
    Value(Address a) : v(a) {}
    Value(Bytes b) : v(std::move(b)) {}
    Value(ArrayV a) : v(std::move(a)) {}
    Value(MapV m) : v(std::move(m)) {}
    static Value u(std::uint64_t x) { return Value(U256(x)); }

    bool isU256() const { return std::holds_alternative<U256>(v); }
    bool isBool() const { return std::holds_alternative<bool>(v); }
    bool isAddress() const { return std::holds_alternative<Address>(v); }
    bool isBin() const { return std::holds_alternative<Bytes>(v); }
    bool isArray() const { return std::holds_alternative<ArrayV>(v); }

    const U256& asU256() const { return std::get<U256>(v); }
    bool asBool() const { return std::get<bool>(v); }
    const Address& asAddress() const { return std::get<Address>(v); }
    const Bytes& asBin() const { return std::get<Bytes>(v); }
    const ArrayV& asArray() const { return std::get<ArrayV>(v); }
    ArrayV& asArray() { return std::get<ArrayV>(v); }

    /// Self-delimiting binary encoding; equal values encode to equal bytes.
    Bytes encode() const;
    static Value decode(ByteView raw);

    /// Human-readable: decimal, true/false, 0x-address, 0x-bytes, [..].
    std::string str() const;

    bool operator==(const Value& o) const { return encode() == o.encode(); }
    bool operator<(const Value& o) const { return encode() < o.encode(); }
};

/// Solidity default value for a data type (0, false, zero address, empty).
Value defaultValue(const frontend::DataType& t);

/// True iff `v` has the shape of `t` (owners ignored).
bool hasType(const Value& v, const frontend::DataType& t);

nlohmann::json valueToJson(const Value& v);
/// Decodes JSON written by valueToJson (or hand-written scenario values)
/// using the declared type: uint as number or decimal string, address as 0x-hex.
Value valueFromJson(const nlohmann::json& j, const frontend::DataType& t);

/// 32-byte big-endian encoding of a U256.
std::array<std::uint8_t, 32> toBigEndian(const U256& x);

}  // namespace cloak::interp
