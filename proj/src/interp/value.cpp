#include "cloak/interp/value.hpp"

#include <algorithm>

namespace cloak::interp {

using DK = frontend::DataType::Kind;

bool ArrayV::operator==(const ArrayV& o) const { return items == o.items; }
bool MapV::operator==(const MapV& o) const { return keys == o.keys && values == o.values; }

std::array<std::uint8_t, 32> toBigEndian(const U256& x) {
    std::array<std::uint8_t, 32> out{};
    U256 v = x;
    for (int i = 31; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

namespace {

enum Tag : std::uint8_t { TagU256 = 'u', TagBool = 'b', TagAddress = 'a', TagBin = 'x', TagArray = 'A', TagMap = 'M' };

void encodeInto(const Value& v, Bytes& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, U256>) {
                out.push_back(TagU256);
                auto be = toBigEndian(x);
                append(out, be);
            } else if constexpr (std::is_same_v<T, bool>) {
                out.push_back(TagBool);
                out.push_back(x ? 1 : 0);
            } else if constexpr (std::is_same_v<T, Address>) {
                out.push_back(TagAddress);
                append(out, x.view());
            } else if constexpr (std::is_same_v<T, Bytes>) {
                out.push_back(TagBin);
                appendU64(out, x.size());
                append(out, x);
            } else if constexpr (std::is_same_v<T, ArrayV>) {
                out.push_back(TagArray);
                appendU64(out, x.items.size());
                for (const auto& e : x.items) encodeInto(e, out);
            } else {
                out.push_back(TagMap);
                appendU64(out, x.keys.size());
                for (std::size_t i = 0; i < x.keys.size(); ++i) {
                    encodeInto(x.keys[i], out);
                    encodeInto(x.values[i], out);
                }
            }
        },
        v.v);
}

struct Reader {
    ByteView raw;
    std::size_t pos = 0;

    ByteView take(std::size_t n) {
        if (raw.size() - pos < n) throw std::invalid_argument("value encoding truncated");
        auto out = raw.subspan(pos, n);
        pos += n;
        return out;
    }
    std::uint64_t u64() {
        auto b = take(8);
        std::uint64_t v = 0;
        for (auto x : b) v = (v << 8) | x;
        return v;
    }
    Value value() {
        std::uint8_t tag = take(1)[0];
        switch (tag) {
            case TagU256: {
                U256 x = 0;
                for (auto b : take(32)) x = (x << 8) | b;
                return Value(x);
            }
            case TagBool: return Value(take(1)[0] != 0);
            case TagAddress: return Value(Address(FixedBytes<20>::fromView(take(20))));
            case TagBin: {
                auto n = u64();
                auto b = take(n);
                return Value(Bytes(b.begin(), b.end()));
            }
            case TagArray: {
                auto n = u64();
                ArrayV a;
                for (std::uint64_t i = 0; i < n; ++i) a.items.push_back(value());
                return Value(std::move(a));
            }
            case TagMap: {
                auto n = u64();
                MapV m;
                for (std::uint64_t i = 0; i < n; ++i) {
                    m.keys.push_back(value());
                    m.values.push_back(value());
                }
                return Value(std::move(m));
            }
            default: throw std::invalid_argument("unknown value tag");
        }
    }
};

}  // namespace

Bytes Value::encode() const {
    Bytes out;
    encodeInto(*this, out);
    return out;
}

Value Value::decode(ByteView raw) {
    Reader r{raw};
    Value v = r.value();
    if (r.pos != raw.size()) throw std::invalid_argument("trailing bytes after value");
    return v;
}

std::string Value::str() const {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, U256>) return x.str();
            else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else if constexpr (std::is_same_v<T, Address>) return x.str();
            else if constexpr (std::is_same_v<T, Bytes>) return "0x" + toHex(x);
            else if constexpr (std::is_same_v<T, ArrayV>) {
                std::string s = "[";
                for (std::size_t i = 0; i < x.items.size(); ++i) s += (i ? ", " : "") + x.items[i].str();
                return s + "]";
            } else {
                std::string s = "{";
                for (std::size_t i = 0; i < x.keys.size(); ++i) s += (i ? ", " : "") + x.keys[i].str() + ": " + x.values[i].str();
                return s + "}";
            }
        },
        v);
}

Value defaultValue(const frontend::DataType& t) {
    switch (t.kind) {
        case DK::Bool: return Value(false);
        case DK::Uint256: return Value(U256(0));
        case DK::Address: return Value(Address{});
        case DK::Bin: return Value(Bytes{});
        case DK::Array:
        case DK::NamedAddressArray: return Value(ArrayV{});
        case DK::Mapping:
        case DK::NamedMapping: return Value(MapV{});
    }
    return Value();
}

bool hasType(const Value& v, const frontend::DataType& t) {
    switch (t.kind) {
        case DK::Bool: return v.isBool();
        case DK::Uint256: return v.isU256();
        case DK::Address: return v.isAddress();
        case DK::Bin: return v.isBin();
        case DK::NamedAddressArray:
            return v.isArray() && std::all_of(v.asArray().items.begin(), v.asArray().items.end(), [](const Value& e) { return e.isAddress(); });
        case DK::Array:
            return v.isArray() &&
                   std::all_of(v.asArray().items.begin(), v.asArray().items.end(), [&](const Value& e) { return hasType(e, t.value->data); });
        case DK::Mapping:
        case DK::NamedMapping: return std::holds_alternative<MapV>(v.v);
    }
    return false;
}

nlohmann::json valueToJson(const Value& v) {
    return std::visit(
        [](const auto& x) -> nlohmann::json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, U256>) return x.str();
            else if constexpr (std::is_same_v<T, bool>) return x;
            else if constexpr (std::is_same_v<T, Address>) return x.str();
            else if constexpr (std::is_same_v<T, Bytes>) return nlohmann::json{{"bin", toHex(x)}};
            else if constexpr (std::is_same_v<T, ArrayV>) {
                auto arr = nlohmann::json::array();
                for (const auto& e : x.items) arr.push_back(valueToJson(e));
                return arr;
            } else {
                auto arr = nlohmann::json::array();
                for (std::size_t i = 0; i < x.keys.size(); ++i) arr.push_back({valueToJson(x.keys[i]), valueToJson(x.values[i])});
                return nlohmann::json{{"map", arr}};
            }
        },
        v.v);
}

namespace {

U256 parseU256(const nlohmann::json& j) {
    if (j.is_number_unsigned()) return U256(j.get<std::uint64_t>());
    if (j.is_number_integer()) {
        auto x = j.get<std::int64_t>();
        if (x < 0) throw std::invalid_argument("negative uint value");
        return U256(static_cast<std::uint64_t>(x));
    }
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw std::invalid_argument("malformed uint value '" + s + "'");
        boost::multiprecision::cpp_int big(s);
        if (big > boost::multiprecision::cpp_int(std::numeric_limits<U256>::max())) throw std::invalid_argument("uint value out of range");
        return U256(big);
    }
    throw std::invalid_argument("expected a uint value, got " + j.dump());
}

}  // namespace

Value valueFromJson(const nlohmann::json& j, const frontend::DataType& t) {
    switch (t.kind) {
        case DK::Bool:
            if (!j.is_boolean()) throw std::invalid_argument("expected a bool value, got " + j.dump());
            return Value(j.get<bool>());
        case DK::Uint256: return Value(parseU256(j));
        case DK::Address:
            if (!j.is_string()) throw std::invalid_argument("expected an address, got " + j.dump());
            return Value(Address::parse(j.get<std::string>()));
        case DK::Bin:
            if (j.is_object() && j.contains("bin")) return Value(fromHex(j["bin"].get<std::string>()));
            if (j.is_string()) return Value(fromHex(j.get<std::string>()));
            throw std::invalid_argument("expected bin bytes, got " + j.dump());
        case DK::Array:
        case DK::NamedAddressArray: {
            if (!j.is_array()) throw std::invalid_argument("expected an array, got " + j.dump());
            ArrayV a;
            auto elem = t.elementType().data;
            for (const auto& e : j) a.items.push_back(valueFromJson(e, elem));
            return Value(std::move(a));
        }
        case DK::Mapping:
        case DK::NamedMapping: throw std::invalid_argument("mapping values cannot be given literally");
    }
    return Value();
}

}  // namespace cloak::interp
