#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cloak {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string toHex(ByteView bytes);
Bytes fromHex(std::string_view hex);

inline Bytes toBytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline void append(Bytes& out, ByteView more) { out.insert(out.end(), more.begin(), more.end()); }

void appendU64(Bytes& out, std::uint64_t v);

/// Fixed-size byte string with value semantics and lowercase hex formatting.
template <std::size_t N>
struct FixedBytes {
    std::array<std::uint8_t, N> bytes{};

    static constexpr std::size_t size() { return N; }
    ByteView view() const { return {bytes.data(), N}; }
    std::string hex() const { return toHex(view()); }
    bool isZero() const {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }

    static FixedBytes fromView(ByteView v) {
        if (v.size() != N) throw std::invalid_argument("FixedBytes: wrong length " + std::to_string(v.size()));
        FixedBytes out;
        std::copy(v.begin(), v.end(), out.bytes.begin());
        return out;
    }
    static FixedBytes fromHexString(std::string_view hex) {
        if (hex.starts_with("0x")) hex.remove_prefix(2);
        auto raw = fromHex(hex);
        return fromView(raw);
    }

    auto operator<=>(const FixedBytes&) const = default;
};

struct Digest : FixedBytes<32> {
    using FixedBytes::FixedBytes;
    Digest() = default;
    Digest(const FixedBytes<32>& b) : FixedBytes(b) {}
};

struct Address : FixedBytes<20> {
    Address() = default;
    Address(const FixedBytes<20>& b) : FixedBytes(b) {}
    /// "0x"-prefixed lowercase hex.
    std::string str() const { return "0x" + hex(); }
    static Address parse(std::string_view s) { return Address(FixedBytes<20>::fromHexString(s)); }
};

}  // namespace cloak
