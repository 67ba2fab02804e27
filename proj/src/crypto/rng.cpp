#include "cloak/crypto/rng.hpp"

namespace cloak::crypto {

DetRng::DetRng(const Seed& seed, std::string_view stream) {
    Bytes buf(seed.bytes.begin(), seed.bytes.end());
    append(buf, toBytes(stream));
    seed_ = hash(buf);
}

FixedBytes<32> DetRng::next32() {
    Bytes buf(seed_.bytes.begin(), seed_.bytes.end());
    appendU64(buf, counter_++);
    return hash(buf);
}

std::uint64_t DetRng::nextU64() {
    auto block = next32();
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | block.bytes[i];
    return v;
}

std::uint64_t DetRng::range(std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) throw std::invalid_argument("DetRng::range: empty interval");
    std::uint64_t span = hi - lo + 1;
    if (span == 0) return nextU64();
    return lo + nextU64() % span;
}

}  // namespace cloak::crypto
