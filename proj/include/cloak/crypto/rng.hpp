#pragma once

#include <cstdint>

#include "cloak/crypto/cryptobox.hpp"

namespace cloak::crypto {

/// Counter-mode SHA-256 generator. Output is a pure function of the seed and
/// the number of draws, on every platform.
class DetRng {
  public:
    explicit DetRng(const Seed& seed) : seed_(seed) {}
    DetRng(const Seed& seed, std::string_view stream);

    FixedBytes<32> next32();
    std::uint64_t nextU64();
    /// Uniform-ish integer in [lo, hi] (modulo bias is irrelevant at these ranges).
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi);

  private:
    Seed seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace cloak::crypto
