#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fdrec/rng.hpp"

using namespace fdrec;

using A4 = std::array<std::uint32_t, 4>;
using A2 = std::array<std::uint32_t, 2>;

TEST_SUITE("rng") {

TEST_CASE("keyed block reproduces the reference known-answer vectors") {
    CHECK(Philox4x32::block(A4{0u, 0u, 0u, 0u}, A2{0u, 0u}) ==
          A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::block(A4{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                            A2{0xffffffffu, 0xffffffffu}) ==
          A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::block(A4{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                            A2{0xa4093822u, 0x299f31d0u}) ==
          A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("draws walk the block counter in order with the stream in the high words") {
    Rng rng(0x12345678abcdef01ull, 7);
    const A2 key{0xabcdef01u, 0x12345678u};
    const A4 b0 = Philox4x32::block(A4{0u, 0u, 7u, 0u}, key);
    const A4 b1 = Philox4x32::block(A4{1u, 0u, 7u, 0u}, key);
    for (const auto w : b0) {
        CHECK(rng.next_u32() == w);
    }
    for (const auto w : b1) {
        CHECK(rng.next_u32() == w);
    }
}

TEST_CASE("next_u64 packs two words low half first") {
    Rng a(42), b(42);
    const std::uint64_t lo = a.next_u32();
    const std::uint64_t hi = a.next_u32();
    CHECK(b.next_u64() == ((hi << 32) | lo));
}

TEST_CASE("child seed derivation walks the splitmix64 sequence") {
    // First three outputs of the splitmix64 engine seeded with 0.
    CHECK(derive_seed(0, 0) == 0xE220A8397B1DCDAFull);
    CHECK(derive_seed(0, 1) == 0x6E789E6AA1B965F4ull);
    CHECK(derive_seed(0, 2) == 0x06C45D188009454Full);
    CHECK(derive_seed(1, 0) != derive_seed(0, 0));
    CHECK(derive_seed(0, 0) != derive_seed(0, 1));
}

TEST_CASE("uniform01 lies in (0, 1] and is the documented function of the raw bits") {
    Rng rng(2024);
    Rng probe(2024);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform01();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
        const std::uint64_t bits = probe.next_u64();
        CHECK(u == static_cast<double>((bits >> 11) + 1) * 0x1.0p-53);
    }
}

TEST_CASE("same state replays the stream, different streams decorrelate") {
    Rng a(9, 0), b(9, 0), c(9, 1);
    bool all_equal = true;
    bool any_different = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint32_t x = a.next_u32();
        const std::uint32_t y = b.next_u32();
        const std::uint32_t z = c.next_u32();
        all_equal = all_equal && (x == y);
        any_different = any_different || (x != z);
    }
    CHECK(all_equal);
    CHECK(any_different);
}

TEST_CASE("normal pairs come from one Box-Muller transform, cosine first") {
    Rng rng(321);
    Rng raw(321);
    const double u1 = raw.uniform01();
    const double u2 = raw.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    CHECK(rng.normal() == r * std::cos(theta));
    CHECK(rng.normal() == r * std::sin(theta));
    // The pair cache must not leak across differently seeded instances.
    Rng other(322);
    CHECK(other.normal() != r * std::sin(theta));
}

TEST_CASE("normal sample moments are close to standard") {
    Rng rng(555);
    const int n = 100000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum_sq += z * z;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("uniform draws pass a Kolmogorov-Smirnov check at the 1% level") {
    Rng rng(777);
    const int n = 2000;
    std::vector<double> u(n);
    for (auto& v : u) {
        v = rng.uniform01();
    }
    std::sort(u.begin(), u.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        d = std::max(d, u[i] - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - u[i]);
    }
    CHECK(d * std::sqrt(static_cast<double>(n)) < 1.63);
}

}  // TEST_SUITE
