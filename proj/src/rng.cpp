#include "riccati/rng.hpp"

#include <cmath>

namespace riccati {

namespace {

constexpr std::uint64_t kPhiloxM = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(prod >> 64);
    lo = static_cast<std::uint64_t>(prod);
}

inline void philox2x64(std::uint64_t c0, std::uint64_t c1, std::uint64_t key,
                       std::uint64_t& r0, std::uint64_t& r1) {
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi, lo;
        mulhilo(kPhiloxM, c0, hi, lo);
        c0 = hi ^ key ^ c1;
        c1 = lo;
        key += kGolden;
    }
    r0 = c0;
    r1 = c1;
}

// 128-layer ziggurat tables for the standard normal (Marsaglia-Tsang layout,
// rescaled to 63-bit integer magnitudes).
struct ZigguratTables {
    std::uint64_t kn[128];
    double wn[128];
    double fn[128];
    ZigguratTables() {
        const double m1 = 9223372036854775808.0;  // 2^63
        double dn = 3.442619855899;
        const double vn = 9.91256303526217e-3;
        double tn = dn;
        const double q = vn / std::exp(-0.5 * dn * dn);
        kn[0] = static_cast<std::uint64_t>((dn / q) * m1);
        kn[1] = 0;
        wn[0] = q / m1;
        wn[127] = dn / m1;
        fn[0] = 1.0;
        fn[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
            kn[i + 1] = static_cast<std::uint64_t>((dn / tn) * m1);
            tn = dn;
            fn[i] = std::exp(-0.5 * dn * dn);
            wn[i] = dn / m1;
        }
    }
};

const ZigguratTables zig;

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed)), stream_(stream) {}

std::uint64_t Rng::next_u64() {
    if (have_ == 0) {
        philox2x64(block_, stream_, key_, buf_[0], buf_[1]);
        ++block_;
        have_ = 2;
    }
    return buf_[2 - have_--];
}

double Rng::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    const double r_tail = 3.442619855899;
    for (;;) {
        const std::uint64_t u = next_u64();
        const std::int64_t hz = static_cast<std::int64_t>(u);
        const int iz = static_cast<int>(u & 127);
        const std::uint64_t az = hz >= 0 ? static_cast<std::uint64_t>(hz)
                                         : ~static_cast<std::uint64_t>(hz) + 1;
        if (az < zig.kn[iz]) return static_cast<double>(hz) * zig.wn[iz];
        if (iz == 0) {
            // Tail beyond r_tail: Marsaglia's exact exponential rejection.
            double x, y;
            do {
                x = -std::log(uniform()) / r_tail;
                y = -std::log(uniform());
            } while (y + y < x * x);
            return hz > 0 ? r_tail + x : -(r_tail + x);
        }
        const double x = static_cast<double>(hz) * zig.wn[iz];
        if (zig.fn[iz] + uniform() * (zig.fn[iz - 1] - zig.fn[iz]) <
            std::exp(-0.5 * x * x))
            return x;
    }
}

}  // namespace riccati
