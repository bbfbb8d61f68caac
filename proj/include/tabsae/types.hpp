#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <cmath>

namespace tabsae {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Deterministic 64-bit generator (splitmix64). Used everywhere a seed
/// appears so that results are reproducible across platforms; the standard
/// distributions are avoided because their output is implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0,n). n must be > 0.
    int uniform_int(int n) {
        return int((static_cast<unsigned __int128>(next_u64()) *
                    static_cast<unsigned __int128>(n)) >> 64);
    }

    /// Standard normal via Box-Muller.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        // avoid log(0)
        if (u1 <= 0) u1 = 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Mix a master seed with a stream index into an independent seed.
/// Adding streams never perturbs existing ones.
inline uint64_t mix_seed(uint64_t seed, uint64_t index) {
    Rng r(seed ^ (0xD1B54A32D192ED03ull * (index + 1)));
    return r.next_u64();
}

} // namespace tabsae
