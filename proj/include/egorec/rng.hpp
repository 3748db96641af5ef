#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace egorec {

// Finalizer from splitmix64. Used both for seed derivation and as the
// per-step output mix of Rng.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministically derives a sub-seed from a master seed and a list of
// stream tags (command id, user id, split index, replicate index, ...).
// All randomness in the library flows through this so that serial and
// parallel runs, and repeated runs with the same --seed, agree exactly.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
    for (std::uint64_t p : parts) {
        h = mix64(h ^ (p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
    }
    return h;
}

// Small self-contained PRNG (splitmix64). Unlike the std:: distributions,
// its output is identical across standard library implementations, which
// keeps reports byte-reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform integer in [0, bound), bound > 0. Unbiased via rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct elements drawn uniformly from pool, in draw order.
    // Returns the whole pool (shuffled) if k >= pool size.
    template <typename T>
    std::vector<T> sample(const std::vector<T>& pool, std::size_t k) {
        std::vector<T> v(pool);
        if (k > v.size()) k = v.size();
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(v.size() - i));
            std::swap(v[i], v[j]);
        }
        v.resize(k);
        return v;
    }

  private:
    std::uint64_t state_;
};

// Stream tags for derive_seed. Keeping them in one place avoids accidental
// collisions between unrelated random streams.
namespace seed_tag {
inline constexpr std::uint64_t split = 0x5054;
inline constexpr std::uint64_t eval_split = 0x455053;
inline constexpr std::uint64_t random_pool = 0x524B;
inline constexpr std::uint64_t synth_graph = 0x5347;
inline constexpr std::uint64_t synth_likes = 0x534C;
inline constexpr std::uint64_t item_null = 0x494E;
inline constexpr std::uint64_t friend_null = 0x464E;
inline constexpr std::uint64_t friend_vs_random = 0x465652;
inline constexpr std::uint64_t replicate = 0x5250;
inline constexpr std::uint64_t coverage_item = 0x4349;
inline constexpr std::uint64_t coverage_friend = 0x4346;
}  // namespace seed_tag

}  // namespace egorec
