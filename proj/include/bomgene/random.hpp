#pragma once

// Counter-based random streams.
//
// A RandomSource is a (seed, stream_id) key. Child streams are derived by
// hashing a stable identifier into the stream id, so every consumer (a tree,
// a (tree, feature) permutation, a Boruta iteration) owns an independent
// sequence regardless of which thread evaluates it or in what order.
//
// All sampling helpers below are written out explicitly rather than going
// through <random> distributions, whose algorithms are implementation
// defined; generated files and selections are therefore identical across
// standard libraries.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <utility>

namespace bomgene {

namespace detail {

inline constexpr std::uint64_t splitmix_finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

} // namespace detail

struct RandomSource {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    /// Derived stream keyed by `id`; distinct ids give unrelated sequences.
    constexpr RandomSource child(std::uint64_t id) const noexcept {
        const std::uint64_t mixed =
            detail::splitmix_finalize(stream_id ^ detail::splitmix_finalize(id + detail::golden_gamma));
        return RandomSource{seed, mixed + 1};
    }

    friend constexpr bool operator==(const RandomSource&, const RandomSource&) = default;
};

/// Generator for one stream. Output i is a bijective mix of (key + i * gamma),
/// so the sequence is a pure function of (seed, stream_id).
class Rng {
public:
    using result_type = std::uint64_t;

    explicit constexpr Rng(RandomSource source) noexcept
        : key_(detail::splitmix_finalize(source.seed ^ detail::splitmix_finalize(source.stream_id ^ 0x5851f42d4c957f2dULL))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return detail::splitmix_finalize(key_ + counter_ * detail::golden_gamma);
    }

    /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 1) {
            return 0;
        }
        std::uint64_t x = (*this)();
        unsigned __int128 product = static_cast<unsigned __int128>(x) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = (*this)();
                product = static_cast<unsigned __int128>(x) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (one value per call, no caching).
    double normal() noexcept {
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// In-place Fisher-Yates shuffle.
template <class T>
void shuffle(std::span<T> values, Rng& rng) noexcept {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        using std::swap;
        swap(values[i - 1], values[j]);
    }
}

} // namespace bomgene
