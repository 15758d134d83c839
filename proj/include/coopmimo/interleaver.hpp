#ifndef COOPMIMO_INTERLEAVER_HPP
#define COOPMIMO_INTERLEAVER_HPP

#include "coopmimo/errors.hpp"
#include "coopmimo/rng.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace coopmimo {

// Random bit interleaver over one codeword: out[i] = in[perm[i]].
class Interleaver {
public:
    Interleaver() = default;

    Interleaver(std::size_t length, std::uint64_t seed) : seed_(seed), perm_(length)
    {
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        SplitMix64 rng(seed);
        // Fisher-Yates with a plain modulo draw; bias is ~len/2^64.
        for (std::size_t i = length; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % i);
            std::swap(perm_[i - 1], perm_[j]);
        }
    }

    std::size_t size() const noexcept { return perm_.size(); }
    std::uint64_t seed() const noexcept { return seed_; }
    std::span<const std::size_t> permutation() const noexcept { return perm_; }

    template <class T>
    std::vector<T> interleave(std::span<const T> in) const
    {
        check(in.size());
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < perm_.size(); ++i) {
            out[i] = in[perm_[i]];
        }
        return out;
    }

    template <class T>
    std::vector<T> deinterleave(std::span<const T> in) const
    {
        check(in.size());
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < perm_.size(); ++i) {
            out[perm_[i]] = in[i];
        }
        return out;
    }

private:
    void check(std::size_t n) const
    {
        if (n != perm_.size()) {
            throw FramingError("interleaver length mismatch");
        }
    }

    std::uint64_t seed_ = 0;
    std::vector<std::size_t> perm_;
};

} // namespace coopmimo

#endif // COOPMIMO_INTERLEAVER_HPP
