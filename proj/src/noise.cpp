#include "neb/noise.hpp"

#include <stdexcept>

namespace neb {

NoiseModel NoiseModel::bitwise(double q) {
    if (q < 0.0) throw std::invalid_argument("NoiseModel: q must be >= 0");
    return {NoiseKind::bitwise, q};
}

NoiseModel NoiseModel::one_bit(double q) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("NoiseModel: one_bit requires q in [0,1]");
    return {NoiseKind::one_bit, q};
}

void NoiseModel::validate(std::size_t n) const {
    switch (kind) {
    case NoiseKind::none: return;
    case NoiseKind::bitwise:
        if (q < 0.0 || q / static_cast<double>(n) > 1.0)
            throw std::invalid_argument("NoiseModel: bitwise rate q/n outside [0,1]");
        return;
    case NoiseKind::one_bit:
        if (q < 0.0 || q > 1.0)
            throw std::invalid_argument("NoiseModel: one_bit requires q in [0,1]");
        return;
    }
    throw std::logic_error("NoiseModel: unknown kind");
}

void apply_noise(BitString& x, const NoiseModel& noise, RandomStream& rng) {
    noise.validate(x.size());
    if (noise.kind == NoiseKind::none || noise.q == 0.0) return;
    const std::size_t n = x.size();
    if (noise.kind == NoiseKind::bitwise) {
        const std::uint64_t threshold =
            RandomStream::bernoulli_threshold(noise.q / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            if (rng.bernoulli_with(threshold)) x.flip(i);
    } else {
        if (rng.bernoulli(noise.q)) x.flip(rng.below(static_cast<std::uint32_t>(n)));
    }
}

BitString perturb(const BitString& x, const NoiseModel& noise, RandomStream& rng) {
    BitString out = x;
    apply_noise(out, noise, rng);
    return out;
}

}  // namespace neb
