#include "latentpack/rng.hpp"

#include <cmath>
#include <numbers>

namespace latentpack::rng {

double Stream::next_normal() {
    // Box-Muller; u1 nudged away from zero so log stays finite.
    double u1 = next_real();
    double u2 = next_real();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t inverse_cdf(std::span<const double> probs, double u) {
    if (probs.empty()) throw ParamError("inverse_cdf: empty distribution");
    // The first index where the running sum exceeds u is always one with
    // positive mass, since the sum only moves there.
    double cum = 0.0;
    std::size_t last_positive = 0;
    bool any_positive = false;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0) {
            last_positive = i;
            any_positive = true;
        }
        cum += probs[i];
        if (u < cum) return i;
    }
    return any_positive ? last_positive : 0;
}

}  // namespace latentpack::rng
