#include "enact/categorical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "enact/error.hpp"

namespace enact {

Categorical Categorical::from_weights(std::vector<double> weights) {
    if (weights.empty()) throw ValidationError("categorical: empty weight vector");
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw ValidationError("categorical: weights must be finite and non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw ValidationError("categorical: zero total mass");
    for (double& w : weights) w /= total;
    return Categorical(std::move(weights));
}

Categorical Categorical::from_probs(std::vector<double> probs) {
    double total = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0)
            throw ValidationError("categorical: probabilities must be finite and non-negative");
        total += p;
    }
    if (probs.empty() || std::abs(total - 1.0) > 1e-12)
        throw ValidationError("categorical: probabilities must sum to 1");
    return Categorical(std::move(probs));
}

Categorical Categorical::uniform(std::size_t n) {
    if (n == 0) throw ValidationError("categorical: uniform over zero options");
    return Categorical(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Categorical Categorical::point_mass(std::size_t n, std::size_t index) {
    if (index >= n) throw ValidationError("categorical: point mass index out of range");
    std::vector<double> p(n, 0.0);
    p[index] = 1.0;
    return Categorical(std::move(p));
}

std::size_t Categorical::argmax() const {
    auto it = std::max_element(probs_.begin(), probs_.end());
    return static_cast<std::size_t>(std::distance(probs_.begin(), it));
}

std::size_t Categorical::support_size() const {
    return static_cast<std::size_t>(
        std::count_if(probs_.begin(), probs_.end(), [](double p) { return p > 0.0; }));
}

double shannon_entropy(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > kProbabilityFloor) h -= p * std::log2(p);
    }
    // Rounding can leave -0.0 or a tiny negative on point masses.
    return std::max(h, 0.0);
}

double shannon_entropy(const Categorical& dist) { return shannon_entropy(dist.probs()); }

double binary_entropy(double p) {
    const double q[2] = {p, 1.0 - p};
    return shannon_entropy(std::span<const double>(q, 2));
}

}  // namespace enact
