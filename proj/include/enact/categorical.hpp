#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace enact {

// Probabilities below this are treated as zero before taking logs.
inline constexpr double kProbabilityFloor = 1e-300;

// Finite probability distribution. Always normalized (sum within 1e-12) with
// non-negative entries; construction from raw weights normalizes.
class Categorical {
public:
    Categorical() = default;

    // Throws ValidationError on negative/non-finite weights or zero total mass.
    static Categorical from_weights(std::vector<double> weights);
    // Like from_weights but the input must already sum to 1 within 1e-12.
    static Categorical from_probs(std::vector<double> probs);
    static Categorical uniform(std::size_t n);
    static Categorical point_mass(std::size_t n, std::size_t index);

    std::size_t size() const noexcept { return probs_.size(); }
    bool empty() const noexcept { return probs_.empty(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::span<const double> probs() const noexcept { return probs_; }

    // Index of the largest entry; ties go to the lowest index.
    std::size_t argmax() const;
    // Number of entries with strictly positive mass.
    std::size_t support_size() const;

    bool operator==(const Categorical&) const = default;

private:
    explicit Categorical(std::vector<double> probs) : probs_(std::move(probs)) {}

    std::vector<double> probs_;
};

// Shannon entropy in bits, 0 log 0 = 0.
double shannon_entropy(const Categorical& dist);
double shannon_entropy(std::span<const double> probs);

// Binary entropy H(p) in bits.
double binary_entropy(double p);

}  // namespace enact
