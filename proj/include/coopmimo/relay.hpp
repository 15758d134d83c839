#ifndef COOPMIMO_RELAY_HPP
#define COOPMIMO_RELAY_HPP

#include "coopmimo/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>

namespace coopmimo {

// Amplify-and-forward gains of one relay: after normalization the relay holds
// h_eq * X + h_nor * V with unit average power.
struct AfGain {
    std::complex<double> h_eq{1.0, 0.0};
    double h_nor = 0.0;
};

inline AfGain af_gain(double p_linear, std::complex<double> h, double sigma2)
{
    if (!(p_linear > 0.0)) {
        throw DomainError("relay receive power must be positive");
    }
    if (sigma2 < 0.0) {
        throw DomainError("noise variance must be non-negative");
    }
    const double denom2 = p_linear * std::norm(h) + sigma2;
    if (!(denom2 > 0.0)) {
        throw DegenerateLinkError("relay link has zero gain and zero noise");
    }
    const double inv = 1.0 / std::sqrt(denom2);
    return {std::sqrt(p_linear) * h * inv, inv};
}

// Scales a received relay sample to unit average power.
inline std::pair<std::complex<double>, AfGain> af_normalize(std::complex<double> received, double p_linear,
                                                            std::complex<double> h, double sigma2)
{
    const AfGain g = af_gain(p_linear, h, sigma2);
    return {received * g.h_nor, g};
}

// Row `r` (0-based) of the codeword relay r computed from its own noisy input.
inline Eigen::VectorXcd relay_transmit_row(const Eigen::MatrixXcd& codeword, std::size_t r)
{
    if (r >= static_cast<std::size_t>(codeword.rows())) {
        throw std::out_of_range("relay index " + std::to_string(r) + " outside codeword with " +
                                std::to_string(codeword.rows()) + " rows");
    }
    return codeword.row(static_cast<Eigen::Index>(r)).transpose();
}

} // namespace coopmimo

#endif // COOPMIMO_RELAY_HPP
