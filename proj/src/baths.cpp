#include "heatlab/baths.hpp"

#include <cmath>

namespace heatlab {

std::string to_string(BathLabel label) {
    switch (label) {
        case BathLabel::PhononA: return "a";
        case BathLabel::QubitSigma: return "sigma";
        case BathLabel::LeftSigma: return "sigma_L";
        case BathLabel::RightSigma: return "sigma_R";
    }
    return "?";
}

void BathSpec::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("BathSpec: alpha must be >= 0");
    if (!(omega_c > 0.0) || !std::isfinite(omega_c))
        throw std::invalid_argument("BathSpec: omega_c must be > 0");
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
        throw std::invalid_argument("BathSpec: temperature must be >= 0");
}

double ohmic_spectral(double omega, const BathSpec& bath) {
    if (!(omega > 0.0))
        throw std::domain_error("ohmic_spectral: omega must be > 0");
    return bath.alpha * omega * std::exp(-std::fabs(omega) / bath.omega_c);
}

double bose_occupation(double omega, double temperature) {
    if (!(omega > 0.0))
        throw std::domain_error("bose_occupation: omega must be > 0");
    if (temperature == 0.0) return 0.0;
    const double x = omega / temperature;
    // expm1 keeps small-x accuracy; large x underflows cleanly to 0
    if (x > 700.0) return 0.0;
    return 1.0 / std::expm1(x);
}

SequentialRates sequential_rates(double omega, const BathSpec& bath) {
    if (omega <= 0.0) return {};  // theta gate, exactly zero
    const double g = ohmic_spectral(omega, bath);
    const double n = bose_occupation(omega, bath.temperature);
    return {g * n, g * (1.0 + n)};
}

}  // namespace heatlab
