#ifndef HEATLAB_BATHS_HPP
#define HEATLAB_BATHS_HPP

#include <stdexcept>
#include <string>

namespace heatlab {

// Which coupling operator a bath attaches to. The phonon-mode bath couples
// through a, the qubit baths through sigma_x of the respective qubit.
enum class BathLabel { PhononA, QubitSigma, LeftSigma, RightSigma };

std::string to_string(BathLabel label);

// One Ohmic thermal bath: gamma(w) = alpha * w * exp(-|w|/omega_c).
// Units: hbar = k_B = 1, energies in units of the mode frequency.
struct BathSpec {
    double alpha = 0.0;        // dimensionless Ohmic coupling
    double omega_c = 10.0;     // cutoff frequency
    double temperature = 0.0;  // k_B = 1
    BathLabel label = BathLabel::PhononA;

    void validate() const;
};

// Spectral function gamma(w), w > 0 required (callers gate with the step
// function first; see sequential_rates).
double ohmic_spectral(double omega, const BathSpec& bath);

// Bose-Einstein occupation 1/(exp(w/T) - 1). T = 0 returns exactly 0.
double bose_occupation(double omega, double temperature);

struct SequentialRates {
    double absorb = 0.0;  // kappa^+ = theta(w) gamma(w) n(w)
    double emit = 0.0;    // kappa^- = theta(w) gamma(w) [1 + n(w)]
};

// One-phonon absorption/emission rates. Identically (0, 0) for omega <= 0:
// theta(x) = 1 for x > 0 and theta(x) = 0 for x <= 0.
SequentialRates sequential_rates(double omega, const BathSpec& bath);

}  // namespace heatlab

#endif
