#ifndef HEATLAB_ANALYSIS_HPP
#define HEATLAB_ANALYSIS_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "heatlab/observables.hpp"

namespace heatlab {

struct InsufficientGrid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One solved parameter point of a sweep.
struct SweepRow {
    double axis = 0.0;  // lambda, delta_T, ... depending on the sweep
    double j_ss = 0.0;
    double sigma_z = 0.0;
    int n_max_used = 0;
    double residual = 0.0;
    std::vector<double> populations;  // low-lying dressed populations (up then down)
};

// How many low Fock levels each SweepRow keeps for reporting.
inline constexpr int kSweepPopulationLevels = 3;

// J_ss(lambda) at fixed bath temperatures.
std::vector<SweepRow> sweep_coupling(const HybridSystem& base, const BathSpec& bath_a,
                                     const BathSpec& bath_sigma, std::span<const double> lambdas,
                                     int jobs = 1);

// J_ss(delta_T) with T_a = T0 + dT/2 and T_sigma = T0 - dT/2.
std::vector<SweepRow> sweep_temperature_bias(const HybridSystem& base, const BathSpec& bath_a,
                                             const BathSpec& bath_sigma, double t0,
                                             std::span<const double> bias, int jobs = 1);

struct NdtcReport {
    bool present = false;
    double peak_bias = 0.0;
    double suppression_ratio = 0.0;  // J at the largest bias over J at the peak
};

// Interior-maximum detector over a monotone positive-bias grid. "Present"
// requires the endpoint current to sit below (1 - threshold) of the peak.
NdtcReport detect_ndtc(std::span<const double> bias, std::span<const double> current,
                       double threshold = 0.1);

// R = |J(dT) + J(-dT)| / max(|J(dT)|, |J(-dT)|), in [0, 2]; 0 with a flag
// when both currents vanish.
double rectification_factor(double j_forward, double j_reverse, bool* both_zero = nullptr);

struct AmplificationRow {
    double t_gate = 0.0;
    double j_left = 0.0;   // gate current, into the sigma_L bath
    double j_right = 0.0;  // drain current, into the sigma_R bath
    double beta = 0.0;     // |dJ_R / dJ_L| over the gate grid
    bool beta_unbounded = false;
};

// Transistor characteristic over a gate-temperature grid; derivatives by
// central differences (one-sided at the endpoints).
std::vector<AmplificationRow> amplification_factor(const TwoQubitSystem& sys,
                                                   const BathSpec& bath_a, BathSpec bath_left,
                                                   const BathSpec& bath_right,
                                                   std::span<const double> gate_grid,
                                                   int jobs = 1);

// Run fn(i) for i in [0, count) on the given number of worker threads;
// output ordering is the caller's responsibility (index-addressed).
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

}  // namespace heatlab

#endif
