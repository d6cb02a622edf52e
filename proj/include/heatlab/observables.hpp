#ifndef HEATLAB_OBSERVABLES_HPP
#define HEATLAB_OBSERVABLES_HPP

#include <map>

#include "heatlab/steadystate.hpp"

namespace heatlab {

// Bath-resolved currents. Sign convention: J_u > 0 means energy flows into
// bath u; for the two-bath system J_ss = J_sigma = -J_a.
struct CurrentReport {
    std::map<BathLabel, double> j_per_bath;
    double j_ss = 0.0;
    double conservation_residual = 0.0;  // |sum_u J_u|
};

// Steady power into one bath: J_u = -E^T (R_u P). Downward transitions
// deposit their gap into the bath, upward ones withdraw it.
double heat_current(BathLabel bath, const SteadyStateResult& pops, const RateMatrixSet& rates);

CurrentReport current_report(const SteadyStateResult& pops, const RateMatrixSet& rates);

// Weak-coupling current through the phonon ladder,
//   J_ss = w0 sum_{m,eta} m [kappa+_a P_{m-1,eta} - kappa-_a P_{m,eta}].
double weak_limit_current(const Eigen::VectorXd& pops, const HybridSystem& sys,
                          const BathSpec& bath_a);

// Closed-form strong-coupling current (double sum over D^2_nm weighted by
// the symmetrized emission/absorption factor [1 + 2 n_sigma]).
double strong_coupling_current(const HybridSystem& sys, const BathSpec& bath_a,
                               const BathSpec& bath_sigma);

// <sigma_z> = sum_n (P_{n,up} - P_{n,down}), in [-1, 1].
double qubit_polarization(const Eigen::VectorXd& pops, int n_levels);

}  // namespace heatlab

#endif
