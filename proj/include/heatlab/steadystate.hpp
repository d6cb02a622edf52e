#ifndef HEATLAB_STEADYSTATE_HPP
#define HEATLAB_STEADYSTATE_HPP

#include <Eigen/Dense>
#include <stdexcept>

#include "heatlab/liouvillian.hpp"

namespace heatlab {

struct NonErgodicError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StepTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularReducedOperator : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SteadyStateResult {
    Eigen::VectorXd populations;  // nonnegative, sums to 1
    double residual = 0.0;        // ||G p||_inf relative to the largest rate
    int n_max_used = 0;
    bool converged = false;
    double clipped = 0.0;  // total negative round-off removed after solve
};

// Stationary populations of the total generator. Uses diagonal-free GTH
// elimination, which keeps componentwise relative accuracy even when rate
// scales span many decades (strong-coupling regime). Throws NonErgodicError
// when the transition graph is disconnected.
SteadyStateResult solve_steady_state(const RateMatrixSet& rates, double tolerance = 1e-10);

// Oracle: integrate dP/dt = G P with fixed-step RK4 over the given horizon.
// Long horizons are evaluated through binary powering of the one-step
// propagator (same linear map, evaluated in O(log steps) matrix products).
Eigen::VectorXd evolve_to_stationarity(const RateMatrixSet& rates, const Eigen::VectorXd& p0,
                                       double horizon, double dt);

// Second-order perturbative steady state in (2 lambda / omega0)^2:
//   P_ss ~ P0 - (2 lambda/omega0)^2 Q (M_a + M_sigma)^+ Q M_lambda P0
// with P0 the product Gibbs state and Q = 1 - P0 <<I|.
SteadyStateResult solve_weak_coupling_perturbative(const HybridSystem& sys, const BathSpec& bath_a,
                                                   const BathSpec& bath_sigma);

// Closed-form strong-coupling populations: both branches thermal at T_a,
//   P_{n,up/down} = exp[-(n w0 +- eps/2)/T_a] / (2 cosh(eps/2T_a) [1+n_a(w0)]).
Eigen::VectorXd strong_coupling_populations(const HybridSystem& sys, const BathSpec& bath_a);

struct TruncationCertificate {
    int n_max = 0;
    double current_delta = 0.0;  // last relative change of the steady current
};

// Grow n_max until the steady current is stable to 0.1 percent.
TruncationCertificate certify_truncation(HybridSystem sys, const BathSpec& bath_a,
                                         const BathSpec& bath_sigma, int growth,
                                         int n_max_cap = 200, double rel_tol = 1e-3);

}  // namespace heatlab

#endif
