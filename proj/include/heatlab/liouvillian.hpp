#ifndef HEATLAB_LIOUVILLIAN_HPP
#define HEATLAB_LIOUVILLIAN_HPP

#include <Eigen/Dense>
#include <map>

#include "heatlab/baths.hpp"
#include "heatlab/hilbert.hpp"

namespace heatlab {

// Per-bath population-transition generators over the dressed states plus
// their sum. Column convention: per_bath[u](j, i) is the i -> j rate, so
// every column sums to zero and dP/dt = total * P.
struct RateMatrixSet {
    std::map<BathLabel, Eigen::MatrixXd> per_bath;
    Eigen::MatrixXd total;
    Eigen::VectorXd energies;
    int n_levels = 0;
    int n_branches = 0;

    int dim() const { return n_levels * n_branches; }
    double gap(int i, int j) const { return energies[i] - energies[j]; }
    double max_rate() const;
};

// Total from -> to rate mediated by one bath. Upward transitions absorb a
// quantum gamma(d) n(d), downward ones emit gamma(d) [1 + n(d)], both
// weighted by |<upper| S_u^dag |lower>|^2 and theta-gated on the gap.
double transition_rate(int from, int to, const BathSpec& bath, const DressedBasis& basis);

RateMatrixSet build_rate_matrices(const HybridSystem& sys, const BathSpec& bath_a,
                                  const BathSpec& bath_sigma);

RateMatrixSet build_two_qubit_rate_matrices(const TwoQubitSystem& sys, const BathSpec& bath_a,
                                            const BathSpec& bath_left,
                                            const BathSpec& bath_right);

// Generators of the weak-coupling expansion: the lambda-independent parts
// (phonon ladder and resonant spin flip) plus the side-band generator that
// enters with the prefactor (2 lambda / omega0)^2.
struct WeakCouplingMatrices {
    Eigen::MatrixXd m_a;
    Eigen::MatrixXd m_sigma;
    Eigen::MatrixXd m_lambda;  // without the (2 lambda / omega0)^2 factor
};

WeakCouplingMatrices build_weak_coupling_matrices(const HybridSystem& sys, const BathSpec& bath_a,
                                                  const BathSpec& bath_sigma);

}  // namespace heatlab

#endif
