#ifndef HEATLAB_HILBERT_HPP
#define HEATLAB_HILBERT_HPP

#include <Eigen/Dense>
#include <map>
#include <stdexcept>
#include <vector>

#include "heatlab/baths.hpp"

namespace heatlab {

enum class Branch { Up = 0, Down = 1 };
enum class SigmaDirection { UpFromDown, DownFromUp };

// Qubit-phonon Hamiltonian parameters plus the Fock-space truncation.
// The phonon frequency omega0 is the energy unit (conventionally 1).
struct HybridSystem {
    double epsilon = 1.0;  // qubit Zeeman splitting
    double omega0 = 1.0;   // phonon frequency
    double lambda = 0.0;   // qubit-phonon coupling, >= 0
    int n_max = 30;        // Fock indices 0..n_max inclusive

    void validate() const;
};

// Two qubits sharing one mode, three baths (transistor setup).
struct TwoQubitSystem {
    double eps_left = 1.0;
    double eps_right = 1.0;
    double lambda_left = 0.0;
    double lambda_right = 0.0;
    double omega0 = 1.0;
    int n_max = 30;

    void validate() const;
    // Displacement coefficients g_1..g_4 and level offsets Lambda_1..Lambda_4
    // over the spin basis {uu, ud, du, dd}.
    std::array<double, 4> displacements() const;
    std::array<double, 4> level_offsets() const;
};

// Overlap of Fock states displaced by x (Franck-Condon factor)
//   D_nm(x) = e^{-x^2/2} sum_l (-1)^l sqrt(n! m!) x^{n+m-2l}
//                               / ((n-l)! (m-l)! l!).
// Evaluated with log-magnitude terms and compensated summation so it stays
// usable for n, m ~ 100 and |x| up to ~10.
double displacement_coefficient(int n, int m, double x);

// <phi^up_n| sigma_x |phi^down_m> = (-1)^n D_nm(2 lambda / omega0);
// the reverse direction carries (-1)^m.
double sigma_x_element(int n, int m, SigmaDirection dir, const HybridSystem& sys);

// <phi^eta_n| a^dag |phi^eta_m> = sqrt(m+1) delta_{n,m+1} - g_eta delta_{n,m}
double a_dagger_element(int n, int m, Branch branch, const HybridSystem& sys);

// Exact eigenbasis of the system Hamiltonian. States are indexed
// (branch, n) with branches first, n ascending inside a branch.
// raising[u](i, j) caches <i| S_u^dag |j> for each coupling operator
// (S_sigma = sigma_x, S_a = a). Immutable after construction.
struct DressedBasis {
    int n_levels = 0;    // n_max + 1
    int n_branches = 0;  // 2 (single qubit) or 4 (two qubits)
    // Gaps below this magnitude count as exact degeneracies. At resonance
    // (e.g. epsilon = omega0) degenerate level pairs can round to +-1 ulp
    // instead of 0; an ulp-sized gap would pick up a Bose-divergent rate
    // gamma(w) n(w) -> alpha T, so it must be gated like the exact zero.
    double degeneracy_tol = 0.0;
    Eigen::VectorXd energies;
    std::vector<double> displacement;  // g per branch
    std::map<BathLabel, Eigen::MatrixXd> raising;

    int dim() const { return n_levels * n_branches; }
    int index(int branch, int n) const { return branch * n_levels + n; }
    int branch_of(int i) const { return i / n_levels; }
    int level_of(int i) const { return i % n_levels; }
    // E_i - E_j
    double gap(int i, int j) const { return energies[i] - energies[j]; }
};

DressedBasis build_dressed_basis(const HybridSystem& sys);
DressedBasis build_two_qubit_basis(const TwoQubitSystem& sys);

}  // namespace heatlab

#endif
