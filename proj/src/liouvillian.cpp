#include "heatlab/liouvillian.hpp"

#include <cmath>

namespace heatlab {

double RateMatrixSet::max_rate() const {
    return total.diagonal().cwiseAbs().maxCoeff();
}

double transition_rate(int from, int to, const BathSpec& bath, const DressedBasis& basis) {
    const auto it = basis.raising.find(bath.label);
    if (it == basis.raising.end())
        throw std::invalid_argument("transition_rate: bath label unknown to this basis");
    const Eigen::MatrixXd& up = it->second;
    if (from < 0 || to < 0 || from >= basis.dim() || to >= basis.dim() ||
        up.rows() != basis.dim())
        throw std::invalid_argument("transition_rate: dimension mismatch");
    if (from == to) return 0.0;

    double d = basis.gap(to, from);
    if (std::fabs(d) <= basis.degeneracy_tol) d = 0.0;
    if (d > 0.0) {
        const double el = up(to, from);  // <to| S^dag |from>
        if (el == 0.0) return 0.0;
        return sequential_rates(d, bath).absorb * el * el;
    }
    if (d < 0.0) {
        const double el = up(from, to);  // |<to| S |from>| = |<from| S^dag |to>|
        if (el == 0.0) return 0.0;
        return sequential_rates(-d, bath).emit * el * el;
    }
    return 0.0;  // degenerate gap is theta-gated
}

namespace {

RateMatrixSet assemble(const DressedBasis& basis, const std::vector<BathSpec>& baths) {
    RateMatrixSet set;
    set.n_levels = basis.n_levels;
    set.n_branches = basis.n_branches;
    set.energies = basis.energies;
    const int d = basis.dim();
    set.total = Eigen::MatrixXd::Zero(d, d);
    for (const BathSpec& bath : baths) {
        bath.validate();
        Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (i == j) continue;
                const double w = transition_rate(i, j, bath, basis);
                if (w != 0.0) {
                    r(j, i) += w;
                    r(i, i) -= w;
                }
            }
        set.total += r;
        set.per_bath[bath.label] = std::move(r);
    }
    return set;
}

}  // namespace

RateMatrixSet build_rate_matrices(const HybridSystem& sys, const BathSpec& bath_a,
                                  const BathSpec& bath_sigma) {
    if (bath_a.label != BathLabel::PhononA || bath_sigma.label != BathLabel::QubitSigma)
        throw std::invalid_argument("build_rate_matrices: bath labels must be (a, sigma)");
    return assemble(build_dressed_basis(sys), {bath_a, bath_sigma});
}

RateMatrixSet build_two_qubit_rate_matrices(const TwoQubitSystem& sys, const BathSpec& bath_a,
                                            const BathSpec& bath_left,
                                            const BathSpec& bath_right) {
    if (bath_a.label != BathLabel::PhononA || bath_left.label != BathLabel::LeftSigma ||
        bath_right.label != BathLabel::RightSigma)
        throw std::invalid_argument(
            "build_two_qubit_rate_matrices: bath labels must be (a, sigma_L, sigma_R)");
    return assemble(build_two_qubit_basis(sys), {bath_a, bath_left, bath_right});
}

WeakCouplingMatrices build_weak_coupling_matrices(const HybridSystem& sys, const BathSpec& bath_a,
                                                  const BathSpec& bath_sigma) {
    sys.validate();
    bath_a.validate();
    bath_sigma.validate();
    const int levels = sys.n_max + 1;
    const int d = 2 * levels;
    auto up_idx = [&](int n) { return n; };
    auto dn_idx = [&](int n) { return levels + n; };

    WeakCouplingMatrices wm;
    wm.m_a = Eigen::MatrixXd::Zero(d, d);
    wm.m_sigma = Eigen::MatrixXd::Zero(d, d);
    wm.m_lambda = Eigen::MatrixXd::Zero(d, d);

    auto add = [](Eigen::MatrixXd& m, int to, int from, double w) {
        m(to, from) += w;
        m(from, from) -= w;
    };

    const SequentialRates ka = sequential_rates(sys.omega0, bath_a);
    for (int b = 0; b < 2; ++b) {
        const int off = b * levels;
        for (int m = 0; m + 1 < levels; ++m) {
            add(wm.m_a, off + m + 1, off + m, (m + 1) * ka.absorb);
            add(wm.m_a, off + m, off + m + 1, (m + 1) * ka.emit);
        }
    }

    const SequentialRates ks = sequential_rates(sys.epsilon, bath_sigma);
    for (int m = 0; m < levels; ++m) {
        add(wm.m_sigma, up_idx(m), dn_idx(m), ks.absorb);
        add(wm.m_sigma, dn_idx(m), up_idx(m), ks.emit);
    }

    // Side-band channels, coefficients of (2 lambda / omega0)^2:
    //   (down,m) -> (up,m+1)   gap eps + omega0, weight m+1
    //   (up,m+1) -> (down,m)   emission at eps + omega0
    //   (down,m+1) <-> (up,m)  gap eps - omega0 (sign decides direction)
    // snap ulp-sized detunings to exact resonance, as in transition_rate
    auto snap = [&](double w) { return (std::fabs(w) <= 1e-9 * sys.omega0) ? 0.0 : w; };
    const SequentialRates k_sum = sequential_rates(snap(sys.epsilon + sys.omega0), bath_sigma);
    const SequentialRates k_up = sequential_rates(snap(sys.epsilon - sys.omega0), bath_sigma);
    const SequentialRates k_dn = sequential_rates(snap(sys.omega0 - sys.epsilon), bath_sigma);
    for (int m = 0; m + 1 < levels; ++m) {
        const double w = m + 1.0;
        add(wm.m_lambda, up_idx(m + 1), dn_idx(m), w * k_sum.absorb);
        add(wm.m_lambda, dn_idx(m), up_idx(m + 1), w * k_sum.emit);
        add(wm.m_lambda, up_idx(m), dn_idx(m + 1), w * (k_up.absorb + k_dn.emit));
        add(wm.m_lambda, dn_idx(m + 1), up_idx(m), w * (k_up.emit + k_dn.absorb));
    }
    return wm;
}

}  // namespace heatlab
