#include "heatlab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heatlab {

void HybridSystem::validate() const {
    if (!std::isfinite(epsilon))
        throw std::invalid_argument("HybridSystem: epsilon must be finite");
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw std::invalid_argument("HybridSystem: omega0 must be > 0");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("HybridSystem: lambda must be >= 0");
    if (n_max < 1)
        throw std::invalid_argument("HybridSystem: n_max must be >= 1");
}

void TwoQubitSystem::validate() const {
    if (!std::isfinite(eps_left) || !std::isfinite(eps_right))
        throw std::invalid_argument("TwoQubitSystem: splittings must be finite");
    if (!(lambda_left >= 0.0) || !(lambda_right >= 0.0))
        throw std::invalid_argument("TwoQubitSystem: couplings must be >= 0");
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw std::invalid_argument("TwoQubitSystem: omega0 must be > 0");
    if (n_max < 1)
        throw std::invalid_argument("TwoQubitSystem: n_max must be >= 1");
}

std::array<double, 4> TwoQubitSystem::displacements() const {
    const double gl = lambda_left / omega0;
    const double gr = lambda_right / omega0;
    return {gl + gr, gl - gr, -gl + gr, -gl - gr};
}

std::array<double, 4> TwoQubitSystem::level_offsets() const {
    const double sum2 = lambda_left + lambda_right;
    const double dif2 = lambda_left - lambda_right;
    return {(eps_left + eps_right) / 2.0 - sum2 * sum2 / omega0,
            (eps_left - eps_right) / 2.0 - dif2 * dif2 / omega0,
            (-eps_left + eps_right) / 2.0 - dif2 * dif2 / omega0,
            (-eps_left - eps_right) / 2.0 - sum2 * sum2 / omega0};
}

double displacement_coefficient(int n, int m, double x) {
    if (n < 0 || m < 0)
        throw std::domain_error("displacement_coefficient: negative index");
    if (!std::isfinite(x))
        throw std::domain_error("displacement_coefficient: x must be finite");
    if (x == 0.0) {
        if (n != m) return 0.0;
        return (n % 2 == 0) ? 1.0 : -1.0;
    }

    // Alternating series summed in quad precision. Consecutive terms follow
    //   t_0 = x^{n+m} / sqrt(n! m!),
    //   t_{l+1} = -t_l (n-l)(m-l) / [(l+1) x^2],
    // so no factorial is ever materialized. The sum cancels down by up to
    // ~e^{x^2/2} * combinatorial growth; quad precision keeps ~33 digits,
    // enough for n, m ~ 100 at |x| <= 10 where double and even long double
    // lose every digit. The common prefactor t_0 only needs double-level
    // accuracy (its error does not participate in the cancellation).
    __float128 t = 1.0;
    for (int i = 1; i <= n; ++i) t *= x / std::sqrt(static_cast<long double>(i));
    for (int i = 1; i <= m; ++i) t *= x / std::sqrt(static_cast<long double>(i));
    const __float128 x2 = static_cast<__float128>(x) * x;
    __float128 sum = 0.0;
    const int l_max = std::min(n, m);
    for (int l = 0; l <= l_max; ++l) {
        sum += t;
        t *= -static_cast<__float128>(static_cast<double>(n - l) * (m - l)) /
             (static_cast<__float128>(l + 1) * x2);
    }
    return static_cast<double>(std::exp(-0.5L * static_cast<long double>(x) * x) *
                               static_cast<long double>(sum));
}

namespace {

void check_index(int n, int n_max, const char* who) {
    if (n < 0 || n > n_max) throw std::out_of_range(std::string(who) + ": index out of range");
}

}  // namespace

double sigma_x_element(int n, int m, SigmaDirection dir, const HybridSystem& sys) {
    check_index(n, sys.n_max, "sigma_x_element");
    check_index(m, sys.n_max, "sigma_x_element");
    const double d = displacement_coefficient(n, m, 2.0 * sys.lambda / sys.omega0);
    const int parity = (dir == SigmaDirection::UpFromDown) ? n : m;
    return (parity % 2 == 0) ? d : -d;
}

double a_dagger_element(int n, int m, Branch branch, const HybridSystem& sys) {
    check_index(n, sys.n_max, "a_dagger_element");
    check_index(m, sys.n_max, "a_dagger_element");
    const double g = (branch == Branch::Up ? 1.0 : -1.0) * sys.lambda / sys.omega0;
    if (n == m + 1) return std::sqrt(m + 1.0);
    if (n == m) return -g;
    return 0.0;
}

DressedBasis build_dressed_basis(const HybridSystem& sys) {
    sys.validate();
    DressedBasis basis;
    basis.n_levels = sys.n_max + 1;
    basis.n_branches = 2;
    basis.degeneracy_tol = 1e-9 * sys.omega0;
    const int d = basis.dim();
    basis.energies.resize(d);
    const double g = sys.lambda / sys.omega0;
    basis.displacement = {g, -g};

    const double shift = -sys.lambda * sys.lambda / sys.omega0;
    for (int n = 0; n < basis.n_levels; ++n) {
        basis.energies[basis.index(0, n)] = sys.omega0 * n + shift + sys.epsilon / 2.0;
        basis.energies[basis.index(1, n)] = sys.omega0 * n + shift - sys.epsilon / 2.0;
    }

    // D table for the sigma_x coupling, argument 2 lambda / omega0
    Eigen::MatrixXd dtab(basis.n_levels, basis.n_levels);
    for (int n = 0; n < basis.n_levels; ++n)
        for (int m = 0; m <= n; ++m) {
            dtab(n, m) = displacement_coefficient(n, m, 2.0 * g);
            dtab(m, n) = dtab(n, m);
        }

    Eigen::MatrixXd sig = Eigen::MatrixXd::Zero(d, d);
    for (int n = 0; n < basis.n_levels; ++n)
        for (int m = 0; m < basis.n_levels; ++m) {
            const double el = ((n % 2 == 0) ? 1.0 : -1.0) * dtab(n, m);
            sig(basis.index(0, n), basis.index(1, m)) = el;  // <up,n|sx|down,m>
            sig(basis.index(1, m), basis.index(0, n)) = el;  // hermitian
        }
    basis.raising[BathLabel::QubitSigma] = std::move(sig);

    Eigen::MatrixXd adag = Eigen::MatrixXd::Zero(d, d);
    for (int b = 0; b < 2; ++b) {
        const double gb = basis.displacement[b];
        for (int n = 0; n < basis.n_levels; ++n) {
            adag(basis.index(b, n), basis.index(b, n)) = -gb;
            if (n + 1 < basis.n_levels)
                adag(basis.index(b, n + 1), basis.index(b, n)) = std::sqrt(n + 1.0);
        }
    }
    basis.raising[BathLabel::PhononA] = std::move(adag);
    return basis;
}

DressedBasis build_two_qubit_basis(const TwoQubitSystem& sys) {
    sys.validate();
    DressedBasis basis;
    basis.n_levels = sys.n_max + 1;
    basis.n_branches = 4;
    basis.degeneracy_tol = 1e-9 * sys.omega0;
    const int d = basis.dim();
    basis.energies.resize(d);
    const auto g = sys.displacements();
    const auto lam = sys.level_offsets();
    basis.displacement.assign(g.begin(), g.end());
    for (int b = 0; b < 4; ++b)
        for (int n = 0; n < basis.n_levels; ++n)
            basis.energies[basis.index(b, n)] = sys.omega0 * n + lam[b];

    // sigma^L flips the left qubit: branch pairs (1,3) and (2,4);
    // sigma^R flips the right qubit: branch pairs (1,2) and (3,4).
    auto sigma_table = [&](double lambda_v, const std::vector<std::pair<int, int>>& pairs) {
        Eigen::MatrixXd dtab(basis.n_levels, basis.n_levels);
        for (int n = 0; n < basis.n_levels; ++n)
            for (int m = 0; m <= n; ++m) {
                dtab(n, m) = displacement_coefficient(n, m, 2.0 * lambda_v / sys.omega0);
                dtab(m, n) = dtab(n, m);
            }
        Eigen::MatrixXd sig = Eigen::MatrixXd::Zero(d, d);
        for (const auto& [hi, lo] : pairs)  // hi = qubit-up side of the pair
            for (int n = 0; n < basis.n_levels; ++n)
                for (int m = 0; m < basis.n_levels; ++m) {
                    const double el = ((n % 2 == 0) ? 1.0 : -1.0) * dtab(n, m);
                    sig(basis.index(hi, n), basis.index(lo, m)) = el;
                    sig(basis.index(lo, m), basis.index(hi, n)) = el;
                }
        return sig;
    };
    basis.raising[BathLabel::LeftSigma] = sigma_table(sys.lambda_left, {{0, 2}, {1, 3}});
    basis.raising[BathLabel::RightSigma] = sigma_table(sys.lambda_right, {{0, 1}, {2, 3}});

    Eigen::MatrixXd adag = Eigen::MatrixXd::Zero(d, d);
    for (int b = 0; b < 4; ++b)
        for (int n = 0; n < basis.n_levels; ++n) {
            adag(basis.index(b, n), basis.index(b, n)) = -g[b];
            if (n + 1 < basis.n_levels)
                adag(basis.index(b, n + 1), basis.index(b, n)) = std::sqrt(n + 1.0);
        }
    basis.raising[BathLabel::PhononA] = std::move(adag);
    return basis;
}

}  // namespace heatlab
