#include "heatlab/steadystate.hpp"

#include <cmath>

#include "heatlab/observables.hpp"

namespace heatlab {

namespace {

double relative_residual(const RateMatrixSet& rates, const Eigen::VectorXd& p) {
    const double scale = rates.max_rate();
    if (scale == 0.0) return 0.0;
    return (rates.total * p).cwiseAbs().maxCoeff() / scale;
}

void clip_and_normalize(Eigen::VectorXd& p, double& clipped) {
    clipped = 0.0;
    for (int i = 0; i < p.size(); ++i)
        if (p[i] < 0.0) {
            clipped -= p[i];
            p[i] = 0.0;
        }
    const double s = p.sum();
    if (!(s > 0.0)) throw SolverFailure("steady state vector has zero mass");
    p /= s;
}

}  // namespace

SteadyStateResult solve_steady_state(const RateMatrixSet& rates, double tolerance) {
    const int d = rates.total.cols();
    if (d == 0) throw SolverFailure("empty generator");
    if (!rates.total.allFinite()) throw SolverFailure("non-finite generator entries");
    if (rates.max_rate() == 0.0)
        throw NonErgodicError("all rates vanish; stationary state is not unique");

    // GTH elimination on the row-convention chain W(i,j) = rate i -> j.
    // Only additions of nonnegative numbers, so the stationary vector keeps
    // componentwise relative accuracy regardless of rate-scale spread.
    // Extended precision buys a few extra digits in the residual, which the
    // bath-resolved current balance inherits directly.
    using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    LongMatrix w = rates.total.transpose().cast<long double>();
    for (int k = d - 1; k >= 1; --k) {
        long double s = 0.0L;
        for (int j = 0; j < k; ++j) s += w(k, j);
        if (!(s > 0.0L))
            throw NonErgodicError("transition graph is not irreducible (disconnected block)");
        for (int i = 0; i < k; ++i) w(i, k) /= s;
        for (int i = 0; i < k; ++i) {
            const long double wik = w(i, k);
            if (wik == 0.0L) continue;
            for (int j = 0; j < k; ++j)
                if (j != i) w(i, j) += wik * w(k, j);
        }
    }
    Eigen::Matrix<long double, Eigen::Dynamic, 1> pl(d);
    pl[0] = 1.0L;
    for (int k = 1; k < d; ++k) {
        long double s = 0.0L;
        for (int i = 0; i < k; ++i) s += pl[i] * w(i, k);
        pl[k] = s;
    }
    pl /= pl.sum();
    const Eigen::VectorXd p = pl.cast<double>();

    SteadyStateResult result;
    result.populations = p;
    clip_and_normalize(result.populations, result.clipped);
    result.residual = relative_residual(rates, result.populations);
    result.n_max_used = rates.n_levels - 1;
    result.converged = result.residual < tolerance;
    if (!result.converged)
        throw SolverFailure("steady state residual " + std::to_string(result.residual) +
                            " above tolerance");
    return result;
}

Eigen::VectorXd evolve_to_stationarity(const RateMatrixSet& rates, const Eigen::VectorXd& p0,
                                       double horizon, double dt) {
    const int d = rates.total.cols();
    if (p0.size() != d) throw std::invalid_argument("evolve_to_stationarity: size mismatch");
    const double diag_max = rates.max_rate();
    if (diag_max > 0.0 && dt > 2.0 / diag_max)
        throw StepTooLarge("dt above the stability bound 2/max|diag|");
    if (!(dt > 0.0) || !(horizon >= 0.0))
        throw std::invalid_argument("evolve_to_stationarity: bad horizon or dt");

    const auto steps = static_cast<unsigned long long>(std::ceil(horizon / dt));
    const Eigen::MatrixXd& g = rates.total;
    Eigen::VectorXd p = p0;

    if (steps <= 50000) {
        Eigen::VectorXd k1(d), k2(d), k3(d), k4(d);
        for (unsigned long long s = 0; s < steps; ++s) {
            k1 = g * p;
            k2 = g * (p + 0.5 * dt * k1);
            k3 = g * (p + 0.5 * dt * k2);
            k4 = g * (p + dt * k3);
            p += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    } else {
        // one RK4 step of a linear autonomous system is the fixed matrix
        // I + h G + h^2 G^2/2 + h^3 G^3/6 + h^4 G^4/24; apply it steps times
        // by binary powering
        Eigen::MatrixXd g2 = g * g;
        Eigen::MatrixXd step = Eigen::MatrixXd::Identity(d, d) + dt * g + (dt * dt / 2.0) * g2 +
                               (dt * dt * dt / 6.0) * (g2 * g) +
                               (dt * dt * dt * dt / 24.0) * (g2 * g2);
        Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(d, d);
        unsigned long long n = steps;
        while (n > 0) {
            if (n & 1ULL) acc = step * acc;
            n >>= 1;
            if (n > 0) step = step * step;
        }
        p = acc * p0;
    }
    const double s = p.sum();
    if (s > 0.0) p /= s;  // undo probability drift from round-off
    return p;
}

SteadyStateResult solve_weak_coupling_perturbative(const HybridSystem& sys, const BathSpec& bath_a,
                                                   const BathSpec& bath_sigma) {
    sys.validate();
    const auto wm = build_weak_coupling_matrices(sys, bath_a, bath_sigma);
    const int levels = sys.n_max + 1;
    const int d = 2 * levels;

    // product Gibbs state: qubit at T_sigma, mode at T_a, truncated
    Eigen::VectorXd p0(d);
    const double t_s = bath_sigma.temperature;
    const double t_a = bath_a.temperature;
    const double wq_up = (t_s > 0.0) ? std::exp(-sys.epsilon / (2.0 * t_s))
                                     : (sys.epsilon > 0.0 ? 0.0 : 1.0);
    const double wq_dn = (t_s > 0.0) ? std::exp(sys.epsilon / (2.0 * t_s))
                                     : (sys.epsilon > 0.0 ? 1.0 : 0.0);
    for (int n = 0; n < levels; ++n) {
        const double wn = (t_a > 0.0) ? std::exp(-sys.omega0 * n / t_a) : (n == 0 ? 1.0 : 0.0);
        p0[n] = wq_up * wn;
        p0[levels + n] = wq_dn * wn;
    }
    p0 /= p0.sum();

    SteadyStateResult result;
    result.n_max_used = sys.n_max;
    const double x2 = std::pow(2.0 * sys.lambda / sys.omega0, 2);
    if (sys.lambda == 0.0) {
        result.populations = p0;
    } else {
        const Eigen::MatrixXd g = wm.m_a + wm.m_sigma;
        auto project = [&](Eigen::VectorXd v) -> Eigen::VectorXd {
            return v - p0 * v.sum();  // Q = 1 - |P0>><<I|
        };
        const Eigen::VectorXd y = project(wm.m_lambda * p0);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(g);
        const Eigen::VectorXd z = cod.solve(y);
        const double scale = std::max(y.cwiseAbs().maxCoeff(), 1e-300);
        if ((g * z - y).cwiseAbs().maxCoeff() > 1e-8 * scale)
            throw SingularReducedOperator(
                "reduced operator (M_a + M_sigma) not invertible on the trace complement");
        result.populations = p0 - x2 * project(z);
    }
    clip_and_normalize(result.populations, result.clipped);
    result.converged = true;
    return result;
}

Eigen::VectorXd strong_coupling_populations(const HybridSystem& sys, const BathSpec& bath_a) {
    sys.validate();
    if (!(bath_a.temperature > 0.0))
        throw std::invalid_argument("strong_coupling_populations: T_a must be > 0");
    const int levels = sys.n_max + 1;
    const double t_a = bath_a.temperature;
    const double z = 2.0 * std::cosh(sys.epsilon / (2.0 * t_a)) *
                     (1.0 + bose_occupation(sys.omega0, t_a));
    Eigen::VectorXd p(2 * levels);
    for (int n = 0; n < levels; ++n) {
        p[n] = std::exp(-(n * sys.omega0 + sys.epsilon / 2.0) / t_a) / z;
        p[levels + n] = std::exp(-(n * sys.omega0 - sys.epsilon / 2.0) / t_a) / z;
    }
    return p;
}

TruncationCertificate certify_truncation(HybridSystem sys, const BathSpec& bath_a,
                                         const BathSpec& bath_sigma, int growth, int n_max_cap,
                                         double rel_tol) {
    if (growth < 1) throw std::invalid_argument("certify_truncation: growth must be >= 1");
    auto current_at = [&](int n_max) {
        HybridSystem trial = sys;
        trial.n_max = n_max;
        const auto rates = build_rate_matrices(trial, bath_a, bath_sigma);
        return heat_current(BathLabel::QubitSigma, solve_steady_state(rates), rates);
    };
    // currents below the solver noise floor count as converged-at-zero
    const double noise_floor = 1e-15 * sys.omega0;
    double j_prev = current_at(sys.n_max);
    int n = sys.n_max;
    while (n + growth <= n_max_cap) {
        const int n_next = n + growth;
        const double j_next = current_at(n_next);
        const double mag = std::max(std::fabs(j_next), std::fabs(j_prev));
        if (mag < noise_floor) return {n, 0.0};
        const double delta = std::fabs(j_next - j_prev) / mag;
        if (delta < rel_tol) return {n, delta};
        j_prev = j_next;
        n = n_next;
    }
    throw NoConvergence("certify_truncation: current not stable below n_max cap");
}

}  // namespace heatlab
