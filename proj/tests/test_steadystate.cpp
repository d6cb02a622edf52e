#include <doctest.h>

#include <cmath>
#include <random>

#include "heatlab/observables.hpp"
#include "heatlab/steadystate.hpp"

using namespace heatlab;

namespace {

const BathSpec kBathA{0.005, 10.0, 1.5, BathLabel::PhononA};
const BathSpec kBathS{0.005, 10.0, 0.5, BathLabel::QubitSigma};

RateMatrixSet two_state(double up, double down) {
    RateMatrixSet set;
    set.n_levels = 1;
    set.n_branches = 2;
    set.energies = Eigen::VectorXd::Zero(2);
    set.total.resize(2, 2);
    set.total << -up, down, up, -down;
    return set;
}

}  // namespace

TEST_CASE("steady state of two-state chains") {
    const auto sym = solve_steady_state(two_state(1.0, 1.0));
    CHECK(sym.populations[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sym.populations[1] == doctest::Approx(0.5).epsilon(1e-14));

    const auto biased = solve_steady_state(two_state(1.0, 2.0));
    CHECK(biased.populations[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(biased.populations[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(biased.converged);
    CHECK(biased.populations.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equal temperatures give the Gibbs state") {
    for (double lambda : {0.05, 1.2}) {
        HybridSystem sys{1.0, 1.0, lambda, 25};
        const BathSpec a{0.005, 10.0, 1.0, BathLabel::PhononA};
        const BathSpec s{0.005, 10.0, 1.0, BathLabel::QubitSigma};
        const auto rates = build_rate_matrices(sys, a, s);
        const auto ss = solve_steady_state(rates);
        Eigen::VectorXd gibbs = (-rates.energies.array()).exp();
        gibbs /= gibbs.sum();
        for (int i = 0; i < gibbs.size(); ++i)
            CHECK(ss.populations[i] == doctest::Approx(gibbs[i]).epsilon(1e-8));
    }
}

TEST_CASE("disconnected chain raises NonErgodic") {
    HybridSystem sys{1.0, 1.0, 0.0, 5};
    const BathSpec dead{0.0, 10.0, 0.5, BathLabel::QubitSigma};
    const auto rates = build_rate_matrices(sys, kBathA, dead);
    CHECK_THROWS_AS(solve_steady_state(rates), NonErgodicError);
}

TEST_CASE("time evolution oracle") {
    const auto rates = two_state(1.0, 2.0);
    Eigen::VectorXd p0(2);
    p0 << 1.0, 0.0;
    const Eigen::VectorXd p = evolve_to_stationarity(rates, p0, 60.0, 0.05);
    CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));

    // the stationary vector is a fixed point
    const auto ss = solve_steady_state(rates);
    const Eigen::VectorXd kept = evolve_to_stationarity(rates, ss.populations, 1.0, 0.05);
    CHECK((kept - ss.populations).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(evolve_to_stationarity(rates, p0, 1.0, 10.0), StepTooLarge);
}

TEST_CASE("oracle equivalence at operating parameters") {
    HybridSystem sys{1.0, 1.0, 0.05, 30};
    const auto rates = build_rate_matrices(sys, kBathA, kBathS);
    const auto ss = solve_steady_state(rates);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd p0(rates.total.rows());
    for (int i = 0; i < p0.size(); ++i) p0[i] = u(rng);
    p0 /= p0.sum();
    const double dt = 0.5 / rates.max_rate();
    const Eigen::VectorXd pe = evolve_to_stationarity(rates, p0, 3e8 * dt, dt);
    CHECK((pe - ss.populations).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("perturbative solver") {
    // lambda = 0 returns the product Gibbs state exactly
    HybridSystem bare{1.0, 1.0, 0.0, 20};
    const auto p0 = solve_weak_coupling_perturbative(bare, kBathA, kBathS);
    for (int n = 0; n < 20; ++n) {
        CHECK(p0.populations[n + 1] / p0.populations[n] ==
              doctest::Approx(std::exp(-1.0 / 1.5)).epsilon(1e-12));
        // down over up population: e^{+eps/T_sigma}
        CHECK(p0.populations[21 + n] / p0.populations[n] ==
              doctest::Approx(std::exp(1.0 / 0.5)).epsilon(1e-12));
    }

    // the correction is trace-free: lambda > 0 state still sums to one and
    // deviates from the product state only at O(lambda^2)
    HybridSystem weak{1.0, 1.0, 0.005, 30};
    const auto pert = solve_weak_coupling_perturbative(weak, kBathA, kBathS);
    CHECK(pert.populations.sum() == doctest::Approx(1.0).epsilon(1e-12));

    const auto rates = build_rate_matrices(weak, kBathA, kBathS);
    const auto full = solve_steady_state(rates);
    for (int i = 0; i < full.populations.size(); ++i)
        if (full.populations[i] > 1e-6)
            CHECK(pert.populations[i] == doctest::Approx(full.populations[i]).epsilon(0.01));
}

TEST_CASE("strong-coupling closed forms") {
    HybridSystem flat{0.0, 1.0, 3.0, 25};
    const auto even = strong_coupling_populations(flat, kBathA);
    for (int n = 0; n <= 25; ++n)
        CHECK(even[n] == doctest::Approx(even[26 + n]).epsilon(1e-12));

    HybridSystem sys{1.0, 1.0, 3.0, 30};
    const auto closed = strong_coupling_populations(sys, kBathA);
    const double tail = std::exp(-31.0 / 1.5);
    CHECK(closed.sum() == doctest::Approx(1.0).epsilon(4.0 * tail));

    const auto rates = build_rate_matrices(sys, kBathA, kBathS);
    const auto full = solve_steady_state(rates);
    CHECK((full.populations - closed).cwiseAbs().maxCoeff() < 1e-2);
}

TEST_CASE("truncation certificate") {
    HybridSystem sys{1.0, 1.0, 0.05, 12};
    const auto cert = certify_truncation(sys, kBathA, kBathS, 4);
    CHECK(cert.n_max >= 12);
    CHECK(cert.current_delta < 1e-3);

    // doubling past the certificate leaves the current unchanged to 0.1%
    HybridSystem at = sys;
    at.n_max = cert.n_max;
    const auto r1 = build_rate_matrices(at, kBathA, kBathS);
    const double j1 = heat_current(BathLabel::QubitSigma, solve_steady_state(r1), r1);
    at.n_max = 2 * cert.n_max;
    const auto r2 = build_rate_matrices(at, kBathA, kBathS);
    const double j2 = heat_current(BathLabel::QubitSigma, solve_steady_state(r2), r2);
    CHECK(std::fabs(j2 - j1) / std::fabs(j1) < 1e-3);

    CHECK_THROWS_AS(certify_truncation(sys, kBathA, kBathS, 0), std::invalid_argument);
    CHECK_THROWS_AS(certify_truncation(sys, kBathA, kBathS, 4, 13), NoConvergence);
}
