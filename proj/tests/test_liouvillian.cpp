#include <doctest.h>

#include <cmath>

#include "heatlab/liouvillian.hpp"

using namespace heatlab;

namespace {
const BathSpec kBathA{0.005, 10.0, 1.5, BathLabel::PhononA};
const BathSpec kBathS{0.005, 10.0, 0.5, BathLabel::QubitSigma};
}  // namespace

TEST_CASE("transition rates: phonon ladder") {
    HybridSystem sys{1.0, 1.0, 0.05, 8};
    const DressedBasis basis = build_dressed_basis(sys);
    const double gamma = ohmic_spectral(1.0, kBathA);
    const double occ = bose_occupation(1.0, kBathA.temperature);
    for (int b = 0; b < 2; ++b)
        for (int m = 0; m < 8; ++m) {
            const int lo = basis.index(b, m), hi = basis.index(b, m + 1);
            CHECK(transition_rate(lo, hi, kBathA, basis) ==
                  doctest::Approx(gamma * occ * (m + 1)).epsilon(1e-12));
            CHECK(transition_rate(hi, lo, kBathA, basis) ==
                  doctest::Approx(gamma * (1.0 + occ) * (m + 1)).epsilon(1e-12));
        }
    // resonance: the zero-gap cross transition is theta-gated
    CHECK(transition_rate(basis.index(0, 0), basis.index(1, 1), kBathS, basis) == 0.0);
    CHECK(transition_rate(basis.index(1, 1), basis.index(0, 0), kBathS, basis) == 0.0);
}

TEST_CASE("rate matrices: column sums and detailed balance") {
    HybridSystem sys{1.0, 1.0, 0.05, 20};
    const auto set = build_rate_matrices(sys, kBathA, kBathS);
    for (const auto& [label, mat] : set.per_bath)
        for (int j = 0; j < mat.cols(); ++j) CHECK(std::fabs(mat.col(j).sum()) < 1e-12);

    const auto& ra = set.per_bath.at(BathLabel::PhononA);
    const DressedBasis basis = build_dressed_basis(sys);
    for (int b = 0; b < 2; ++b)
        for (int m = 0; m < 20; ++m) {
            const int lo = basis.index(b, m), hi = basis.index(b, m + 1);
            CHECK(ra(hi, lo) / ra(lo, hi) ==
                  doctest::Approx(std::exp(-1.0 / kBathA.temperature)).epsilon(1e-12));
        }
}

TEST_CASE("rate matrices: structural limits") {
    // lambda = 0: the sigma bath only flips the qubit at fixed n
    HybridSystem bare{1.0, 1.0, 0.0, 1};
    const auto set = build_rate_matrices(bare, kBathA, kBathS);
    const auto& rs = set.per_bath.at(BathLabel::QubitSigma);
    const SequentialRates ks = sequential_rates(1.0, kBathS);
    const DressedBasis basis = build_dressed_basis(bare);
    for (int n = 0; n <= 1; ++n) {
        CHECK(rs(basis.index(0, n), basis.index(1, n)) == doctest::Approx(ks.absorb));
        CHECK(rs(basis.index(1, n), basis.index(0, n)) == doctest::Approx(ks.emit));
    }
    CHECK(rs(basis.index(0, 0), basis.index(1, 1)) == 0.0);

    // decoupled a bath
    const BathSpec off{0.0, 10.0, 1.5, BathLabel::PhononA};
    const auto set2 = build_rate_matrices(HybridSystem{1.0, 1.0, 0.3, 5}, off, kBathS);
    CHECK(set2.per_bath.at(BathLabel::PhononA).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(build_rate_matrices(bare, kBathS, kBathA), std::invalid_argument);
}

TEST_CASE("weak-coupling reduction of the sigma channel") {
    // small cutoff: the D_nn^2 correction grows like (2n+1)(2 lambda)^2
    HybridSystem sys{0.6, 1.0, 1e-3, 8};
    const auto full = build_rate_matrices(sys, kBathA, kBathS);
    const auto wm = build_weak_coupling_matrices(sys, kBathA, kBathS);
    const double x2 = std::pow(2.0 * sys.lambda / sys.omega0, 2);
    const Eigen::MatrixXd approx = wm.m_a + wm.m_sigma + x2 * wm.m_lambda;
    const int d = full.total.rows();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            const double a = full.total(i, j), b = approx(i, j);
            // |delta n| >= 2 channels are O(lambda^4); below this floor only
            // the reduced matrix's exact zeros live
            if (std::fabs(a) < 1e-10 && std::fabs(b) < 1e-10) continue;
            CHECK(a == doctest::Approx(b).epsilon(1e-4));
        }
}

TEST_CASE("Gibbs state is a fixed point at equal temperatures") {
    for (double lambda : {0.0, 0.05, 0.8, 2.0}) {
        HybridSystem sys{1.3, 1.0, lambda, 25};
        const BathSpec a{0.005, 10.0, 1.0, BathLabel::PhononA};
        const BathSpec s{0.003, 10.0, 1.0, BathLabel::QubitSigma};
        const auto set = build_rate_matrices(sys, a, s);
        Eigen::VectorXd gibbs = (-set.energies.array()).exp();
        gibbs /= gibbs.sum();
        CHECK((set.total * gibbs).cwiseAbs().maxCoeff() / set.max_rate() < 1e-10);
    }
}

TEST_CASE("two-qubit rate matrices") {
    TwoQubitSystem sys{1.0, 1.0, 0.0, 0.0, 1.0, 3};
    const BathSpec bl{0.005, 10.0, 0.8, BathLabel::LeftSigma};
    const BathSpec br{0.005, 10.0, 0.2, BathLabel::RightSigma};
    const auto set = build_two_qubit_rate_matrices(sys, kBathA, bl, br);
    CHECK(set.n_branches == 4);
    for (const auto& [label, mat] : set.per_bath)
        for (int j = 0; j < mat.cols(); ++j) CHECK(std::fabs(mat.col(j).sum()) < 1e-12);

    // zero coupling: sigma blocks stay diagonal in n
    const DressedBasis basis = build_two_qubit_basis(sys);
    const auto& rl = set.per_bath.at(BathLabel::LeftSigma);
    CHECK(rl(basis.index(0, 0), basis.index(2, 0)) > 0.0);
    CHECK(rl(basis.index(0, 1), basis.index(2, 0)) == 0.0);

    CHECK_THROWS_AS(build_two_qubit_rate_matrices(sys, kBathA, br, bl), std::invalid_argument);
}
