#include "heatlab/analysis.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace heatlab {

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace {

SweepRow solve_point(const HybridSystem& sys, const BathSpec& bath_a, const BathSpec& bath_sigma,
                     double axis) {
    const auto rates = build_rate_matrices(sys, bath_a, bath_sigma);
    const auto ss = solve_steady_state(rates);
    SweepRow row;
    row.axis = axis;
    row.j_ss = heat_current(BathLabel::QubitSigma, ss, rates);
    row.sigma_z = qubit_polarization(ss.populations, rates.n_levels);
    row.n_max_used = ss.n_max_used;
    row.residual = ss.residual;
    const int keep = std::min(kSweepPopulationLevels, rates.n_levels);
    for (int b = 0; b < 2; ++b)
        for (int n = 0; n < keep; ++n)
            row.populations.push_back(ss.populations[b * rates.n_levels + n]);
    return row;
}

}  // namespace

std::vector<SweepRow> sweep_coupling(const HybridSystem& base, const BathSpec& bath_a,
                                     const BathSpec& bath_sigma, std::span<const double> lambdas,
                                     int jobs) {
    std::vector<SweepRow> rows(lambdas.size());
    parallel_for(static_cast<int>(lambdas.size()), jobs, [&](int i) {
        HybridSystem sys = base;
        sys.lambda = lambdas[i];
        rows[i] = solve_point(sys, bath_a, bath_sigma, lambdas[i]);
    });
    return rows;
}

std::vector<SweepRow> sweep_temperature_bias(const HybridSystem& base, const BathSpec& bath_a,
                                             const BathSpec& bath_sigma, double t0,
                                             std::span<const double> bias, int jobs) {
    for (double dt : bias)
        if (std::fabs(dt) > 2.0 * t0)
            throw std::invalid_argument("sweep_temperature_bias: |dT| > 2 T0 gives T < 0");
    std::vector<SweepRow> rows(bias.size());
    parallel_for(static_cast<int>(bias.size()), jobs, [&](int i) {
        BathSpec hot = bath_a, cold = bath_sigma;
        hot.temperature = t0 + bias[i] / 2.0;
        cold.temperature = t0 - bias[i] / 2.0;
        rows[i] = solve_point(base, hot, cold, bias[i]);
    });
    return rows;
}

NdtcReport detect_ndtc(std::span<const double> bias, std::span<const double> current,
                       double threshold) {
    if (bias.size() != current.size())
        throw std::invalid_argument("detect_ndtc: grid/current size mismatch");
    if (bias.size() < 5) throw InsufficientGrid("detect_ndtc: need at least 5 grid points");
    std::size_t peak = 0;
    for (std::size_t i = 1; i < current.size(); ++i)
        if (current[i] > current[peak]) peak = i;
    NdtcReport report;
    report.peak_bias = bias[peak];
    report.suppression_ratio =
        (current[peak] != 0.0) ? current.back() / current[peak] : 1.0;
    report.present = peak > 0 && peak + 1 < current.size() &&
                     current.back() < (1.0 - threshold) * current[peak];
    return report;
}

double rectification_factor(double j_forward, double j_reverse, bool* both_zero) {
    const double denom = std::max(std::fabs(j_forward), std::fabs(j_reverse));
    if (both_zero) *both_zero = (denom == 0.0);
    if (denom == 0.0) return 0.0;
    return std::fabs(j_forward + j_reverse) / denom;
}

std::vector<AmplificationRow> amplification_factor(const TwoQubitSystem& sys,
                                                   const BathSpec& bath_a, BathSpec bath_left,
                                                   const BathSpec& bath_right,
                                                   std::span<const double> gate_grid, int jobs) {
    if (gate_grid.size() < 3)
        throw InsufficientGrid("amplification_factor: need at least 3 gate points");
    std::vector<AmplificationRow> rows(gate_grid.size());
    parallel_for(static_cast<int>(gate_grid.size()), jobs, [&](int i) {
        BathSpec gate = bath_left;
        gate.temperature = gate_grid[i];
        const auto rates = build_two_qubit_rate_matrices(sys, bath_a, gate, bath_right);
        const auto ss = solve_steady_state(rates);
        rows[i].t_gate = gate_grid[i];
        rows[i].j_left = heat_current(BathLabel::LeftSigma, ss, rates);
        rows[i].j_right = heat_current(BathLabel::RightSigma, ss, rates);
    });
    const int n = static_cast<int>(rows.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - 1);
        const int hi = std::min(n - 1, i + 1);
        const double d_left = rows[hi].j_left - rows[lo].j_left;
        const double d_right = rows[hi].j_right - rows[lo].j_right;
        const double floor = 1e-14 * std::max(std::fabs(rows[i].j_left), std::fabs(rows[i].j_right));
        if (std::fabs(d_left) <= floor) {
            rows[i].beta = std::numeric_limits<double>::infinity();
            rows[i].beta_unbounded = true;
        } else {
            rows[i].beta = std::fabs(d_right / d_left);
        }
    }
    return rows;
}

}  // namespace heatlab
