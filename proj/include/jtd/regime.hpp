#pragma once

#include <cstdint>
#include <vector>

#include "jtd/model.hpp"

namespace jtd {

/// Distribution of the number of switches N_i(t) of the flow started in `start`.
struct SwitchCountDist {
    double t = 0.0;
    State start = State::Zero;
    std::vector<double> probs;  // P{N(t) = n}, n = 0..n_max
    double tail_mass = 0.0;     // 1 - sum(probs), clamped at 0
    double tail_bound = 0.0;    // P{Poisson(lambda_max t) > n_max}, dominates the true tail

    int n_max() const noexcept { return static_cast<int>(probs.size()) - 1; }
};

/// Series truncation used across the library: smallest n with Poisson(mu) tail below 1e-14.
int default_truncation(double mu);

/// Switch-count pmf. Each n >= 1 entry integrates the per-count spending-time density over
/// [0, t] with Gauss-Legendre; n_max < 0 selects the default truncation rule.
SwitchCountDist switch_count_probs(const RegimeParams& p, State start, double t, int n_max = -1,
                                   int quadrature_nodes = 128);

/// Same pmf from RK4 on the forward equations dpi_i(n)/dt = -lambda_i pi_i(n) + lambda_i pi_{1-i}(n-1),
/// fixed step t / steps.
std::vector<double> switch_count_probs_ode(const RegimeParams& p, State start, double t, int n_max,
                                           int steps = 2048);

/// Joint density of (T_i(t), N_i(t) = n) at tau for n >= 1, T_i = time spent in state 0.
double spending_time_pdf_n(const RegimeParams& p, State start, double tau, double t, int n);

/// Absolutely continuous part of the spending-time density, modified-Bessel closed form.
double spending_time_pdf(const RegimeParams& p, State start, double tau, double t);

/// The same quantity as a truncated sum of spending_time_pdf_n.
double spending_time_pdf_series(const RegimeParams& p, State start, double tau, double t,
                                int n_max = -1);

/// Law of T_i(t): a Dirac atom of weight e^{-lambda_i t} (no switch) at tau = t (start 0) or
/// tau = 0 (start 1), plus an absolutely continuous part on (0, t).
class SpendingTimeDensity {
public:
    SpendingTimeDensity(const RegimeParams& p, State start, double t);

    double t() const noexcept { return t_; }
    State start() const noexcept { return start_; }
    double atom_weight() const noexcept { return atom_weight_; }
    double atom_location() const noexcept { return atom_location_; }
    double density(double tau) const { return spending_time_pdf(params_, start_, tau, t_); }
    double operator()(double tau) const { return density(tau); }

private:
    RegimeParams params_;
    State start_;
    double t_;
    double atom_weight_;
    double atom_location_;
};

struct SwitchPath {
    std::vector<double> switch_times;  // strictly increasing, in (0, t]
    std::vector<State> regimes;        // regime of each segment; size = switch_times.size() + 1
};

class Rng;

/// Exact simulation of the switching flow on [0, t] with exponential holding times.
SwitchPath sample_switch_times(const RegimeParams& p, State start, double t, Rng& rng);
SwitchPath sample_switch_times(const RegimeParams& p, State start, double t, std::uint64_t seed);

}  // namespace jtd
