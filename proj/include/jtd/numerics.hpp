#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace jtd {

// Modified Bessel functions of the first kind for real z >= 0.
// Power series up to z = 30, large-argument asymptotic expansion beyond.
// The unscaled versions throw std::overflow_error when the result is not representable.
double bessel_i0(double z);
double bessel_i1(double z);

// Exponentially scaled: e^{-z} I_nu(z). Never overflow.
double bessel_i0e(double z);
double bessel_i1e(double z);

/// e^{-z} I1(z) / z, continuous at z = 0 with value 1/2.
double bessel_i1_over_z_e(double z);

/// log(n!) from a precomputed table (falls back to lgamma past the table end).
double log_factorial(int n);

/// P{X > n} for X ~ Poisson(mu), summed in log space. Returns 1 for n < 0.
double poisson_upper_tail(double mu, int n);

/// Smallest n with P{Poisson(mu) > n} < eps.
int poisson_truncation(double mu, double eps);

/// Standard normal distribution function.
double normal_cdf(double x);

/// Pairwise (cascade) summation; result depends only on the order of the input.
double pairwise_sum(std::span<const double> values);

/// Gauss-Legendre rule on [-1, 1]; nodes/weights computed by Newton iteration on P_n.
class GaussLegendre {
public:
    explicit GaussLegendre(int n);

    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    template <class F>
    double integrate(F&& f, double a, double b) const
    {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (b + a);
        double sum = 0.0;
        for (std::size_t k = 0; k < nodes_.size(); ++k) sum += weights_[k] * f(mid + half * nodes_[k]);
        return half * sum;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Abscissae tau_k in (0, t) and weights w_k for integrals over (0, t) after the substitution
/// tau = t sin^2(u), u in (0, pi/2). Square-root endpoint behaviour at either end becomes smooth.
struct SpendingTimeRule {
    std::vector<double> tau;
    std::vector<double> weight;

    SpendingTimeRule(double t, int nodes);

    template <class F>
    double integrate(F&& f) const
    {
        double sum = 0.0;
        for (std::size_t k = 0; k < tau.size(); ++k) sum += weight[k] * f(tau[k]);
        return sum;
    }
};

/// Per-thread cache of the most recently used rules, keyed by (t, nodes).
std::shared_ptr<const SpendingTimeRule> cached_spending_time_rule(double t, int nodes);

}  // namespace jtd
