#include "jtd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace jtd {

namespace {

constexpr double kSeriesLimit = 30.0;

// Sum_{k>=0} (z^2/4)^k / (k! (k+nu)!) for nu in {0, 1}; all terms positive.
double bessel_series_core(double z, int nu)
{
    const double q = 0.25 * z * z;
    double term = 1.0;  // k = 0
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// Large-argument expansion: I_nu(z) e^{-z} sqrt(2 pi z) = sum_k (-1)^k a_k(nu) / z^k.
double bessel_asymptotic_scaled(double z, int nu)
{
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (k * 8.0 * z);
        if (std::fabs(term) >= prev) break;  // series started to diverge
        sum += term;
        prev = std::fabs(term);
        if (prev < 1e-17 * std::fabs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

void require_nonneg(double z)
{
    if (!(z >= 0.0)) throw std::domain_error("modified Bessel argument must be nonnegative");
}

double unscale(double scaled, double z)
{
    const double v = scaled * std::exp(z);
    if (!std::isfinite(v)) throw std::overflow_error("modified Bessel function overflows at this argument");
    return v;
}

}  // namespace

double bessel_i0e(double z)
{
    require_nonneg(z);
    if (z <= kSeriesLimit) return bessel_series_core(z, 0) * std::exp(-z);
    return bessel_asymptotic_scaled(z, 0);
}

double bessel_i1e(double z)
{
    require_nonneg(z);
    if (z <= kSeriesLimit) return 0.5 * z * bessel_series_core(z, 1) * std::exp(-z);
    return bessel_asymptotic_scaled(z, 1);
}

double bessel_i1_over_z_e(double z)
{
    require_nonneg(z);
    if (z <= kSeriesLimit) return 0.5 * bessel_series_core(z, 1) * std::exp(-z);
    return bessel_asymptotic_scaled(z, 1) / z;
}

double bessel_i0(double z)
{
    require_nonneg(z);
    if (z <= kSeriesLimit) return bessel_series_core(z, 0);
    return unscale(bessel_asymptotic_scaled(z, 0), z);
}

double bessel_i1(double z)
{
    require_nonneg(z);
    if (z <= kSeriesLimit) return 0.5 * z * bessel_series_core(z, 1);
    return unscale(bessel_asymptotic_scaled(z, 1), z);
}

double log_factorial(int n)
{
    if (n < 0) throw std::domain_error("log_factorial of a negative integer");
    static const std::vector<double> table = [] {
        std::vector<double> t(4096);
        t[0] = 0.0;
        for (std::size_t k = 1; k < t.size(); ++k) t[k] = std::lgamma(static_cast<double>(k) + 1.0);
        return t;
    }();
    if (static_cast<std::size_t>(n) < table.size()) return table[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double poisson_upper_tail(double mu, int n)
{
    if (n < 0) return 1.0;
    if (mu <= 0.0) return 0.0;
    // Sum pmf from n+1 upward; terms decrease geometrically once k > mu.
    const double log_mu = std::log(mu);
    double sum = 0.0;
    for (int k = n + 1;; ++k) {
        const double term = std::exp(k * log_mu - mu - log_factorial(k));
        sum += term;
        if (k > mu && term < 1e-18 * sum) break;
        if (k > n + 1 && k > mu && term == 0.0) break;
        if (k > n + 100000) break;
    }
    return std::min(sum, 1.0);
}

int poisson_truncation(double mu, double eps)
{
    if (mu <= 0.0) return 0;
    int n = 0;
    while (poisson_upper_tail(mu, n) >= eps) ++n;
    return n;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double pairwise_sum(std::span<const double> v)
{
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

GaussLegendre::GaussLegendre(int n)
{
    if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
    nodes_.resize(static_cast<std::size_t>(n));
    weights_.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes_[static_cast<std::size_t>(i)] = -x;
        nodes_[static_cast<std::size_t>(n - 1 - i)] = x;
        weights_[static_cast<std::size_t>(i)] = w;
        weights_[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) nodes_[static_cast<std::size_t>(n / 2)] = 0.0;
}

SpendingTimeRule::SpendingTimeRule(double t, int nodes)
{
    const GaussLegendre gl(nodes);
    const double half = 0.25 * std::numbers::pi;  // u in (0, pi/2)
    tau.reserve(static_cast<std::size_t>(nodes));
    weight.reserve(static_cast<std::size_t>(nodes));
    for (int k = 0; k < nodes; ++k) {
        const double u = half + half * gl.nodes()[static_cast<std::size_t>(k)];
        const double s = std::sin(u);
        tau.push_back(t * s * s);
        // d tau = t sin(2u) du
        weight.push_back(half * gl.weights()[static_cast<std::size_t>(k)] * t * std::sin(2.0 * u));
    }
}

std::shared_ptr<const SpendingTimeRule> cached_spending_time_rule(double t, int nodes)
{
    struct Entry {
        double t;
        int nodes;
        std::shared_ptr<const SpendingTimeRule> rule;
    };
    thread_local std::vector<Entry> cache;
    for (const Entry& e : cache)
        if (e.t == t && e.nodes == nodes) return e.rule;
    if (cache.size() >= 8) cache.erase(cache.begin());
    cache.push_back({t, nodes, std::make_shared<const SpendingTimeRule>(t, nodes)});
    return cache.back().rule;
}

}  // namespace jtd
