#include "jtd/regime.hpp"

#include <cmath>
#include <limits>

#include "jtd/numerics.hpp"
#include "jtd/rng.hpp"

namespace jtd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// k * log(base) with 0^0 = 1.
double log_pow(double base, int k)
{
    if (k == 0) return 0.0;
    if (base <= 0.0) return kNegInf;
    return k * std::log(base);
}

void require_horizon(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("horizon t must be finite and >= 0");
}

void require_intensities(const RegimeParams& p)
{
    if (!(p.lambda[0] > 0.0) || !(p.lambda[1] > 0.0))
        throw InvalidInput("switching intensities must be positive");
}

// Log of the per-count density without the exponential factor; powers of tau and (t - tau).
struct CountShape {
    double log_coef;  // lambda powers over factorials
    int pow_tau;
    int pow_rest;     // power of (t - tau)
};

CountShape count_shape(const RegimeParams& p, State start, int n)
{
    const double l0 = std::log(p.lambda[0]);
    const double l1 = std::log(p.lambda[1]);
    const int m = n / 2;
    if (n % 2 == 0) {
        const double coef = m * l0 + m * l1 - log_factorial(m - 1) - log_factorial(m);
        if (start == State::Zero) return {coef, m, m - 1};
        return {coef, m - 1, m};
    }
    const double coef = -2.0 * log_factorial(m);
    if (start == State::Zero) return {coef + (m + 1) * l0 + m * l1, m, m};
    return {coef + m * l0 + (m + 1) * l1, m, m};
}

}  // namespace

int default_truncation(double mu) { return poisson_truncation(mu, 1e-14); }

double spending_time_pdf_n(const RegimeParams& p, State start, double tau, double t, int n)
{
    require_intensities(p);
    if (n < 1) throw InvalidInput("n = 0 is the Dirac atom of the spending time, not a density value");
    if (!(tau >= 0.0 && tau <= t)) throw InvalidInput("spending time tau must lie in [0, t]");
    const CountShape s = count_shape(p, start, n);
    const double lg = s.log_coef + log_pow(tau, s.pow_tau) + log_pow(t - tau, s.pow_rest) -
                      p.lambda[0] * tau - p.lambda[1] * (t - tau);
    return std::exp(lg);
}

double spending_time_pdf(const RegimeParams& p, State start, double tau, double t)
{
    require_intensities(p);
    if (!(tau >= 0.0 && tau <= t)) throw InvalidInput("spending time tau must lie in [0, t]");
    const double l0 = p.lambda[0];
    const double l1 = p.lambda[1];
    const double rest = t - tau;
    const double z = 2.0 * std::sqrt(l0 * l1 * tau * rest);
    // sqrt(l0 l1) sqrt(tau / rest) I1(z) == 2 l0 l1 tau I1(z) / z, finite at both ends.
    const double own = (start == State::Zero) ? l0 : l1;
    const double lever = (start == State::Zero) ? tau : rest;
    const double bracket = own * bessel_i0e(z) + 2.0 * l0 * l1 * lever * bessel_i1_over_z_e(z);
    return std::exp(-l0 * tau - l1 * rest + z) * bracket;
}

double spending_time_pdf_series(const RegimeParams& p, State start, double tau, double t, int n_max)
{
    if (n_max < 0) n_max = default_truncation(p.lambda_max() * t);
    double sum = 0.0;
    for (int n = 1; n <= n_max; ++n) sum += spending_time_pdf_n(p, start, tau, t, n);
    return sum;
}

SwitchCountDist switch_count_probs(const RegimeParams& p, State start, double t, int n_max,
                                   int quadrature_nodes)
{
    require_intensities(p);
    require_horizon(t);
    const double mu = p.lambda_max() * t;
    if (n_max < 0) n_max = default_truncation(mu);

    SwitchCountDist d;
    d.t = t;
    d.start = start;
    d.probs.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    d.probs[0] = std::exp(-p.lambda_of(start) * t);

    if (t > 0.0 && n_max >= 1) {
        const GaussLegendre gl(quadrature_nodes);
        const double half = 0.5 * t;
        std::vector<double> log_tau, log_rest, log_exp;
        for (double x : gl.nodes()) {
            const double tau = half + half * x;
            log_tau.push_back(std::log(tau));
            log_rest.push_back(std::log(t - tau));
            log_exp.push_back(-p.lambda[0] * tau - p.lambda[1] * (t - tau));
        }
        for (int n = 1; n <= n_max; ++n) {
            const CountShape s = count_shape(p, start, n);
            double sum = 0.0;
            for (std::size_t k = 0; k < log_tau.size(); ++k) {
                const double lg = s.log_coef + s.pow_tau * log_tau[k] + s.pow_rest * log_rest[k] + log_exp[k];
                sum += gl.weights()[k] * std::exp(lg);
            }
            d.probs[static_cast<std::size_t>(n)] = half * sum;
        }
    }

    double total = 0.0;
    for (double q : d.probs) total += q;
    d.tail_mass = std::max(0.0, 1.0 - total);
    d.tail_bound = poisson_upper_tail(mu, n_max);
    return d;
}

std::vector<double> switch_count_probs_ode(const RegimeParams& p, State start, double t, int n_max,
                                           int steps)
{
    require_intensities(p);
    require_horizon(t);
    if (n_max < 0) throw InvalidInput("n_max must be >= 0");
    if (steps < 1) throw InvalidInput("RK4 needs at least one step");
    const std::size_t width = static_cast<std::size_t>(n_max) + 1;
    // y[s * width + n] = pi_s(t; n)
    std::vector<double> y(2 * width, 0.0), k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
    y[0] = 1.0;
    y[width] = 1.0;

    auto rhs = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (std::size_t s = 0; s < 2; ++s) {
            const double lam = p.lambda[s];
            const std::size_t o = (1 - s) * width;
            for (std::size_t n = 0; n < width; ++n) {
                double v = -lam * in[s * width + n];
                if (n > 0) v += lam * in[o + n - 1];
                out[s * width + n] = v;
            }
        }
    };

    const double dt = t / steps;
    for (int step = 0; step < steps; ++step) {
        rhs(y, k1);
        for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * dt * k1[j];
        rhs(tmp, k2);
        for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * dt * k2[j];
        rhs(tmp, k3);
        for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + dt * k3[j];
        rhs(tmp, k4);
        for (std::size_t j = 0; j < y.size(); ++j) y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    const std::size_t off = static_cast<std::size_t>(index(start)) * width;
    return {y.begin() + static_cast<std::ptrdiff_t>(off), y.begin() + static_cast<std::ptrdiff_t>(off + width)};
}

SpendingTimeDensity::SpendingTimeDensity(const RegimeParams& p, State start, double t)
    : params_(p), start_(start), t_(t)
{
    require_intensities(p);
    require_horizon(t);
    atom_weight_ = std::exp(-p.lambda_of(start) * t);
    atom_location_ = (start == State::Zero) ? t : 0.0;
}

SwitchPath sample_switch_times(const RegimeParams& p, State start, double t, Rng& rng)
{
    require_intensities(p);
    require_horizon(t);
    SwitchPath path;
    State s = start;
    double now = 0.0;
    path.regimes.push_back(s);
    for (;;) {
        const double hold = rng.exponential(p.lambda_of(s));
        if (now + hold > t) break;
        now += hold;
        s = other(s);
        path.switch_times.push_back(now);
        path.regimes.push_back(s);
    }
    return path;
}

SwitchPath sample_switch_times(const RegimeParams& p, State start, double t, std::uint64_t seed)
{
    Rng rng(seed);
    return sample_switch_times(p, start, t, rng);
}

}  // namespace jtd
