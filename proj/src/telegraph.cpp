#include "jtd/telegraph.hpp"

#include <cmath>
#include <numbers>

#include "jtd/numerics.hpp"
#include "jtd/regime.hpp"

namespace jtd {

namespace {

void require_order(const RegimeParams& p)
{
    if (!(p.c[0] > p.c[1])) throw InvalidInput("c0 must exceed c1 for telegraph densities");
    if (!(p.lambda[0] > 0.0) || !(p.lambda[1] > 0.0))
        throw InvalidInput("switching intensities must be positive");
}

double log_theta(const RegimeParams& p, double to_upper, double from_lower)
{
    const double dc = p.c[0] - p.c[1];
    return -p.lambda[1] / dc * to_upper - p.lambda[0] / dc * from_lower;
}

double gaussian(double x, double mean, double sd)
{
    const double u = (x - mean) / sd;
    return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

double q_density(const RegimeParams& p, State start, double x, double t, int n)
{
    require_order(p);
    if (!(t > 0.0)) throw InvalidInput("telegraph density needs t > 0");
    if (n < 1) throw InvalidInput("n = 0 is the atom e^{-lambda_i t} at c_i t, not a density value");

    const double upper = p.c[0] * t - x;  // c0 t - x
    const double lower = x - p.c[1] * t;  // x - c1 t
    if (!(upper > 0.0 && lower > 0.0)) return 0.0;

    const double dc = p.c[0] - p.c[1];
    const double l0 = std::log(p.lambda[0]);
    const double l1 = std::log(p.lambda[1]);
    const double lu = std::log(upper);
    const double ll = std::log(lower);
    const int m = n / 2;
    double lg = -n * std::log(dc) + log_theta(p, upper, lower);
    if (n % 2 == 0) {
        lg += m * (l0 + l1) - log_factorial(m - 1) - log_factorial(m);
        lg += (start == State::Zero) ? (m - 1) * lu + m * ll : m * lu + (m - 1) * ll;
    } else {
        lg += (start == State::Zero) ? (m + 1) * l0 + m * l1 : m * l0 + (m + 1) * l1;
        lg += m * (lu + ll) - 2.0 * log_factorial(m);
    }
    return std::exp(lg);
}

double jump_shift(const RegimeParams& p, State start, int n)
{
    const int i = index(start);
    return ((n + 1) / 2) * p.h[i] + (n / 2) * p.h[1 - i];
}

double jump_telegraph_pdf_n(const RegimeParams& p, State start, double x, double t, int n)
{
    return q_density(p, start, x - jump_shift(p, start, n), t, n);
}

DensityValue jump_telegraph_pdf_series(const RegimeParams& p, State start, double x, double t, int n_max)
{
    require_order(p);
    if (n_max < 0) n_max = default_truncation(p.lambda_max() * t);
    DensityValue v;
    v.atom = {p.c_of(start) * t, std::exp(-p.lambda_of(start) * t)};
    for (int n = 1; n <= n_max; ++n) v.ac += jump_telegraph_pdf_n(p, start, x, t, n);
    return v;
}

DensityValue jump_telegraph_pdf_bessel(const RegimeParams& p, State start, double x, double t)
{
    require_order(p);
    if (!(t > 0.0)) throw InvalidInput("telegraph density needs t > 0");
    if (std::fabs(p.h[0] + p.h[1]) > 1e-12)
        throw InvalidInput("Bessel closed form requires h0 + h1 = 0");

    DensityValue v;
    v.atom = {p.c_of(start) * t, std::exp(-p.lambda_of(start) * t)};

    const double upper = p.c[0] * t - x;
    const double lower = x - p.c[1] * t;
    if (!(upper > 0.0 && lower > 0.0)) return v;

    const int i = index(start);
    const double dc = p.c[0] - p.c[1];
    const double l0 = p.lambda[0];
    const double l1 = p.lambda[1];
    const double hi = p.h[i];
    const double lt = log_theta(p, upper, lower);

    // lambda_i exp((lambda0 - lambda1) h_i / dc) I0(2 sqrt(l0 l1 (c0 t - x + h_i)(x - h_i - c1 t)) / dc)
    double even_free = 0.0;
    const double shifted = (upper + hi) * (lower - hi);
    if (upper + hi > 0.0 && lower - hi > 0.0) {
        const double z0 = 2.0 * std::sqrt(l0 * l1 * shifted) / dc;
        even_free = p.lambda[i] * std::exp(lt + (l0 - l1) * hi / dc + z0) * bessel_i0e(z0);
    }

    // sqrt(l0 l1) ((x - c1 t)/(c0 t - x))^{1/2 - i} I1(z1) == 2 l0 l1 (lower or upper) / dc * I1(z1)/z1
    const double z1 = 2.0 * std::sqrt(l0 * l1 * upper * lower) / dc;
    const double lever = (start == State::Zero) ? lower : upper;
    const double odd_free = std::exp(lt + z1) * 2.0 * l0 * l1 * lever / dc * bessel_i1_over_z_e(z1);

    v.ac = (even_free + odd_free) / dc;
    return v;
}

std::optional<Atom> telegraph_diffusion_atom(const RegimeParams& p, State start, double t)
{
    if (p.sigma_of(start) != 0.0) return std::nullopt;
    return Atom{p.c_of(start) * t, std::exp(-p.lambda_of(start) * t)};
}

double telegraph_diffusion_pdf(const RegimeParams& p, State start, double x, double t, MixtureOptions opts)
{
    if (!(t > 0.0)) throw InvalidInput("telegraph-diffusion density needs t > 0");
    const double s0 = p.sigma[0] * p.sigma[0];
    const double s1 = p.sigma[1] * p.sigma[1];
    if (s0 + s1 == 0.0) {
        RegimeParams flat = p;
        flat.h = {0.0, 0.0};
        return jump_telegraph_pdf_series(flat, start, x, t).ac;
    }

    double total = 0.0;
    const double own_var = p.sigma_of(start) * p.sigma_of(start) * t;
    if (own_var > 0.0)
        total += std::exp(-p.lambda_of(start) * t) * gaussian(x, p.c_of(start) * t, std::sqrt(own_var));

    const auto rule = cached_spending_time_rule(t, opts.nodes);
    total += rule->integrate([&](double tau) {
        const double mean = p.c[0] * tau + p.c[1] * (t - tau);
        const double var = s0 * tau + s1 * (t - tau);
        return spending_time_pdf(p, start, tau, t) * gaussian(x, mean, std::sqrt(var));
    });
    return total;
}

double jump_telegraph_diffusion_pdf(const RegimeParams& p, State start, double x, double t,
                                    MixtureOptions opts, int n_max)
{
    if (!(t > 0.0)) throw InvalidInput("telegraph-diffusion density needs t > 0");
    const double s0 = p.sigma[0] * p.sigma[0];
    const double s1 = p.sigma[1] * p.sigma[1];
    if (s0 + s1 == 0.0) throw InvalidInput("jump telegraph-diffusion density needs sigma0^2 + sigma1^2 > 0");
    if (n_max < 0) n_max = default_truncation(p.lambda_max() * t);

    double total = 0.0;
    const double own_var = p.sigma_of(start) * p.sigma_of(start) * t;
    if (own_var > 0.0)
        total += std::exp(-p.lambda_of(start) * t) * gaussian(x, p.c_of(start) * t, std::sqrt(own_var));

    const auto rule = cached_spending_time_rule(t, opts.nodes);
    total += rule->integrate([&](double tau) {
        const double mean = p.c[0] * tau + p.c[1] * (t - tau);
        const double sd = std::sqrt(s0 * tau + s1 * (t - tau));
        double sum = 0.0;
        for (int n = 1; n <= n_max; ++n)
            sum += spending_time_pdf_n(p, start, tau, t, n) * gaussian(x - jump_shift(p, start, n), mean, sd);
        return sum;
    });
    return total;
}

}  // namespace jtd
