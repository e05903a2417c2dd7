// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "jtd/measure.hpp"
#include "jtd/monte_carlo.hpp"
#include "jtd/numerics.hpp"
#include "jtd/pricer.hpp"
#include "jtd/regime.hpp"
#include "jtd/telegraph.hpp"
#include "oracles.hpp"

using namespace jtd;

namespace {

constexpr std::size_t kPaths = 1000000;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double gk(const std::function<double(double)>& f, double a, double b)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

double within_se(const EstimatorResult& e, double target)
{
    return std::fabs(e.mean - target) / e.std_error;
}

// 1. Normalization of the switch-count pmf, the spending-time law and the per-count telegraph densities.
Outcome normalization()
{
    Outcome out;
    std::mt19937_64 gen(1001);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst_pi = 0.0, worst_f = 0.0, worst_q = 0.0;
    for (int set = 0; set < 50; ++set) {
        RegimeParams p;
        p.lambda = {0.1 + 4.9 * u01(gen), 0.1 + 4.9 * u01(gen)};
        const double t = (0.05 + 0.95 * u01(gen)) * 10.0 / p.lambda_max();
        p.c = {0.1 + u01(gen), -0.1 - u01(gen)};
        p.h = {u01(gen) - 0.5, u01(gen) - 0.5};
        const State s = set % 2 ? State::One : State::Zero;

        const auto d = switch_count_probs(p, s, t);
        double sum = 0.0;
        for (double v : d.probs) sum += v;
        worst_pi = std::max(worst_pi, std::fabs(sum + d.tail_bound - 1.0));
        const auto ref = oracle::switch_count_pmf(p.lambda, index(s), t, d.n_max());
        for (int n = 0; n <= d.n_max(); ++n)
            out.require(std::fabs(d.probs[static_cast<std::size_t>(n)] - ref[static_cast<std::size_t>(n)]) < 1e-12,
                        fmt("pi differs from uniformization in set %g, n %g", set, n));

        const SpendingTimeDensity law(p, s, t);
        const double mass = gk([&](double tau) { return law(tau); }, 0.0, t);
        worst_f = std::max(worst_f, std::fabs(mass + law.atom_weight() - 1.0));

        for (int n = 1; n <= d.n_max(); ++n) {
            const double shift = jump_shift(p, s, n);
            const double qn = gk([&](double x) { return jump_telegraph_pdf_n(p, s, x, t, n); }, p.c[1] * t + shift,
                                 p.c[0] * t + shift);
            worst_q = std::max(worst_q, std::fabs(qn - d.probs[static_cast<std::size_t>(n)]));
        }
    }
    out.require(worst_pi < 1e-10, fmt("sum pi + tail off by %.3g", worst_pi));
    out.require(worst_f < 1e-8, fmt("spending-time mass off by %.3g", worst_f));
    out.require(worst_q < 1e-8, fmt("telegraph per-count mass off by %.3g", worst_q));
    out.detail = fmt("max |sum pi + tail - 1| = %.2e, |atom + int f - 1| = %.2e, |int q_n - pi_n| = %.2e", worst_pi,
                     worst_f, worst_q) + (out.detail.empty() ? "" : " [" + out.detail + "]");
    return out;
}

// 2. Bessel closed forms against the switch-count series.
Outcome closed_forms()
{
    Outcome out;
    std::mt19937_64 gen(2002);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst_f = 0.0, worst_oracle = 0.0;
    for (int k = 0; k < 200; ++k) {
        RegimeParams p;
        p.lambda = {0.1 + 4.9 * u01(gen), 0.1 + 4.9 * u01(gen)};
        const double t = 0.1 + 2.9 * u01(gen);
        const double tau = t * (0.001 + 0.998 * u01(gen));
        const State s = k % 2 ? State::One : State::Zero;
        const double closed = spending_time_pdf(p, s, tau, t);
        worst_f = std::max(worst_f, std::fabs(closed - spending_time_pdf_series(p, s, tau, t)));
        worst_oracle = std::max(worst_oracle, std::fabs(closed - oracle::spending_time_pdf_bessel(p.lambda, index(s), tau, t)));
    }
    double worst_q = 0.0;
    int points = 0;
    while (points < 200) {
        RegimeParams p;
        p.lambda = {0.1 + 4.9 * u01(gen), 0.1 + 4.9 * u01(gen)};
        p.c = {0.2 + 1.8 * u01(gen), -0.2 - 1.8 * u01(gen)};
        const double h = 0.6 * u01(gen) - 0.3;
        p.h = {h, -h};
        const double t = 0.1 + 1.9 * u01(gen);
        const State s = points % 2 ? State::One : State::Zero;
        const double hs = p.h_of(s);
        const double lo = p.c[1] * t + std::max(0.0, hs), hi = p.c[0] * t + std::min(0.0, hs);
        if (!(hi > lo)) continue;
        const double x = lo + (hi - lo) * (0.001 + 0.998 * u01(gen));
        worst_q = std::max(worst_q, std::fabs(jump_telegraph_pdf_bessel(p, s, x, t).ac -
                                              jump_telegraph_pdf_series(p, s, x, t).ac));
        ++points;
    }
    out.require(worst_f < 1e-10, fmt("spending-time closed form vs series %.3g", worst_f));
    out.require(worst_oracle < 1e-10, fmt("spending-time closed form vs Boost Bessel %.3g", worst_oracle));
    out.require(worst_q < 1e-8, fmt("jump telegraph closed form vs series %.3g", worst_q));
    out.detail = fmt("max |f_bessel - f_series| = %.2e, vs Boost oracle %.2e, |p_bessel - p_series| = %.2e", worst_f,
                     worst_oracle, worst_q) + (out.detail.empty() ? "" : " [" + out.detail + "]");
    return out;
}

// 3. E_P[Z(T) 1{N(T) = n}] against the switch-count pmf with the shifted intensities.
Outcome girsanov()
{
    Outcome out;
    RegimeParams p;
    p.lambda = {1.5, 0.7};
    p.c = {0.1, -0.2};
    p.sigma = {0.25, 0.4};
    p.h = {0.1, -0.15};
    const auto shift = MeasureShift::from_drift_shift({0.6, -0.9}, {0.3, -0.2}, p.lambda);
    const double t = 1.5;
    RegimeParams star = p;
    star.lambda = shift.lambda_star;
    const auto target = switch_count_probs(star, State::Zero, t);
    const auto est = estimate(single_asset_market(p), std::nullopt, State::Zero, t, kPaths, 3003, 7,
                              [&](const PathRecord& path, std::span<double> v) {
                                  const double z = radon_nikodym_eval(shift, path, t);
                                  for (std::size_t n = 0; n < 7; ++n) v[n] = path.switches() == n ? z : 0.0;
                              });
    double worst = 0.0;
    for (int n = 0; n <= 6; ++n) {
        const double z = within_se(est[static_cast<std::size_t>(n)], target.probs[static_cast<std::size_t>(n)]);
        worst = std::max(worst, z);
        out.require(z < 3.0, fmt("n = %g: %.2f SE", n, z));
    }
    out.detail = fmt("max deviation %.2f SE over n = 0..6", worst) + (out.detail.empty() ? "" : " [" + out.detail + "]");
    return out;
}

// 4. Martingale properties checked by simulation.
Outcome martingales()
{
    Outcome out;
    const double t = 1.0;

    RegimeParams drift;  // c_i = -lambda_i h_i
    drift.lambda = {2.0, 1.0};
    drift.h = {-0.3, 0.5};
    drift.c = {0.6, -0.5};
    drift.sigma = {0.2, 0.4};
    const auto a = estimate(single_asset_market(drift), std::nullopt, State::Zero, t, kPaths, 4001, 1,
                            [&](const PathRecord& path, std::span<double> v) {
                                const auto c = jtd_components(drift, path);
                                v[0] = c.telegraph + c.jump + c.diffusion;
                            });
    const double za = within_se(a[0], 0.0);
    out.require(za < 3.0, fmt("E[X(T)] off by %.2f SE", za));

    RegimeParams expo;  // c_i + sigma_i^2 / 2 = -lambda_i h_i
    expo.lambda = {1.0, 2.5};
    expo.h = {-0.1, 0.2};
    expo.sigma = {0.2, 0.35};
    for (int i = 0; i < 2; ++i) expo.c[i] = -expo.lambda[i] * expo.h[i] - 0.5 * expo.sigma[i] * expo.sigma[i];
    const auto b = estimate(single_asset_market(expo), std::nullopt, State::One, t, kPaths, 4002, 1,
                            [&](const PathRecord& path, std::span<double> v) {
                                const auto c = jtd_components(expo, path);
                                v[0] = std::exp(c.telegraph + c.diffusion + c.log_kappa);
                            });
    const double zb = within_se(b[0], 1.0);
    out.require(zb < 3.0, fmt("E[exp(T + D) kappa] off by %.2f SE", zb));

    MarketModel m;
    m.lambda = {1.0, 2.0};
    m.r = {0.05, 0.03};
    m.asset1 = {100.0, {0.1, -0.05}, {0.2, 0.25}, {-0.1, 0.15}};
    m.asset2 = AssetParams{50.0, {0.0, 0.04}, {0.3, 0.1}, {0.2, -0.2}};
    const auto shift = complete_two_asset_measure(m).shift;
    const auto c = estimate(m, shift, State::Zero, t, kPaths, 4003, 2, [&](const PathRecord& path, std::span<double> v) {
        v[0] = std::exp(path.log_stock_terminal[0]) / path.bond_terminal;
        v[1] = std::exp(path.log_stock_terminal[1]) / path.bond_terminal;
    });
    const double z1 = within_se(c[0], 100.0), z2 = within_se(c[1], 50.0);
    out.require(z1 < 3.0, fmt("discounted asset 1 off by %.2f SE", z1));
    out.require(z2 < 3.0, fmt("discounted asset 2 off by %.2f SE", z2));
    out.detail = fmt("X: %.2f SE, exp: %.2f SE, ", za, zb) + fmt("assets: %.2f / %.2f SE", z1, z2) +
                 (out.detail.empty() ? "" : " [" + out.detail + "]");
    return out;
}

// 5. Call pricing.
Outcome pricing()
{
    Outcome out;
    // (a) Black-Scholes collapse
    CallPricingRequest bs;
    bs.market.lambda = {1.0, 2.0};
    bs.market.r = {0.05, 0.05};
    bs.market.asset1 = {100.0, {0.05, 0.05}, {0.2, 0.2}, {0.0, 0.0}};
    bs.measure = single_asset_measure_family(bs.market, 0.6, 1.9);
    bs.strike = 100.0;
    bs.maturity = 1.0;
    const double bs_err = std::fabs(price_call(bs).price - oracle::bs_call(100.0, 100.0, 0.05, 0.2, 1.0));
    out.require(bs_err < 1e-8, fmt("(a) BS collapse off by %.3g", bs_err));

    // (b) jumps: analytic against simulation under the pricing measure
    CallPricingRequest jump;
    jump.market.lambda = {1.0, 1.5};
    jump.market.r = {0.05, 0.02};
    jump.market.asset1 = {100.0, {0.2, -0.1}, {0.3, 0.2}, {-0.1, 0.1}};
    jump.measure = single_asset_measure_family(jump.market, 1.0, 1.2);
    jump.strike = 95.0;
    jump.maturity = 1.5;
    const double analytic = price_call(jump).price;
    const auto mc = estimate_discounted_payoff(jump.market, jump.measure, CallPayoff{95.0}, State::Zero, 1.5, kPaths, 5005);
    const double zb = within_se(mc, analytic);
    out.require(zb < 3.0, fmt("(b) analytic %.6f vs MC %.6f: %.2f SE", analytic, mc.mean, zb));

    // (c) no-jump specialization
    CallPricingRequest nj;
    nj.market.lambda = {1.0, 2.0};
    nj.market.r = {0.05, 0.03};
    nj.market.asset1 = {100.0, {0.1, -0.05}, {0.2, 0.35}, {0.0, 0.0}};
    nj.measure = single_asset_measure_family(nj.market, 0.8, 1.7);
    nj.strike = 105.0;
    nj.maturity = 2.0;
    const double nj_err = std::fabs(price_call(nj).price - price_call_nojump(nj));
    out.require(nj_err < 1e-8, fmt("(c) h = 0 specialization off by %.3g", nj_err));

    // (d) physical intensities do not enter once lambda* is fixed
    CallPricingRequest moved = jump;
    moved.market.lambda = {3.7, 0.2};
    const MeasureShift& ms = *jump.measure;
    moved.measure = MeasureShift::from_drift_shift(
        {moved.market.lambda[0] - ms.lambda_star[0], moved.market.lambda[1] - ms.lambda_star[1]}, ms.sigma_star,
        moved.market.lambda);
    const double p_moved = price_call(moved).price;
    out.require(p_moved == analytic, fmt("(d) price changed by %.3g", p_moved - analytic));

    out.detail = fmt("(a) |err| = %.2e, (b) %.2f SE, ", bs_err, zb) + fmt("(c) |diff| = %.2e, (d) identical = %g", nj_err, p_moved == analytic) +
                 (out.detail.empty() ? "" : " [" + out.detail + "]");
    return out;
}

// Independent per-state solve of sigma_m s + h_m l = r - c_m by Gaussian elimination.
std::array<double, 2> eliminate(const MarketModel& m, int i)
{
    double r1[3] = {m.asset1.sigma[i], m.asset1.h[i], m.r[i] - m.asset1.c[i]};
    double r2[3] = {m.asset2->sigma[i], m.asset2->h[i], m.r[i] - m.asset2->c[i]};
    if (std::fabs(r2[0]) > std::fabs(r1[0])) std::swap(r1, r2);
    const double f = r2[0] / r1[0];
    for (int k = 0; k < 3; ++k) r2[k] -= f * r1[k];
    const double l = r2[2] / r2[1];
    return {(r1[2] - r1[1] * l) / r1[0], l};
}

// 6. Two-asset completion and classification of the degenerate cases.
Outcome completion()
{
    Outcome out;
    std::mt19937_64 gen(6006);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); };
    int solved = 0;
    double worst = 0.0, worst_elim = 0.0;
    while (solved < 100) {
        MarketModel m;
        m.lambda = {0.2 + 3 * u01(gen), 0.2 + 3 * u01(gen)};
        m.r = {0.1 * u01(gen), 0.1 * u01(gen)};
        const auto draw = [&] {
            AssetParams a;
            a.s0 = 1.0;
            for (int i = 0; i < 2; ++i) {
                a.c[i] = 0.4 * u01(gen) - 0.2;
                a.sigma[i] = 0.05 + 0.5 * u01(gen);
                a.h[i] = (u01(gen) < 0.5 ? -1.0 : 1.0) * (0.02 + 0.5 * u01(gen));
            }
            return a;
        };
        m.asset1 = draw();
        m.asset2 = draw();
        CompletionResult res;
        try {
            res = complete_two_asset_measure(m);
        } catch (const ClassificationError&) {
            continue;  // lambda* <= 0: not an admissible input for this comparison
        }
        ++solved;
        const MeasureShift ab = alpha_beta_measure(m);
        for (int i = 0; i < 2; ++i) {
            worst = std::max({worst, rel(ab.sigma_star[i], res.shift.sigma_star[i]),
                              rel(ab.lambda_star[i], res.shift.lambda_star[i]), rel(ab.c_star[i], res.shift.c_star[i]),
                              rel(ab.h_star[i], res.shift.h_star[i])});
            const auto [s, l] = eliminate(m, i);
            worst_elim = std::max({worst_elim, rel(res.shift.sigma_star[i], s), rel(res.shift.lambda_star[i], l)});
        }
    }
    out.require(worst < 1e-12, fmt("determinant vs alpha/beta %.3g", worst));
    out.require(worst_elim < 1e-12, fmt("determinant vs elimination %.3g", worst_elim));

    // Delta^(h) = 0 by scaling (sigma, h) of asset 1 by a power of two; Delta^(r-c) = 0 iff the
    // second asset's excess drift scales the same way.
    int wrong = 0, cases = 0;
    for (int k = 0; k < 100; ++k) {
        MarketModel m;
        m.lambda = {1.0, 1.0};
        m.r = {0.05, 0.02};
        m.asset1 = {1.0, {0.1 * u01(gen), 0.1 * u01(gen)}, {0.1 + 0.3 * u01(gen), 0.1 + 0.3 * u01(gen)},
                    {0.3 * u01(gen) - 0.15, 0.3 * u01(gen) - 0.15}};
        const double scale = k % 3 == 0 ? 2.0 : (k % 3 == 1 ? 0.5 : 4.0);
        AssetParams b;
        b.s0 = 1.0;
        for (int i = 0; i < 2; ++i) {
            b.sigma[i] = scale * m.asset1.sigma[i];
            b.h[i] = scale * m.asset1.h[i];
            b.c[i] = m.r[i] - scale * (m.r[i] - m.asset1.c[i]);
        }
        const bool arbitrage = k % 2 == 0;
        if (arbitrage) b.c[k % 4 == 0 ? 0 : 1] += 0.01 + 0.05 * u01(gen);
        m.asset2 = b;
        ++cases;
        try {
            complete_two_asset_measure(m);
            ++wrong;
        } catch (const ClassificationError& e) {
            if (e.kind() != (arbitrage ? MarketClass::Arbitrage : MarketClass::Incomplete)) ++wrong;
        }
    }
    out.require(wrong == 0, fmt("%g of %g degenerate cases misclassified", wrong, cases));
    out.detail = fmt("max rel diff alpha/beta %.2e, elimination %.2e, ", worst, worst_elim) +
                 fmt("degenerate misclassified %g/%g", wrong, cases) + (out.detail.empty() ? "" : " [" + out.detail + "]");
    return out;
}

// 7. Quadrature refinement and series extension stay within the reported accuracy.
Outcome convergence()
{
    Outcome out;
    double worst_nodes = 0.0, worst_cut = 0.0, worst_density = 0.0, slack = 0.0;
    std::mt19937_64 gen(7007);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        CallPricingRequest req;
        req.market.lambda = {0.3 + 2 * u01(gen), 0.3 + 2 * u01(gen)};
        req.market.r = {0.06 * u01(gen), 0.06 * u01(gen)};
        req.market.asset1 = {100.0, {0.3 * u01(gen) - 0.1, 0.3 * u01(gen) - 0.1}, {0.1 + 0.3 * u01(gen), 0.1 + 0.3 * u01(gen)},
                             {0.4 * u01(gen) - 0.2, 0.4 * u01(gen) - 0.2}};
        req.measure = single_asset_measure_family(req.market, 0.3 + 2 * u01(gen), 0.3 + 2 * u01(gen));
        req.strike = 80.0 + 40.0 * u01(gen);
        req.maturity = 0.25 + 2.0 * u01(gen);
        req.start = k % 2 ? State::One : State::Zero;

        const auto base = price_call(req);
        auto finer = req;
        finer.controls.quadrature_nodes = 2 * base.quadrature_nodes_used;
        worst_nodes = std::max(worst_nodes, std::fabs(price_call(finer).price - base.price));

        auto longer = req;
        longer.controls.n_max = base.n_max + 5;
        const double diff = std::fabs(price_call(longer).price - base.price);
        // the bound covers the omitted terms; rounding of the summation is allowed on top
        const double allowed = base.truncation_bound + 8 * std::numeric_limits<double>::epsilon() * base.price;
        worst_cut = std::max(worst_cut, diff);
        slack = std::max(slack, diff / allowed);
        out.require(diff <= allowed, fmt("cutoff + 5 moved price by %.3g > %.3g", diff, allowed));

        RegimeParams p = req.market.regime(1);
        const double t = req.maturity;
        const SpendingTimeDensity law(p, req.start, t);
        const auto mass = [&](int nodes) {
            return cached_spending_time_rule(t, nodes)->integrate([&](double tau) { return law(tau); }) + law.atom_weight();
        };
        worst_density = std::max(worst_density, std::fabs(mass(512) - mass(256)));
        const auto d1 = switch_count_probs(p, req.start, t, -1, 128);
        const auto d2 = switch_count_probs(p, req.start, t, -1, 256);
        for (std::size_t n = 0; n < d1.probs.size(); ++n)
            worst_density = std::max(worst_density, std::fabs(d1.probs[n] - d2.probs[n]));
    }
    out.require(worst_nodes < 1e-8, fmt("doubling nodes moved price by %.3g", worst_nodes));
    out.require(worst_density < 1e-8, fmt("doubling nodes moved a density integral by %.3g", worst_density));
    out.detail = fmt("doubling nodes: price %.2e, densities %.2e; ", worst_nodes, worst_density) +
                 fmt("cutoff + 5: price %.2e (%.2f of allowed)", worst_cut, slack) +
                 (out.detail.empty() ? "" : " [" + out.detail + "]");
    return out;
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "normalization", 30.0, normalization},
        {2, "closed forms vs series", 10.0, closed_forms},
        {3, "girsanov switch counts", 120.0, girsanov},
        {4, "martingale suite", 300.0, martingales},
        {5, "call pricing", 300.0, pricing},
        {6, "two-asset completion", 60.0, completion},
        {7, "convergence hygiene", 60.0, convergence},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += fmt(" [runtime %.1f s over budget %.0f s]", secs, c.budget_s);
        }
        std::printf("%s criterion %d (%s): %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of 7 criteria passed\n", 7 - failed);
    return failed == 0 ? 0 : 1;
}
