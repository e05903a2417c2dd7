#include "jtd/pricer.hpp"

#include <algorithm>
#include <cmath>

#include "jtd/numerics.hpp"
#include "jtd/regime.hpp"

namespace jtd {

namespace {

void require_request(const CallPricingRequest& req)
{
    if (!(req.strike > 0.0)) throw InvalidInput("strike K must be positive");
    if (!(req.maturity > 0.0)) throw InvalidInput("maturity T must be positive");
    require_valid(validate_model(req.market));
    const auto& s = req.market.asset1.sigma;
    if (s[0] == 0.0 && s[1] == 0.0)
        throw InvalidInput("sigma0 = sigma1 = 0: pure jump-telegraph pricing is not supported");
}

RegimeParams starred(const MarketModel& m, const MeasureShift& shift)
{
    RegimeParams p = m.regime(1);
    p.lambda = shift.lambda_star;
    return p;
}

}  // namespace

double bs_kernel(double x, double strike, double sigma)
{
    if (!(x > 0.0) || !(strike > 0.0)) throw InvalidInput("bs_kernel needs x > 0 and K > 0");
    if (sigma < 0.0) throw InvalidInput("bs_kernel needs sigma >= 0");
    if (sigma == 0.0) return std::max(x - strike, 0.0);
    const double m = std::log(x / strike);
    const double half = 0.5 * sigma * sigma;
    return x * normal_cdf((m + half) / sigma) - strike * normal_cdf((m - half) / sigma);
}

MeasureShift resolve_pricing_measure(const CallPricingRequest& req, MarketClass* classification)
{
    if (req.measure) {
        const MeasureShift& s = *req.measure;
        for (int i = 0; i < 2; ++i)
            if (!(s.lambda_star[i] > 0.0)) throw InvalidInput("measure not equivalent: lambda* <= 0");
        const auto res = discounted_asset_residuals(req.market, s, 1);
        for (int i = 0; i < 2; ++i) {
            const double scale = 1.0 + std::fabs(req.market.r[i]) + std::fabs(req.market.asset1.c[i]) +
                                 std::fabs(s.c_star[i]) + req.market.lambda[i];
            if (std::fabs(res[i]) > 1e-10 * scale)
                throw InvalidInput("supplied measure does not make the discounted asset 1 a martingale");
        }
        if (classification) *classification = MarketClass::Family;
        return s;
    }
    if (!req.market.asset2)
        throw InvalidInput("pricing needs a second asset (completion) or an explicit measure");
    if (classification) *classification = MarketClass::Unique;
    return complete_two_asset_measure(req.market).shift;
}

double call_truncation_bound(const AssetParams& a, const MeasureShift& m, double maturity, int n_max)
{
    const double lam_max = std::max(m.lambda_star[0], m.lambda_star[1]) * maturity;
    const double g = std::max({1.0, 1.0 + a.h[0], 1.0 + a.h[1]});
    const double drift_max = std::max(-m.lambda_star[0] * a.h[0], -m.lambda_star[1] * a.h[1]);
    const double envelope = a.s0 * std::exp(drift_max * maturity + lam_max * (g - 1.0));
    return envelope * poisson_upper_tail(g * lam_max, n_max);
}

PricingBreakdown price_call(const CallPricingRequest& req)
{
    require_request(req);
    PricingBreakdown out;
    out.measure = resolve_pricing_measure(req, &out.classification);
    const MeasureShift& ms = out.measure;
    const AssetParams& a = req.market.asset1;
    const RegimeParams star = starred(req.market, ms);
    const double T = req.maturity;
    const double K = req.strike;
    const auto& r = req.market.r;
    const auto& sig = a.sigma;
    const int i = index(req.start);

    // Velocities of the discounted asset under P*: c~_i = -lambda*_i h_i.
    const std::array<double, 2> ct{-ms.lambda_star[0] * a.h[0], -ms.lambda_star[1] * a.h[1]};

    int n_max = 0;
    if (req.controls.n_max) {
        n_max = *req.controls.n_max;
    } else {
        const double target = req.controls.tolerance * a.s0;
        while (call_truncation_bound(a, ms, T, n_max) >= target) {
            if (++n_max > req.controls.max_terms)
                throw ToleranceFailure("call price series did not reach the requested tolerance");
        }
    }
    out.n_max = n_max;
    out.truncation_bound = call_truncation_bound(a, ms, T, n_max);
    out.quadrature_nodes_used = req.controls.quadrature_nodes;

    // kappa_{i,n}: (1+h_i)^{ceil(n/2)} (1+h_{1-i})^{floor(n/2)} in log form.
    auto log_kappa = [&](int n) {
        return ((n + 1) / 2) * std::log1p(a.h[i]) + (n / 2) * std::log1p(a.h[1 - i]);
    };

    out.per_n_contributions.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    out.per_n_contributions[0] = std::exp(-ms.lambda_star[i] * T) *
                                 bs_kernel(a.s0 * std::exp(ct[i] * T), K * std::exp(-r[i] * T), sig[i] * std::sqrt(T));

    const auto rule = cached_spending_time_rule(T, req.controls.quadrature_nodes);
    for (std::size_t k = 0; k < rule->tau.size(); ++k) {
        const double tau = rule->tau[k];
        const double rest = T - tau;
        const double base = a.s0 * std::exp(ct[0] * tau + ct[1] * rest);
        const double disc_strike = K * std::exp(-r[0] * tau - r[1] * rest);
        const double vol = std::sqrt(sig[0] * sig[0] * tau + sig[1] * sig[1] * rest);
        for (int n = 1; n <= n_max; ++n) {
            const double f = spending_time_pdf_n(star, req.start, tau, T, n);
            if (f == 0.0) continue;
            const double x = base * std::exp(log_kappa(n));
            if (x == 0.0) continue;  // kappa underflow; phi(0, K, s) = 0
            out.per_n_contributions[static_cast<std::size_t>(n)] += rule->weight[k] * f * bs_kernel(x, disc_strike, vol);
        }
    }
    out.price = pairwise_sum(out.per_n_contributions);
    return out;
}

double price_call_nojump(const CallPricingRequest& req)
{
    require_request(req);
    const AssetParams& a = req.market.asset1;
    if (a.h[0] != 0.0 || a.h[1] != 0.0)
        throw InvalidInput("price_call_nojump requires h0 = h1 = 0 for asset 1");
    const MeasureShift ms = resolve_pricing_measure(req);
    const RegimeParams star = starred(req.market, ms);
    const double T = req.maturity;
    const double K = req.strike;
    const auto& r = req.market.r;
    const auto& sig = a.sigma;
    const int i = index(req.start);

    const SpendingTimeDensity law(star, req.start, T);
    const double atom = law.atom_weight() * bs_kernel(a.s0, K * std::exp(-r[i] * T), sig[i] * std::sqrt(T));
    const auto rule = cached_spending_time_rule(T, req.controls.quadrature_nodes);
    const double body = rule->integrate([&](double tau) {
        const double rest = T - tau;
        const double vol = std::sqrt(sig[0] * sig[0] * tau + sig[1] * sig[1] * rest);
        return law.density(tau) * bs_kernel(a.s0, K * std::exp(-r[0] * tau - r[1] * rest), vol);
    });
    return atom + body;
}

}  // namespace jtd
