#include "jtd/measure.hpp"

#include <algorithm>
#include <cmath>

namespace jtd {

namespace {

MartingaleReport report(std::array<double, 2> residuals, double tol)
{
    return {std::fabs(residuals[0]) <= tol && std::fabs(residuals[1]) <= tol, residuals};
}

const AssetParams& asset(const MarketModel& m, int which)
{
    if (which == 1) return m.asset1;
    if (which == 2 && m.asset2) return *m.asset2;
    throw InvalidInput("market has no asset " + std::to_string(which));
}

}  // namespace

MartingaleReport check_martingale_drift(const RegimeParams& p, double tol)
{
    return report({p.c[0] + p.lambda[0] * p.h[0], p.c[1] + p.lambda[1] * p.h[1]}, tol);
}

MartingaleReport check_martingale_exponential(const RegimeParams& p, double tol)
{
    std::array<double, 2> res{};
    for (int i = 0; i < 2; ++i) res[i] = p.c[i] + 0.5 * p.sigma[i] * p.sigma[i] + p.lambda[i] * p.h[i];
    return report(res, tol);
}

GirsanovResult girsanov_transform(const RegimeParams& p, const MeasureShift& shift)
{
    GirsanovResult g;
    g.under_measure = p;
    for (int i = 0; i < 2; ++i) {
        if (!(shift.lambda_star[i] > 0.0) || !(shift.h_star[i] > -1.0))
            throw InvalidInput("measure not equivalent: lambda*" + std::to_string(i) + " <= 0");
        g.under_measure.lambda[i] = shift.lambda_star[i];
        g.under_measure.c[i] = p.c[i] + p.sigma[i] * shift.sigma_star[i];
        g.compound_jump[i] = (1.0 + shift.h_star[i]) * (1.0 + p.h[i]) - 1.0;
    }
    return g;
}

double radon_nikodym_eval(const MeasureShift& shift, const PathRecord& path, double t)
{
    if (std::fabs(t - path.horizon) > 1e-12 * std::max(1.0, path.horizon))
        throw InvalidInput("radon_nikodym_eval: t must equal the path horizon");
    double log_z = 0.0;
    for (std::size_t k = 0; k < path.segments(); ++k) {
        const int s = index(path.regimes[k]);
        const double dt = path.segment_length(k);
        const double ss = shift.sigma_star[s];
        log_z += shift.c_star[s] * dt + ss * std::sqrt(dt) * path.gaussians[k] - 0.5 * ss * ss * dt;
        if (k + 1 < path.segments()) log_z += std::log1p(shift.h_star[s]);  // switch out of s
    }
    return std::exp(log_z);
}

MeasureShift single_asset_measure_family(const MarketModel& market, double theta0, double theta1)
{
    const std::array<double, 2> theta{theta0, theta1};
    MeasureShift s;
    for (int i = 0; i < 2; ++i) {
        if (!(theta[i] > 0.0)) throw InvalidInput("theta" + std::to_string(i) + " must be positive");
        const double sigma = market.asset1.sigma[i];
        if (sigma == 0.0)
            throw InvalidInput("sigma" + std::to_string(i) +
                               " = 0: the risk-neutral family needs nonzero volatilities "
                               "(the pure jump-telegraph case is not supported)");
        const double lambda = market.lambda[i];
        s.c_star[i] = lambda - theta[i];
        s.h_star[i] = -1.0 + theta[i] / lambda;
        s.sigma_star[i] = (market.r[i] - market.asset1.c[i] - market.asset1.h[i] * theta[i]) / sigma;
        s.lambda_star[i] = theta[i];
    }
    return s;
}

std::array<double, 2> discounted_asset_residuals(const MarketModel& market, const MeasureShift& shift, int which)
{
    const AssetParams& a = asset(market, which);
    std::array<double, 2> res{};
    for (int i = 0; i < 2; ++i) {
        const double compound = a.h[i] + shift.h_star[i] + a.h[i] * shift.h_star[i];
        res[i] = a.c[i] + shift.c_star[i] - market.r[i] + a.sigma[i] * shift.sigma_star[i] +
                 market.lambda[i] * compound;
    }
    return res;
}

const char* to_string(MarketClass c) noexcept
{
    switch (c) {
    case MarketClass::Unique: return "unique";
    case MarketClass::Family: return "family";
    case MarketClass::Arbitrage: return "arbitrage";
    case MarketClass::Incomplete: return "incomplete";
    }
    return "unknown";
}

CompletionInputs completion_inputs(const MarketModel& market)
{
    if (!market.asset2) throw InvalidInput("completion needs a second asset");
    const AssetParams& a1 = market.asset1;
    const AssetParams& a2 = *market.asset2;
    CompletionInputs in;
    in.has_alpha_beta = true;
    for (int i = 0; i < 2; ++i) {
        const double r = market.r[i];
        in.delta_h[i] = a1.sigma[i] * a2.h[i] - a2.sigma[i] * a1.h[i];
        in.delta_rc[i] = a1.sigma[i] * (r - a2.c[i]) - a2.sigma[i] * (r - a1.c[i]);
        if (a1.h[i] == 0.0 || a2.h[i] == 0.0) in.has_alpha_beta = false;
    }
    if (in.has_alpha_beta) {
        for (int m = 0; m < 2; ++m) {
            const AssetParams& a = (m == 0) ? a1 : a2;
            for (int i = 0; i < 2; ++i) {
                in.alpha[m][i] = (market.r[i] - a.c[i]) / a.h[i];
                in.beta[m][i] = a.sigma[i] / a.h[i];
            }
        }
    }
    return in;
}

CompletionResult complete_two_asset_measure(const MarketModel& market)
{
    const CompletionInputs in = completion_inputs(market);
    const AssetParams& a1 = market.asset1;
    const AssetParams& a2 = *market.asset2;

    // Classify degenerate determinants first; arbitrage in either state dominates.
    std::optional<ClassificationError> degenerate;
    for (int i = 0; i < 2; ++i) {
        const double r = market.r[i];
        const double scale_h = std::fabs(a1.sigma[i] * a2.h[i]) + std::fabs(a2.sigma[i] * a1.h[i]);
        if (std::fabs(in.delta_h[i]) > 1e-12 * scale_h) continue;
        const double scale_rc = std::fabs(a1.sigma[i] * (r - a2.c[i])) + std::fabs(a2.sigma[i] * (r - a1.c[i]));
        const std::string s = std::to_string(i);
        if (std::fabs(in.delta_rc[i]) > 1e-12 * scale_rc) {
            degenerate.emplace(MarketClass::Arbitrage, i,
                               "arbitrage: no risk-neutral measure (Delta^(h)_" + s + " = 0, Delta^(r-c)_" + s + " != 0)");
            break;
        }
        if (!degenerate)
            degenerate.emplace(MarketClass::Incomplete, i,
                               "incomplete: infinitely many measures (Delta^(h)_" + s + " = Delta^(r-c)_" + s + " = 0)");
    }
    if (degenerate) throw *degenerate;

    CompletionResult out;
    out.inputs = in;
    for (int i = 0; i < 2; ++i) {
        const double r = market.r[i];
        const double lambda_star = in.delta_rc[i] / in.delta_h[i];
        if (!(lambda_star > 0.0))
            throw ClassificationError(MarketClass::Arbitrage, i,
                                      "arbitrage: lambda*" + std::to_string(i) +
                                          " = Delta^(r-c)/Delta^(h) <= 0, no equivalent martingale measure");
        out.shift.sigma_star[i] = ((r - a1.c[i]) * a2.h[i] - (r - a2.c[i]) * a1.h[i]) / in.delta_h[i];
        out.shift.lambda_star[i] = lambda_star;
        out.shift.c_star[i] = market.lambda[i] - lambda_star;
        out.shift.h_star[i] = -out.shift.c_star[i] / market.lambda[i];
    }

    // Back-substitution into the drift conditions of both discounted assets.
    for (int m = 1; m <= 2; ++m) {
        const AssetParams& a = (m == 1) ? a1 : a2;
        const auto res = discounted_asset_residuals(market, out.shift, m);
        for (int i = 0; i < 2; ++i) {
            const double scale = 1.0 + std::fabs(a.c[i]) + std::fabs(market.r[i]) +
                                 std::fabs(a.sigma[i] * out.shift.sigma_star[i]) + std::fabs(out.shift.c_star[i]) +
                                 market.lambda[i] * (std::fabs(a.h[i]) + std::fabs(out.shift.h_star[i]));
            out.max_residual = std::max(out.max_residual, std::fabs(res[i]) / scale);
        }
    }
    if (out.max_residual > 1e-12)
        throw ToleranceFailure("two-asset completion: back-substitution residual " +
                               std::to_string(out.max_residual) + " exceeds 1e-12");

    if (in.has_alpha_beta) out.alpha_beta = alpha_beta_measure(market);
    return out;
}

MeasureShift alpha_beta_measure(const MarketModel& market)
{
    const CompletionInputs in = completion_inputs(market);
    if (!in.has_alpha_beta) throw InvalidInput("alpha/beta form needs nonzero jumps h^(m)_i for both assets");
    MeasureShift s;
    for (int i = 0; i < 2; ++i) {
        const double a1 = in.alpha[0][i], a2 = in.alpha[1][i];
        const double b1 = in.beta[0][i], b2 = in.beta[1][i];
        const double db = b1 - b2;
        s.sigma_star[i] = (a1 - a2) / db;
        s.lambda_star[i] = (b1 * a2 - b2 * a1) / db;
        s.c_star[i] = market.lambda[i] - s.lambda_star[i];
        s.h_star[i] = -s.c_star[i] / market.lambda[i];
    }
    return s;
}

}  // namespace jtd
