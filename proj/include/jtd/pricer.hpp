#pragma once

#include <optional>
#include <vector>

#include "jtd/measure.hpp"
#include "jtd/model.hpp"

namespace jtd {

/// Black-Scholes kernel E[x e^{Z - s^2/2} - K]^+ for Z ~ N(0, s^2): x F(d+) - K F(d-).
/// s = 0 gives (x - K)^+.
double bs_kernel(double x, double strike, double sigma);

struct PricingControls {
    int quadrature_nodes = 256;
    /// Series cutoff: stop once the truncation bound drops below tolerance * S(0).
    double tolerance = 1e-12;
    /// Explicit cutoff overriding the tolerance rule (n_max >= 0).
    std::optional<int> n_max;
    int max_terms = 5000;
};

/// European call on asset 1. The measure is either given explicitly (e.g. a member of the
/// one-asset risk-neutral family) or derived from the two-asset completion.
struct CallPricingRequest {
    MarketModel market;
    std::optional<MeasureShift> measure;
    double strike = 1.0;
    double maturity = 1.0;
    State start = State::Zero;
    PricingControls controls;
};

struct PricingBreakdown {
    double price = 0.0;
    /// Entry n is the contribution of paths with exactly n switches; entry 0 is the analytic
    /// no-switch term, so price == pairwise sum of all entries.
    std::vector<double> per_n_contributions;
    double truncation_bound = 0.0;  // bound on the omitted n > n_max terms
    int quadrature_nodes_used = 0;
    int n_max = 0;
    MeasureShift measure;
    MarketClass classification = MarketClass::Unique;
};

/// Measure used for pricing: the explicit one (checked to make B^{-1} S^(1) a martingale)
/// or the two-asset completion.
MeasureShift resolve_pricing_measure(const CallPricingRequest& req, MarketClass* classification = nullptr);

/// Bound on sum_{n > n_max} of the per-count terms: the Poisson(g lambda*_max T) tail times
/// the envelope S0 e^{max c~ T} e^{lambda*_max T (g - 1)}, g = max(1, 1 + h0, 1 + h1).
double call_truncation_bound(const AssetParams& a, const MeasureShift& m, double maturity, int n_max);

/// Call price by quadrature over the spending time in state 0, summed over switch counts,
/// under the switching intensities lambda* (the physical lambda never enters).
PricingBreakdown price_call(const CallPricingRequest& req);

/// Specialization for h^(1) = 0: one quadrature against the aggregated Bessel-form density.
double price_call_nojump(const CallPricingRequest& req);

}  // namespace jtd
