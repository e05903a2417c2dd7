#include <cmath>

#include <gtest/gtest.h>

#include "jtd/measure.hpp"
#include "jtd/pricer.hpp"
#include "oracles.hpp"

using namespace jtd;

namespace {

CallPricingRequest black_scholes_request(std::array<double, 2> theta)
{
    CallPricingRequest req;
    req.market.lambda = {1.0, 2.0};
    req.market.r = {0.05, 0.05};
    req.market.asset1 = {100.0, {0.05, 0.05}, {0.2, 0.2}, {0.0, 0.0}};
    req.measure = single_asset_measure_family(req.market, theta[0], theta[1]);
    req.strike = 100.0;
    req.maturity = 1.0;
    return req;
}

CallPricingRequest jump_request()
{
    CallPricingRequest req;
    req.market.lambda = {1.0, 1.5};
    req.market.r = {0.05, 0.02};
    req.market.asset1 = {100.0, {0.2, -0.1}, {0.3, 0.2}, {-0.1, 0.1}};
    req.measure = single_asset_measure_family(req.market, 1.0, 1.2);
    req.strike = 95.0;
    req.maturity = 1.5;
    return req;
}

}  // namespace

TEST(BsKernel, Values)
{
    EXPECT_NEAR(bs_kernel(1.0, 1.0, 0.2), 2.0 * 0.5 * std::erfc(-0.1 / std::sqrt(2.0)) - 1.0, 1e-16);
    EXPECT_NEAR(bs_kernel(1.0, 1.0, 0.2), 0.079656, 1e-6);
    EXPECT_EQ(bs_kernel(3.0, 1.0, 0.0), 2.0);
    EXPECT_EQ(bs_kernel(1.0, 3.0, 0.0), 0.0);
    EXPECT_NEAR(bs_kernel(100.0, 100.0 * std::exp(-0.05), 0.2), oracle::bs_call(100, 100, 0.05, 0.2, 1.0), 1e-12);
}

TEST(Pricer, BlackScholesCollapse)
{
    const double want = oracle::bs_call(100.0, 100.0, 0.05, 0.2, 1.0);
    EXPECT_NEAR(want, 10.4506, 1e-4);
    for (auto theta : {std::array{1.0, 1.0}, std::array{0.3, 4.0}}) {
        const auto res = price_call(black_scholes_request(theta));
        EXPECT_NEAR(res.price, want, 1e-10);
        EXPECT_EQ(res.classification, MarketClass::Family);
    }
}

TEST(Pricer, BreakdownSumsToPrice)
{
    const auto res = price_call(jump_request());
    double sum = 0.0;
    for (double v : res.per_n_contributions) sum += v;
    EXPECT_NEAR(sum, res.price, 1e-12 * res.price);
    EXPECT_EQ(static_cast<int>(res.per_n_contributions.size()), res.n_max + 1);
    EXPECT_LT(res.truncation_bound, 1e-12 * 100.0);
    EXPECT_EQ(res.quadrature_nodes_used, 256);
}

TEST(Pricer, NoSwitchTermIsAnalytic)
{
    auto req = jump_request();
    const auto res = price_call(req);
    const auto& m = *req.measure;
    const double ct = -m.lambda_star[0] * req.market.asset1.h[0];
    const double atom = std::exp(-m.lambda_star[0] * req.maturity) *
                        bs_kernel(100.0 * std::exp(ct * req.maturity), 95.0 * std::exp(-0.05 * req.maturity),
                                  0.3 * std::sqrt(req.maturity));
    EXPECT_NEAR(res.per_n_contributions[0], atom, 1e-13);
}

TEST(Pricer, DeepOutOfTheMoneyDecreases)
{
    auto req = jump_request();
    double prev = price_call(req).price;
    for (double k : {150.0, 300.0, 1000.0, 1e5}) {
        req.strike = k;
        const double p = price_call(req).price;
        EXPECT_LT(p, prev);
        EXPECT_GE(p, 0.0);
        prev = p;
    }
    EXPECT_LT(prev, 1e-12);
}

TEST(Pricer, NoJumpSpecialization)
{
    CallPricingRequest req;
    req.market.lambda = {1.0, 2.0};
    req.market.r = {0.05, 0.03};
    req.market.asset1 = {100.0, {0.1, -0.05}, {0.2, 0.35}, {0.0, 0.0}};
    req.measure = single_asset_measure_family(req.market, 0.8, 1.7);
    req.strike = 105.0;
    req.maturity = 2.0;
    for (State s : {State::Zero, State::One}) {
        req.start = s;
        EXPECT_NEAR(price_call(req).price, price_call_nojump(req), 1e-8);
    }
    req.market.asset1.h = {0.1, 0.0};
    EXPECT_THROW(price_call_nojump(req), InvalidInput);
}

TEST(Pricer, NoJumpEqualVolatilityIsBlackScholes)
{
    CallPricingRequest req;
    req.market.lambda = {1.0, 2.0};
    req.market.r = {0.04, 0.04};
    req.market.asset1 = {100.0, {0.1, -0.05}, {0.25, 0.25}, {0.0, 0.0}};
    req.measure = single_asset_measure_family(req.market, 0.8, 1.7);
    req.strike = 90.0;
    EXPECT_NEAR(price_call_nojump(req), oracle::bs_call(100.0, 90.0, 0.04, 0.25, 1.0), 1e-10);
}

TEST(Pricer, SmallIntensityUsesStartingRegime)
{
    CallPricingRequest req;
    req.market.lambda = {1.0, 1.0};
    req.market.r = {0.05, 0.01};
    req.market.asset1 = {100.0, {0.1, -0.05}, {0.2, 0.4}, {0.0, 0.0}};
    req.measure = single_asset_measure_family(req.market, 1e-9, 1e-9);
    req.start = State::One;
    req.strike = 100.0;
    EXPECT_NEAR(price_call_nojump(req), oracle::bs_call(100.0, 100.0, 0.01, 0.4, 1.0), 1e-6);
}

TEST(Pricer, PhysicalIntensityDoesNotEnter)
{
    auto req = jump_request();
    const double base = price_call(req).price;
    req.market.lambda = {7.0, 0.01};
    req.measure = single_asset_measure_family(req.market, 1.0, 1.2);  // same lambda*
    EXPECT_EQ(price_call(req).price, base);
}

TEST(Pricer, CompletedTwoAssetMarket)
{
    CallPricingRequest req;
    req.market.lambda = {1.0, 2.0};
    req.market.r = {0.05, 0.03};
    req.market.asset1 = {100.0, {0.1, -0.05}, {0.2, 0.25}, {-0.1, 0.15}};
    req.market.asset2 = AssetParams{50.0, {0.0, 0.04}, {0.3, 0.1}, {0.2, -0.2}};
    req.strike = 100.0;
    MarketClass cls = MarketClass::Family;
    const auto m = resolve_pricing_measure(req, &cls);
    EXPECT_EQ(cls, MarketClass::Unique);
    EXPECT_NEAR(m.lambda_star[0], 0.025 / 0.07, 1e-15);
    EXPECT_GT(price_call(req).price, 0.0);
}

TEST(Pricer, RejectsNonMartingaleMeasure)
{
    auto req = jump_request();
    req.measure->sigma_star[0] += 0.1;
    EXPECT_THROW(price_call(req), InvalidInput);
    req = jump_request();
    req.measure.reset();
    EXPECT_THROW(price_call(req), InvalidInput);
}

TEST(Pricer, ExplicitCutoffAndBound)
{
    auto req = jump_request();
    req.controls.n_max = 3;
    const auto small = price_call(req);
    EXPECT_EQ(small.n_max, 3);
    req.controls.n_max = 40;
    const auto big = price_call(req);
    EXPECT_LE(big.price - small.price, small.truncation_bound);
    EXPECT_GE(big.price, small.price);
}
