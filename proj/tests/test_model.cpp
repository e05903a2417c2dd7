#include <gtest/gtest.h>

#include "jtd/model.hpp"

using namespace jtd;

namespace {

bool mentions(const ValidationReport& r, const std::string& text)
{
    for (const auto& v : r.violations)
        if (v.message.find(text) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST(Validation, AcceptsRegularParameters)
{
    RegimeParams p;
    p.lambda = {2.0, 1.0};
    p.c = {0.3, -0.3};
    EXPECT_TRUE(validate_params(p).ok());
    EXPECT_TRUE(validate_params(p, {true}).ok());
}

TEST(Validation, JumpBelowMinusOne)
{
    RegimeParams p;
    p.h = {-1.2, 0.0};
    const auto r = validate_params(p);
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(mentions(r, "h0 <= -1"));
    p.h = {-1.0, 0.0};
    EXPECT_FALSE(validate_params(p).ok());
}

TEST(Validation, TelegraphOrderOnlyWhenRequested)
{
    RegimeParams p;
    p.c = {0.1, 0.1};
    EXPECT_TRUE(validate_params(p).ok());
    const auto r = validate_params(p, {true});
    EXPECT_TRUE(mentions(r, "c0 must exceed c1"));
}

TEST(Validation, IntensitiesMustBePositive)
{
    RegimeParams p;
    p.lambda = {0.0, 0.0};
    EXPECT_FALSE(validate_params(p).ok());
    EXPECT_THROW(require_valid(validate_params(p)), InvalidInput);
}

TEST(Validation, MarketPrefixesAssets)
{
    MarketModel m;
    m.asset1.h = {0.1, 0.1};
    m.asset2 = AssetParams{};
    m.asset2->h = {-3.0, 0.0};
    const auto r = validate_model(m);
    ASSERT_FALSE(r.ok());
    EXPECT_TRUE(mentions(r, "asset2."));
    m.asset2->h = {0.0, 0.0};
    m.asset2->s0 = -1.0;
    EXPECT_FALSE(validate_model(m).ok());
}

TEST(MeasureShift, DriftShiftRelations)
{
    const auto s = MeasureShift::from_drift_shift({0.5, -0.25}, {0.1, 0.2}, {2.0, 1.0});
    EXPECT_EQ(s.lambda_star[0], 1.5);
    EXPECT_EQ(s.lambda_star[1], 1.25);
    EXPECT_EQ(s.h_star[0], -0.25);
    EXPECT_EQ(s.h_star[1], 0.25);
    const auto id = MeasureShift::identity({2.0, 1.0});
    EXPECT_EQ(id.lambda_star[0], 2.0);
    EXPECT_EQ(id.c_star[1], 0.0);
}

TEST(MarketModel, RegimeView)
{
    MarketModel m;
    m.lambda = {2.0, 3.0};
    m.r = {0.01, 0.02};
    m.asset1.c = {0.1, 0.2};
    m.asset2 = AssetParams{5.0, {0.3, 0.4}, {0.5, 0.6}, {0.7, 0.8}};
    const auto p = m.regime(2);
    EXPECT_EQ(p.c[1], 0.4);
    EXPECT_EQ(p.h[0], 0.7);
    EXPECT_EQ(p.lambda[1], 3.0);
    EXPECT_EQ(p.r[0], 0.01);
    EXPECT_EQ(m.regime(1).c[0], 0.1);
}
