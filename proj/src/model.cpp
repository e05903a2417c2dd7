#include "jtd/model.hpp"

#include <cmath>
#include <sstream>

namespace jtd {

RegimeParams MarketModel::regime(int m) const
{
    if (m != 1 && m != 2) throw InvalidInput("asset index must be 1 or 2");
    if (m == 2 && !asset2) throw InvalidInput("market has no second asset");
    const AssetParams& a = (m == 1) ? asset1 : *asset2;
    RegimeParams p;
    p.c = a.c;
    p.sigma = a.sigma;
    p.h = a.h;
    p.lambda = lambda;
    p.r = r;
    return p;
}

MeasureShift MeasureShift::from_drift_shift(const std::array<double, 2>& c_star,
                                            const std::array<double, 2>& sigma_star,
                                            const std::array<double, 2>& lambda)
{
    MeasureShift s;
    for (int i = 0; i < 2; ++i) {
        s.c_star[i] = c_star[i];
        s.sigma_star[i] = sigma_star[i];
        s.h_star[i] = -c_star[i] / lambda[i];
        s.lambda_star[i] = lambda[i] - c_star[i];
    }
    return s;
}

MeasureShift MeasureShift::identity(const std::array<double, 2>& lambda)
{
    return from_drift_shift({0.0, 0.0}, {0.0, 0.0}, lambda);
}

namespace {

void check_shared(const std::array<double, 2>& lambda, const std::array<double, 2>& r,
                  std::vector<Violation>& out)
{
    for (int i = 0; i < 2; ++i) {
        const std::string s = std::to_string(i);
        if (!(lambda[i] > 0.0) || !std::isfinite(lambda[i]))
            out.push_back({"lambda" + s + " > 0", "lambda" + s + " must be positive and finite"});
        if (!(r[i] >= 0.0) || !std::isfinite(r[i]))
            out.push_back({"r" + s + " >= 0", "r" + s + " must be nonnegative and finite"});
    }
}

void check_asset(const std::array<double, 2>& c, const std::array<double, 2>& sigma,
                 const std::array<double, 2>& h, const std::string& prefix,
                 ValidationOptions opts, std::vector<Violation>& out)
{
    for (int i = 0; i < 2; ++i) {
        const std::string s = std::to_string(i);
        if (!(h[i] > -1.0) || !std::isfinite(h[i]))
            out.push_back({prefix + "h" + s + " > -1", prefix + "h" + s + " <= -1"});
        if (!std::isfinite(c[i]))
            out.push_back({prefix + "c" + s + " finite", prefix + "c" + s + " is not finite"});
        if (!std::isfinite(sigma[i]))
            out.push_back({prefix + "sigma" + s + " finite", prefix + "sigma" + s + " is not finite"});
    }
    if (opts.require_telegraph_order && !(c[0] > c[1]))
        out.push_back({prefix + "c0 > c1", prefix + "c0 must exceed c1"});
}

}  // namespace

ValidationReport validate_params(const RegimeParams& p, ValidationOptions opts)
{
    ValidationReport rep;
    check_shared(p.lambda, p.r, rep.violations);
    check_asset(p.c, p.sigma, p.h, "", opts, rep.violations);
    return rep;
}

ValidationReport validate_model(const MarketModel& m, ValidationOptions opts)
{
    ValidationReport rep;
    check_shared(m.lambda, m.r, rep.violations);
    check_asset(m.asset1.c, m.asset1.sigma, m.asset1.h, m.asset2 ? "asset1." : "", opts,
                rep.violations);
    if (!(m.asset1.s0 > 0.0))
        rep.violations.push_back({"s1_0 > 0", "initial price of asset 1 must be positive"});
    if (m.asset2) {
        check_asset(m.asset2->c, m.asset2->sigma, m.asset2->h, "asset2.", opts, rep.violations);
        if (!(m.asset2->s0 > 0.0))
            rep.violations.push_back({"s2_0 > 0", "initial price of asset 2 must be positive"});
    }
    return rep;
}

void require_valid(const ValidationReport& report)
{
    if (report.ok()) return;
    std::ostringstream os;
    os << "invalid parameters:";
    for (const auto& v : report.violations) os << ' ' << v.message << ';';
    throw InvalidInput(os.str());
}

}  // namespace jtd
