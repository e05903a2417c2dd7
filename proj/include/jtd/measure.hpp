#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "jtd/model.hpp"
#include "jtd/path.hpp"

namespace jtd {

struct MartingaleReport {
    bool is_martingale = false;
    std::array<double, 2> residuals{0.0, 0.0};
};

/// T + J + D is a martingale iff c_i + lambda_i h_i = 0 in both states.
MartingaleReport check_martingale_drift(const RegimeParams& p, double tol = 1e-12);

/// exp(T + D) * kappa is a martingale iff c_i + sigma_i^2 / 2 + lambda_i h_i = 0 in both states.
MartingaleReport check_martingale_exponential(const RegimeParams& p, double tol = 1e-12);

/// Dynamics seen under the shifted measure P*.
struct GirsanovResult {
    /// Parameters to simulate under P*: intensities lambda*, drifts c_i + sigma_i sigma*_i,
    /// jump sizes, volatilities and rates unchanged.
    RegimeParams under_measure;
    /// Jump size h~ of the product Z * S under P: (1 + h~) = (1 + h*)(1 + h).
    std::array<double, 2> compound_jump{0.0, 0.0};
};

GirsanovResult girsanov_transform(const RegimeParams& p, const MeasureShift& shift);

/// Density Z(t) of P* with respect to P along a path simulated under P; t must equal the path horizon.
double radon_nikodym_eval(const MeasureShift& shift, const PathRecord& path, double t);

/// Risk-neutral family of the one-asset market indexed by theta_i = lambda*_i > 0.
/// Needs sigma_0, sigma_1 of asset 1 nonzero.
MeasureShift single_asset_measure_family(const MarketModel& market, double theta0, double theta1);

/// Drift residual of Z B^{-1} S^(m) per state, zero iff the discounted asset m is a P*-martingale:
/// c_i + c*_i - r_i + sigma_i sigma*_i + lambda_i (h_i + h*_i + h_i h*_i).
std::array<double, 2> discounted_asset_residuals(const MarketModel& market, const MeasureShift& shift, int asset);

enum class MarketClass { Unique, Family, Arbitrage, Incomplete };

const char* to_string(MarketClass c) noexcept;

/// Thrown when the two-asset drift system has no solution (arbitrage) or infinitely many (incomplete).
class ClassificationError : public std::runtime_error {
public:
    ClassificationError(MarketClass kind, int state, const std::string& what)
        : std::runtime_error(what), kind_(kind), state_(state) {}

    MarketClass kind() const noexcept { return kind_; }
    int state() const noexcept { return state_; }

private:
    MarketClass kind_;
    int state_;
};

/// Per-state determinants of the two-asset completion and, when every jump is nonzero,
/// the alpha/beta coefficients (index [asset - 1][state]).
struct CompletionInputs {
    std::array<double, 2> delta_h{0.0, 0.0};   // sigma^(1) h^(2) - sigma^(2) h^(1)
    std::array<double, 2> delta_rc{0.0, 0.0};  // sigma^(1)(r - c^(2)) - sigma^(2)(r - c^(1))
    bool has_alpha_beta = false;
    std::array<std::array<double, 2>, 2> alpha{};  // (r - c^(m)) / h^(m)
    std::array<std::array<double, 2>, 2> beta{};   // sigma^(m) / h^(m)
};

CompletionInputs completion_inputs(const MarketModel& market);

struct CompletionResult {
    MeasureShift shift;
    CompletionInputs inputs;
    std::optional<MeasureShift> alpha_beta;  // same measure via the alpha/beta formulas
    double max_residual = 0.0;               // back-substitution into both asset drift conditions
};

/// Unique martingale measure of the two-asset market by the determinant formulas.
/// Throws ClassificationError for arbitrage / incompleteness, ToleranceFailure when the
/// back-substitution residual exceeds 1e-12 (relative to the equation scale).
CompletionResult complete_two_asset_measure(const MarketModel& market);

/// The alpha/beta form of the completion; requires all four jump sizes nonzero.
MeasureShift alpha_beta_measure(const MarketModel& market);

}  // namespace jtd
