#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jtd {

/// Regime label of the driving two-state Markov flow. State 0 is the "bull" regime by convention.
enum class State : int { Zero = 0, One = 1 };

inline constexpr int index(State s) noexcept { return static_cast<int>(s); }
inline constexpr State other(State s) noexcept { return s == State::Zero ? State::One : State::Zero; }

/// Thrown when inputs violate a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical check (truncation, back-substitution) cannot meet its tolerance.
class ToleranceFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-state parameters of a jump telegraph-diffusion process together with the bond rates.
/// Units: time in years, c/lambda/r per year, sigma per sqrt-year, h dimensionless.
struct RegimeParams {
    std::array<double, 2> c{0.0, 0.0};       // drift velocity
    std::array<double, 2> sigma{0.0, 0.0};   // diffusion volatility
    std::array<double, 2> h{0.0, 0.0};       // relative jump size at leaving the state
    std::array<double, 2> lambda{1.0, 1.0};  // switching intensity out of the state
    std::array<double, 2> r{0.0, 0.0};       // interest rate

    double c_of(State s) const noexcept { return c[index(s)]; }
    double sigma_of(State s) const noexcept { return sigma[index(s)]; }
    double h_of(State s) const noexcept { return h[index(s)]; }
    double lambda_of(State s) const noexcept { return lambda[index(s)]; }
    double r_of(State s) const noexcept { return r[index(s)]; }
    double lambda_max() const noexcept { return std::max(lambda[0], lambda[1]); }
};

/// Asset-specific part of the dynamics; switching intensities and rates are shared by the market.
struct AssetParams {
    double s0{1.0};
    std::array<double, 2> c{0.0, 0.0};
    std::array<double, 2> sigma{0.0, 0.0};
    std::array<double, 2> h{0.0, 0.0};
};

/// One or two risky assets on a common switching flow and a common Brownian driver, plus the bond.
struct MarketModel {
    AssetParams asset1;
    std::optional<AssetParams> asset2;
    std::array<double, 2> lambda{1.0, 1.0};
    std::array<double, 2> r{0.0, 0.0};

    bool has_second_asset() const noexcept { return asset2.has_value(); }

    /// Full regime view of asset `m` (1 or 2).
    RegimeParams regime(int m = 1) const;
};

/// Girsanov parameters of an equivalent measure and the switching intensities it induces.
struct MeasureShift {
    std::array<double, 2> c_star{0.0, 0.0};
    std::array<double, 2> h_star{0.0, 0.0};
    std::array<double, 2> sigma_star{0.0, 0.0};
    std::array<double, 2> lambda_star{1.0, 1.0};

    /// Builds the shift from drift shifts and physical intensities:
    /// h* = -c*/lambda, lambda* = lambda - c*.
    static MeasureShift from_drift_shift(const std::array<double, 2>& c_star,
                                         const std::array<double, 2>& sigma_star,
                                         const std::array<double, 2>& lambda);

    /// Z == 1: no drift, jump, or Brownian shift.
    static MeasureShift identity(const std::array<double, 2>& lambda);
};

struct ValidationOptions {
    bool require_telegraph_order = false;  // c0 > c1, needed by the telegraph density formulas
};

struct Violation {
    std::string rule;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_params(const RegimeParams& p, ValidationOptions opts = {});
ValidationReport validate_model(const MarketModel& m, ValidationOptions opts = {});

/// Throws InvalidInput listing every violation when the report is not empty.
void require_valid(const ValidationReport& report);

}  // namespace jtd
