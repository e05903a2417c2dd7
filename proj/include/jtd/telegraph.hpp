#pragma once

#include <optional>
#include <vector>

#include "jtd/model.hpp"

namespace jtd {

/// Point mass carried by a distribution (the no-switch event).
struct Atom {
    double location = 0.0;
    double weight = 0.0;
};

/// Aggregated density: structural atom plus the absolutely continuous value at one abscissa.
struct DensityValue {
    Atom atom;
    double ac = 0.0;
};

/// Evaluated curve; `n < 0` marks an aggregated (all switch counts) curve.
struct DensityGrid {
    std::vector<double> abscissae;
    std::vector<double> values;
    int n = -1;
    State start = State::Zero;
    std::vector<Atom> atoms;
};

/// Density of the telegraph process with n >= 1 switches, zero jumps:
/// polynomial in (c0 t - x), (x - c1 t) times theta(x, t), supported on (c1 t, c0 t). Needs c0 > c1.
double q_density(const RegimeParams& p, State start, double x, double t, int n);

/// Accumulated jump after n switches: [(n+1)/2] h_i + [n/2] h_{1-i}.
double jump_shift(const RegimeParams& p, State start, int n);

/// Jump telegraph density with n >= 1 switches: q shifted by jump_shift.
double jump_telegraph_pdf_n(const RegimeParams& p, State start, double x, double t, int n);

/// Jump telegraph density summed over n (n_max < 0: default truncation); atom e^{-lambda_i t} at c_i t.
DensityValue jump_telegraph_pdf_series(const RegimeParams& p, State start, double x, double t, int n_max = -1);

/// Modified-Bessel closed form of the aggregated jump telegraph density; requires h0 + h1 = 0.
/// The expression is evaluated as written, with the theta(x, t) indicator on the unshifted
/// support (c1 t, c0 t); it coincides with the series where the shifted and unshifted supports overlap.
DensityValue jump_telegraph_pdf_bessel(const RegimeParams& p, State start, double x, double t);

struct MixtureOptions {
    int nodes = 256;
};

/// Density of the telegraph-diffusion variable T(t) + D(t): a Gaussian mixture over the spending
/// time, with the no-switch atom contributing the Gaussian e^{-lambda_i t} psi_i(x, t) analytically.
/// If the starting state's sigma is 0 that atom stays a point mass (see telegraph_diffusion_atom)
/// and is excluded here. With sigma0 = sigma1 = 0 the jump-free telegraph series is returned.
double telegraph_diffusion_pdf(const RegimeParams& p, State start, double x, double t, MixtureOptions opts = {});

/// Point mass of T(t) + D(t), present only when the starting state has zero volatility.
std::optional<Atom> telegraph_diffusion_atom(const RegimeParams& p, State start, double t);

/// Density of the full jump telegraph-diffusion variable T + J + D: given n switches the jump
/// part is the constant jump_shift(n), so each count contributes a shifted Gaussian mixture.
/// Requires sigma0^2 + sigma1^2 > 0.
double jump_telegraph_diffusion_pdf(const RegimeParams& p, State start, double x, double t,
                                    MixtureOptions opts = {}, int n_max = -1);

}  // namespace jtd
