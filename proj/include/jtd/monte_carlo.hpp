#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "jtd/measure.hpp"
#include "jtd/model.hpp"
#include "jtd/path.hpp"
#include "jtd/rng.hpp"

namespace jtd {

struct EstimatorResult {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(n_paths)
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

struct SimulationControls {
    std::size_t chunk_size = 4096;
    unsigned threads = 0;  // 0: JTD_THREADS if set, else hardware concurrency
};

/// Thread count from JTD_THREADS (if a positive integer) capped by the hardware concurrency.
unsigned default_thread_count();

/// Exact event-driven simulator: exponential holding times, one Gaussian per segment,
/// no time discretization. Under a measure the per-asset dynamics come from girsanov_transform.
class PathSimulator {
public:
    PathSimulator(const MarketModel& market, const std::optional<MeasureShift>& measure, State start, double horizon);

    /// Overwrites `out` (its buffers are reused).
    void simulate(Rng& rng, PathRecord& out) const;
    PathRecord simulate(Rng& rng) const;

    const std::vector<RegimeParams>& dynamics() const noexcept { return assets_; }

private:
    std::vector<RegimeParams> assets_;
    std::vector<double> s0_;
    std::array<double, 2> lambda_{};
    std::array<double, 2> r_{};
    State start_;
    double horizon_;
};

/// Paths of chunk k use Rng(seed, k); the result is identical for any thread count.
std::vector<PathRecord> simulate_paths(const MarketModel& market, const std::optional<MeasureShift>& measure,
                                       State start, double horizon, std::size_t n_paths, std::uint64_t seed,
                                       SimulationControls controls = {});

/// Writes one value per output for each path.
using PathFunctional = std::function<void(const PathRecord&, std::span<double>)>;

/// Means and standard errors of several path functionals from the same paths. Chunk statistics
/// are merged by a fixed pairwise tree over chunk indices, so results are reproducible.
std::vector<EstimatorResult> estimate(const MarketModel& market, const std::optional<MeasureShift>& measure,
                                      State start, double horizon, std::size_t n_paths, std::uint64_t seed,
                                      std::size_t n_outputs, const PathFunctional& functional,
                                      SimulationControls controls = {});

struct CallPayoff {
    double strike = 0.0;
    int asset = 1;
};
struct IdentityPayoff {
    int asset = 1;
};
using Payoff = std::variant<CallPayoff, IdentityPayoff>;

/// Path value of B(T)^{-1} payoff(S^(m)(T)).
double discounted_payoff(const PathRecord& path, const Payoff& payoff);

EstimatorResult estimate_discounted_payoff(const MarketModel& market, const std::optional<MeasureShift>& measure,
                                           const Payoff& payoff, State start, double horizon,
                                           std::size_t n_paths, std::uint64_t seed, SimulationControls controls = {});

/// Components of X = T + J + D of `p` along a path (using its switch times and Gaussians).
struct ProcessComponents {
    double telegraph = 0.0;  // int c
    double jump = 0.0;       // sum of h at switches
    double diffusion = 0.0;  // int sigma dw
    double log_kappa = 0.0;  // sum of log(1 + h) at switches
};
ProcessComponents jtd_components(const RegimeParams& p, const PathRecord& path);

/// Single-asset market with the regime parameters of `p` (asset price s0).
MarketModel single_asset_market(const RegimeParams& p, double s0 = 1.0);

/// One CSV row per segment: path,segment,t_begin,t_end,regime,gaussian.
void write_paths_csv(std::ostream& os, std::span<const PathRecord> paths);

}  // namespace jtd
