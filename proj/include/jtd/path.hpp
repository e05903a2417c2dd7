#pragma once

#include <cstddef>
#include <vector>

#include "jtd/model.hpp"

namespace jtd {

/// One simulated trajectory on [0, horizon].
/// Segment k runs from switch_times[k-1] (or 0) to switch_times[k] (or horizon) in regimes[k];
/// gaussians[k] is the standard normal driving the Brownian increment over that segment.
struct PathRecord {
    double horizon = 0.0;
    State start = State::Zero;
    std::vector<double> switch_times;
    std::vector<State> regimes;
    std::vector<double> gaussians;
    std::vector<double> log_stock_terminal;  // log S^(m)(T), one entry per asset
    std::vector<double> jump_product;        // prod (1 + h) over switches, one entry per asset
    double bond_terminal = 1.0;              // B(T) = exp(int r)

    std::size_t switches() const noexcept { return switch_times.size(); }
    std::size_t segments() const noexcept { return regimes.size(); }
    double segment_begin(std::size_t k) const noexcept { return k == 0 ? 0.0 : switch_times[k - 1]; }
    double segment_end(std::size_t k) const noexcept { return k < switch_times.size() ? switch_times[k] : horizon; }
    double segment_length(std::size_t k) const noexcept { return segment_end(k) - segment_begin(k); }

    /// Time spent in state 0 over [0, horizon].
    double time_in_state0() const noexcept;
};

}  // namespace jtd
