#include "jtd/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <string>
#include <thread>

#include "jtd/numerics.hpp"

namespace jtd {

double PathRecord::time_in_state0() const noexcept
{
    double total = 0.0;
    for (std::size_t k = 0; k < segments(); ++k)
        if (regimes[k] == State::Zero) total += segment_length(k);
    return total;
}

unsigned default_thread_count()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("JTD_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return std::min<unsigned>(static_cast<unsigned>(v), hw);
    }
    return hw;
}

PathSimulator::PathSimulator(const MarketModel& market, const std::optional<MeasureShift>& measure, State start,
                             double horizon)
    : lambda_(market.lambda), r_(market.r), start_(start), horizon_(horizon)
{
    require_valid(validate_model(market));
    if (!(horizon >= 0.0)) throw InvalidInput("horizon must be >= 0");
    const int n_assets = market.asset2 ? 2 : 1;
    for (int m = 1; m <= n_assets; ++m) {
        RegimeParams p = market.regime(m);
        if (measure) p = girsanov_transform(p, *measure).under_measure;
        assets_.push_back(p);
        s0_.push_back(m == 1 ? market.asset1.s0 : market.asset2->s0);
    }
    lambda_ = assets_.front().lambda;
}

void PathSimulator::simulate(Rng& rng, PathRecord& out) const
{
    out.horizon = horizon_;
    out.start = start_;
    out.switch_times.clear();
    out.regimes.clear();
    out.gaussians.clear();
    out.log_stock_terminal.assign(assets_.size(), 0.0);
    out.jump_product.assign(assets_.size(), 1.0);
    for (std::size_t m = 0; m < assets_.size(); ++m) out.log_stock_terminal[m] = std::log(s0_[m]);

    double log_bond = 0.0;
    double now = 0.0;
    State s = start_;
    for (;;) {
        const int si = index(s);
        const double hold = rng.exponential(lambda_[si]);
        const bool last = now + hold >= horizon_;
        const double dt = last ? horizon_ - now : hold;
        const double g = rng.normal();
        out.regimes.push_back(s);
        out.gaussians.push_back(g);
        log_bond += r_[si] * dt;
        const double sq = std::sqrt(dt);
        for (std::size_t m = 0; m < assets_.size(); ++m) {
            const RegimeParams& p = assets_[m];
            const double vol = p.sigma[si];
            out.log_stock_terminal[m] += p.c[si] * dt + vol * sq * g - 0.5 * vol * vol * dt;
        }
        if (last) break;
        now += hold;
        out.switch_times.push_back(now);
        for (std::size_t m = 0; m < assets_.size(); ++m) {
            const double h = assets_[m].h[si];
            out.log_stock_terminal[m] += std::log1p(h);
            out.jump_product[m] *= 1.0 + h;
        }
        s = other(s);
    }
    out.bond_terminal = std::exp(log_bond);
}

PathRecord PathSimulator::simulate(Rng& rng) const
{
    PathRecord p;
    simulate(rng, p);
    return p;
}

namespace {

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x)
    {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }

    static Moments merge(const Moments& a, const Moments& b)
    {
        if (a.n == 0.0) return b;
        if (b.n == 0.0) return a;
        Moments out;
        out.n = a.n + b.n;
        const double d = b.mean - a.mean;
        out.mean = a.mean + d * (b.n / out.n);
        out.m2 = a.m2 + b.m2 + d * d * (a.n * b.n / out.n);
        return out;
    }
};

Moments merge_range(const std::vector<Moments>& v, std::size_t lo, std::size_t hi)
{
    if (hi - lo == 1) return v[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return Moments::merge(merge_range(v, lo, mid), merge_range(v, mid, hi));
}

std::size_t chunk_count(std::size_t n_paths, std::size_t chunk)
{
    return (n_paths + chunk - 1) / chunk;
}

// Runs body(chunk_index) for every chunk on a pool of threads.
template <class Body>
void for_each_chunk(std::size_t n_chunks, unsigned threads, Body&& body)
{
    if (threads == 0) threads = default_thread_count();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n_chunks, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks || failed.load()) return;
            try {
                body(c);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<PathRecord> simulate_paths(const MarketModel& market, const std::optional<MeasureShift>& measure,
                                       State start, double horizon, std::size_t n_paths, std::uint64_t seed,
                                       SimulationControls controls)
{
    if (controls.chunk_size == 0) throw InvalidInput("chunk_size must be positive");
    const PathSimulator sim(market, measure, start, horizon);
    std::vector<PathRecord> out(n_paths);
    const std::size_t n_chunks = chunk_count(n_paths, controls.chunk_size);
    for_each_chunk(n_chunks, controls.threads, [&](std::size_t c) {
        Rng rng(seed, c);
        const std::size_t lo = c * controls.chunk_size;
        const std::size_t hi = std::min(n_paths, lo + controls.chunk_size);
        for (std::size_t k = lo; k < hi; ++k) sim.simulate(rng, out[k]);
    });
    return out;
}

std::vector<EstimatorResult> estimate(const MarketModel& market, const std::optional<MeasureShift>& measure,
                                      State start, double horizon, std::size_t n_paths, std::uint64_t seed,
                                      std::size_t n_outputs, const PathFunctional& functional,
                                      SimulationControls controls)
{
    if (n_paths < 2) throw InvalidInput("estimation needs at least two paths");
    if (controls.chunk_size == 0) throw InvalidInput("chunk_size must be positive");
    const PathSimulator sim(market, measure, start, horizon);
    const std::size_t n_chunks = chunk_count(n_paths, controls.chunk_size);
    // per_chunk[c * n_outputs + j]
    std::vector<Moments> per_chunk(n_chunks * n_outputs);
    for_each_chunk(n_chunks, controls.threads, [&](std::size_t c) {
        Rng rng(seed, c);
        PathRecord path;
        std::vector<double> values(n_outputs);
        const std::size_t lo = c * controls.chunk_size;
        const std::size_t hi = std::min(n_paths, lo + controls.chunk_size);
        for (std::size_t k = lo; k < hi; ++k) {
            sim.simulate(rng, path);
            functional(path, values);
            for (std::size_t j = 0; j < n_outputs; ++j) per_chunk[c * n_outputs + j].push(values[j]);
        }
    });

    std::vector<EstimatorResult> results(n_outputs);
    std::vector<Moments> column(n_chunks);
    for (std::size_t j = 0; j < n_outputs; ++j) {
        for (std::size_t c = 0; c < n_chunks; ++c) column[c] = per_chunk[c * n_outputs + j];
        const Moments m = merge_range(column, 0, n_chunks);
        const double var = m.m2 / (m.n - 1.0);
        results[j] = {m.mean, std::sqrt(var / m.n), n_paths, seed};
    }
    return results;
}

double discounted_payoff(const PathRecord& path, const Payoff& payoff)
{
    const auto stock = [&](int asset) {
        if (asset < 1 || static_cast<std::size_t>(asset) > path.log_stock_terminal.size())
            throw InvalidInput("payoff refers to a missing asset");
        return std::exp(path.log_stock_terminal[static_cast<std::size_t>(asset - 1)]);
    };
    return std::visit(
        [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, CallPayoff>) {
                return std::max(stock(p.asset) - p.strike, 0.0) / path.bond_terminal;
            } else {
                return stock(p.asset) / path.bond_terminal;
            }
        },
        payoff);
}

EstimatorResult estimate_discounted_payoff(const MarketModel& market, const std::optional<MeasureShift>& measure,
                                           const Payoff& payoff, State start, double horizon,
                                           std::size_t n_paths, std::uint64_t seed, SimulationControls controls)
{
    return estimate(
               market, measure, start, horizon, n_paths, seed, 1,
               [&](const PathRecord& path, std::span<double> out) { out[0] = discounted_payoff(path, payoff); },
               controls)
        .front();
}

ProcessComponents jtd_components(const RegimeParams& p, const PathRecord& path)
{
    ProcessComponents out;
    for (std::size_t k = 0; k < path.segments(); ++k) {
        const int s = index(path.regimes[k]);
        const double dt = path.segment_length(k);
        out.telegraph += p.c[s] * dt;
        out.diffusion += p.sigma[s] * std::sqrt(dt) * path.gaussians[k];
        if (k + 1 < path.segments()) {
            out.jump += p.h[s];
            out.log_kappa += std::log1p(p.h[s]);
        }
    }
    return out;
}

MarketModel single_asset_market(const RegimeParams& p, double s0)
{
    MarketModel m;
    m.asset1 = {s0, p.c, p.sigma, p.h};
    m.lambda = p.lambda;
    m.r = p.r;
    return m;
}

void write_paths_csv(std::ostream& os, std::span<const PathRecord> paths)
{
    os << "path,segment,t_begin,t_end,regime,gaussian\n";
    char buf[160];
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const PathRecord& rec = paths[p];
        for (std::size_t k = 0; k < rec.segments(); ++k) {
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%d,%.17g\n", p, k, rec.segment_begin(k),
                          rec.segment_end(k), index(rec.regimes[k]), rec.gaussians[k]);
            os << buf;
        }
    }
}

}  // namespace jtd
