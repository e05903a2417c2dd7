#include "jtd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "jtd/config.hpp"
#include "jtd/measure.hpp"
#include "jtd/monte_carlo.hpp"
#include "jtd/pricer.hpp"
#include "jtd/regime.hpp"
#include "jtd/telegraph.hpp"

namespace jtd::cli {

using nlohmann::json;

std::string format_double(double v)
{
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

// nlohmann prints the shortest round-trip form; outputs here use 17 significant digits.
void dump(const json& j, std::ostream& os, int indent, int depth)
{
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first) os << ",\n";
            first = false;
            os << pad << json(k).dump() << ": ";
            dump(v, os, indent, depth + 1);
        }
        os << '\n' << close << '}';
        return;
    }
    case json::value_t::array: {
        bool nested = false;
        for (const auto& v : j) nested = nested || v.is_structured();
        if (!nested) {
            os << '[';
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) os << ", ";
                dump(j[k], os, indent, depth + 1);
            }
            os << ']';
            return;
        }
        os << "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k) os << ",\n";
            os << pad;
            dump(j[k], os, indent, depth + 1);
        }
        os << '\n' << close << ']';
        return;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        os << (std::isfinite(v) ? format_double(v) : "null");
        return;
    }
    default:
        os << j.dump();
    }
}

void emit(const json& j, std::ostream& os)
{
    dump(j, os, 2, 0);
    os << '\n';
}

State parse_state(int s)
{
    if (s != 0 && s != 1) throw InvalidInput("start state must be 0 or 1");
    return s == 0 ? State::Zero : State::One;
}

json shift_json(const MeasureShift& s)
{
    return {{"c_star", {s.c_star[0], s.c_star[1]}},
            {"h_star", {s.h_star[0], s.h_star[1]}},
            {"sigma_star", {s.sigma_star[0], s.sigma_star[1]}},
            {"lambda_star", {s.lambda_star[0], s.lambda_star[1]}}};
}

json estimator_json(const EstimatorResult& e)
{
    return {{"mean", e.mean}, {"std_error", e.std_error}, {"n_paths", e.n_paths}, {"seed", e.seed}};
}

// Maps library exceptions onto exit codes.
int guarded(std::ostream& out, std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const ClassificationError& e) {
        emit({{"classification", to_string(e.kind())}, {"state", e.state()}, {"message", e.what()}}, out);
        err << "error: " << e.what() << '\n';
        return kClassification;
    } catch (const ToleranceFailure& e) {
        err << "error: " << e.what() << '\n';
        return kTolerance;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

void write_atoms(const std::string& path, const std::vector<Atom>& atoms)
{
    if (path.empty()) return;
    json arr = json::array();
    for (const Atom& a : atoms) arr.push_back({{"location", a.location}, {"weight", a.weight}});
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write atoms sidecar " + path);
    emit({{"atoms", arr}}, f);
}

std::vector<double> linspace(double lo, double hi, int points)
{
    if (points < 2) throw InvalidInput("--points must be at least 2");
    if (!(hi > lo)) throw InvalidInput("grid needs xmax > xmin");
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) v[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (points - 1);
    return v;
}

}  // namespace

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(out, err, [&] {
        const ModelConfig cfg = load_config(o.config);
        const ValidationReport rep = validate_model(cfg.market, {o.telegraph});
        json v = json::array();
        for (const auto& x : rep.violations) v.push_back({{"rule", x.rule}, {"message", x.message}});
        emit({{"valid", rep.ok()}, {"violations", v}}, out);
        for (const auto& x : rep.violations) err << "violation: " << x.message << " (" << x.rule << ")\n";
        return rep.ok() ? kOk : kValidation;
    });
}

int cmd_density(const DensityOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(out, err, [&] {
        const ModelConfig cfg = load_config(o.config);
        require_valid(validate_model(cfg.market));
        const RegimeParams p = cfg.market.regime(1);
        const State start = parse_state(o.start);
        if (!(o.t > 0.0)) throw InvalidInput("--t must be positive");
        if (o.n && *o.n < 0) throw InvalidInput("--n must be >= 0");

        DensityGrid grid;
        grid.start = start;
        grid.n = o.n.value_or(-1);
        const int n_max = default_truncation(p.lambda_max() * o.t);

        if (o.kind == "switch-count") {
            const SwitchCountDist d = switch_count_probs(p, start, o.t, o.n.value_or(-1), cfg.controls.quadrature_nodes);
            for (int n = 0; n <= d.n_max(); ++n) {
                grid.abscissae.push_back(n);
                grid.values.push_back(d.probs[static_cast<std::size_t>(n)]);
            }
            grid.n = -2;  // one row per n
        } else if (o.kind == "spending-time") {
            const SpendingTimeDensity law(p, start, o.t);
            grid.abscissae = linspace(o.xmin.value_or(0.0), o.xmax.value_or(o.t), o.points);
            for (double tau : grid.abscissae) {
                if (tau < 0.0 || tau > o.t) throw InvalidInput("spending-time grid must lie in [0, t]");
                if (o.n && *o.n == 0) throw InvalidInput("n = 0 is the atom; see the sidecar");
                grid.values.push_back(o.n ? spending_time_pdf_n(p, start, tau, o.t, *o.n) : law.density(tau));
            }
            if (!o.n) grid.atoms.push_back({law.atom_location(), law.atom_weight()});
        } else if (o.kind == "telegraph") {
            require_valid(validate_model(cfg.market, {true}));
            double lo = p.c[1] * o.t, hi = p.c[0] * o.t;
            const int top = o.n.value_or(n_max);
            for (int n = o.n.value_or(1); n <= top; ++n) {
                lo = std::min(lo, p.c[1] * o.t + jump_shift(p, start, n));
                hi = std::max(hi, p.c[0] * o.t + jump_shift(p, start, n));
            }
            grid.abscissae = linspace(o.xmin.value_or(lo), o.xmax.value_or(hi), o.points);
            for (double x : grid.abscissae) {
                if (o.n) {
                    if (*o.n == 0) throw InvalidInput("n = 0 is the atom; see the sidecar");
                    grid.values.push_back(jump_telegraph_pdf_n(p, start, x, o.t, *o.n));
                } else {
                    const DensityValue v = o.bessel ? jump_telegraph_pdf_bessel(p, start, x, o.t)
                                                    : jump_telegraph_pdf_series(p, start, x, o.t);
                    grid.values.push_back(v.ac);
                }
            }
            if (!o.n) grid.atoms.push_back({p.c_of(start) * o.t, std::exp(-p.lambda_of(start) * o.t)});
        } else if (o.kind == "jtd") {
            if (o.n) throw InvalidInput("--n is not supported for kind jtd");
            const double smax = std::max(std::fabs(p.sigma[0]), std::fabs(p.sigma[1]));
            double lo = std::min(p.c[0], p.c[1]) * o.t, hi = std::max(p.c[0], p.c[1]) * o.t;
            for (int n = 1; n <= n_max; ++n) {
                lo = std::min(lo, std::min(p.c[0], p.c[1]) * o.t + jump_shift(p, start, n));
                hi = std::max(hi, std::max(p.c[0], p.c[1]) * o.t + jump_shift(p, start, n));
            }
            lo -= 6.0 * smax * std::sqrt(o.t);
            hi += 6.0 * smax * std::sqrt(o.t);
            grid.abscissae = linspace(o.xmin.value_or(lo), o.xmax.value_or(hi), o.points);
            const MixtureOptions mix{cfg.controls.quadrature_nodes};
            const bool no_jumps = p.h[0] == 0.0 && p.h[1] == 0.0;
            for (double x : grid.abscissae)
                grid.values.push_back(no_jumps ? telegraph_diffusion_pdf(p, start, x, o.t, mix)
                                               : jump_telegraph_diffusion_pdf(p, start, x, o.t, mix));
            if (auto atom = telegraph_diffusion_atom(p, start, o.t)) grid.atoms.push_back(*atom);
        } else {
            throw InvalidInput("unknown density kind \"" + o.kind + "\" (switch-count|spending-time|telegraph|jtd)");
        }

        if (!o.gnuplot) out << "x,density,n_or_total,start_state\n";
        for (std::size_t k = 0; k < grid.abscissae.size(); ++k) {
            if (o.gnuplot) {
                out << format_double(grid.abscissae[k]) << ' ' << format_double(grid.values[k]) << '\n';
                continue;
            }
            std::string tag = grid.n == -2 ? std::to_string(static_cast<int>(grid.abscissae[k]))
                              : grid.n >= 0 ? std::to_string(grid.n)
                                            : "total";
            out << format_double(grid.abscissae[k]) << ',' << format_double(grid.values[k]) << ',' << tag << ','
                << index(start) << '\n';
        }
        write_atoms(o.atoms_path, grid.atoms);
        return kOk;
    });
}

int cmd_measure(const MeasureOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(out, err, [&] {
        const ModelConfig cfg = load_config(o.config);
        require_valid(validate_model(cfg.market));
        if (o.mode == "family") {
            if (!o.theta0 || !o.theta1) throw InvalidInput("family mode needs --theta0 and --theta1");
            const MeasureShift s = single_asset_measure_family(cfg.market, *o.theta0, *o.theta1);
            json j = shift_json(s);
            j["classification"] = to_string(MarketClass::Family);
            j["theta"] = {*o.theta0, *o.theta1};
            const auto res = discounted_asset_residuals(cfg.market, s, 1);
            j["residuals"] = {res[0], res[1]};
            emit(j, out);
            return kOk;
        }
        if (o.mode != "complete") throw InvalidInput("unknown measure mode \"" + o.mode + "\" (complete|family)");
        const CompletionResult c = complete_two_asset_measure(cfg.market);
        json j = shift_json(c.shift);
        j["classification"] = to_string(MarketClass::Unique);
        j["delta_h"] = {c.inputs.delta_h[0], c.inputs.delta_h[1]};
        j["delta_rc"] = {c.inputs.delta_rc[0], c.inputs.delta_rc[1]};
        j["max_residual"] = c.max_residual;
        if (c.alpha_beta) j["alpha_beta"] = shift_json(*c.alpha_beta);
        emit(j, out);
        return kOk;
    });
}

int cmd_price(const PriceOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(out, err, [&] {
        const ModelConfig cfg = load_config(o.config);
        CallPricingRequest req;
        req.market = cfg.market;
        if (cfg.measure) req.measure = resolve_measure(cfg.market, *cfg.measure);
        req.strike = o.strike;
        req.maturity = o.maturity;
        req.start = parse_state(o.start);
        req.controls.quadrature_nodes = cfg.controls.quadrature_nodes;
        req.controls.tolerance = cfg.controls.tolerance;

        json j;
        j["strike"] = o.strike;
        j["maturity"] = o.maturity;
        j["start_state"] = o.start;
        MarketClass cls = MarketClass::Unique;
        const MeasureShift ms = resolve_pricing_measure(req, &cls);
        j["measure"] = shift_json(ms);
        j["classification"] = to_string(cls);

        std::optional<PricingBreakdown> analytic;
        if (o.analytic) {
            analytic = price_call(req);
            j["price"] = analytic->price;
            j["per_n_contributions"] = analytic->per_n_contributions;
            j["truncation_bound"] = analytic->truncation_bound;
            j["quadrature_nodes"] = analytic->quadrature_nodes_used;
            j["n_max"] = analytic->n_max;
        }
        if (o.monte_carlo) {
            SimulationControls sc;
            sc.chunk_size = cfg.controls.chunk_size;
            const EstimatorResult e =
                estimate_discounted_payoff(cfg.market, ms, CallPayoff{o.strike, 1}, req.start, o.maturity,
                                           o.n_paths.value_or(cfg.controls.n_paths), o.seed.value_or(cfg.controls.seed), sc);
            j["monte_carlo"] = estimator_json(e);
            if (analytic && e.std_error > 0.0) j["z_score"] = (e.mean - analytic->price) / e.std_error;
        }
        emit(j, out);
        return kOk;
    });
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err)
{
    return guarded(out, err, [&] {
        const ModelConfig cfg = load_config(o.config);
        require_valid(validate_model(cfg.market));
        const State start = parse_state(o.start);
        std::optional<MeasureShift> measure;
        if (o.under_measure) {
            if (cfg.measure) measure = resolve_measure(cfg.market, *cfg.measure);
            else measure = complete_two_asset_measure(cfg.market).shift;
        }
        const std::size_t n_paths = o.n_paths.value_or(cfg.controls.n_paths);
        const std::uint64_t seed = o.seed.value_or(cfg.controls.seed);
        SimulationControls sc;
        sc.chunk_size = cfg.controls.chunk_size;

        const std::size_t n_assets = cfg.market.asset2 ? 2 : 1;
        constexpr std::size_t kHist = 10;  // P{N = 0..9}
        const std::size_t n_out = 2 + n_assets + kHist;
        const auto est = estimate(
            cfg.market, measure, start, o.horizon, n_paths, seed, n_out,
            [&](const PathRecord& p, std::span<double> v) {
                v[0] = static_cast<double>(p.switches());
                v[1] = p.bond_terminal;
                for (std::size_t m = 0; m < n_assets; ++m)
                    v[2 + m] = std::exp(p.log_stock_terminal[m]) / p.bond_terminal;
                for (std::size_t n = 0; n < kHist; ++n) v[2 + n_assets + n] = p.switches() == n ? 1.0 : 0.0;
            },
            sc);

        json j;
        j["n_paths"] = n_paths;
        j["seed"] = seed;
        j["horizon"] = o.horizon;
        j["start_state"] = o.start;
        j["measure"] = measure ? shift_json(*measure) : json(nullptr);
        j["switch_count_mean"] = estimator_json(est[0]);
        j["bond_terminal_mean"] = estimator_json(est[1]);
        json disc = json::array();
        for (std::size_t m = 0; m < n_assets; ++m) disc.push_back(estimator_json(est[2 + m]));
        j["discounted_asset_mean"] = disc;
        json hist = json::array();
        for (std::size_t n = 0; n < kHist; ++n) hist.push_back(est[2 + n_assets + n].mean);
        j["switch_count_histogram"] = hist;

        if (!o.dump_path.empty()) {
            std::ofstream f(o.dump_path);
            if (!f) throw ConfigError("cannot write path dump " + o.dump_path);
            const auto paths = simulate_paths(cfg.market, measure, start, o.horizon, n_paths, seed, sc);
            write_paths_csv(f, paths);
        }
        emit(j, out);
        return kOk;
    });
}

}  // namespace jtd::cli
