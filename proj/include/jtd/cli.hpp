#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace jtd::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kValidation = 2,      // missing file, malformed JSON, schema or parameter violation
    kClassification = 3,  // arbitrage / incompleteness
    kTolerance = 4,       // numerical tolerance could not be met
};

struct ValidateOptions {
    std::string config;
    bool telegraph = false;  // also require c0 > c1 (telegraph density formulas)
};

struct DensityOptions {
    std::string config;
    std::string kind;  // switch-count | spending-time | telegraph | jtd
    double t = 1.0;
    int start = 0;
    std::optional<int> n;  // per-count curve; aggregated when absent
    int points = 201;
    std::optional<double> xmin, xmax;
    bool bessel = false;   // telegraph: use the h0 + h1 = 0 closed form
    bool gnuplot = false;  // two whitespace-separated columns, no header
    std::string atoms_path;  // sidecar JSON with the point masses
};

struct MeasureOptions {
    std::string config;
    std::string mode = "complete";  // complete | family
    std::optional<double> theta0, theta1;
};

struct PriceOptions {
    std::string config;
    double strike = 0.0;
    double maturity = 0.0;
    int start = 0;
    bool analytic = true;
    bool monte_carlo = false;
    std::optional<std::size_t> n_paths;
    std::optional<std::uint64_t> seed;
};

struct SimulateOptions {
    std::string config;
    double horizon = 1.0;
    int start = 0;
    std::optional<std::size_t> n_paths;
    std::optional<std::uint64_t> seed;
    bool under_measure = false;
    std::string dump_path;
};

// Each command writes its machine-readable result to `out`, diagnostics to `err`,
// and returns the process exit code.
int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err);
int cmd_density(const DensityOptions& o, std::ostream& out, std::ostream& err);
int cmd_measure(const MeasureOptions& o, std::ostream& out, std::ostream& err);
int cmd_price(const PriceOptions& o, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace jtd::cli
