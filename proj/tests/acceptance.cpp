// Acceptance suite: runs every release criterion at its pinned tolerance and
// prints one machine-readable pass/fail line per criterion. Exits nonzero if
// any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <scale_smooth/scale_smooth.hpp>

using namespace scale_smooth;
namespace fs = std::filesystem;

namespace {

int failures = 0;

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(bool pass, int id, const std::string& name, const std::string& details,
            double seconds, double limit_seconds = 0.0) {
    if (limit_seconds > 0.0 && seconds >= limit_seconds) pass = false;
    if (!pass) ++failures;
    std::printf("%s  criterion %2d  %-22s  %s  [%.1fs%s]\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), details.c_str(), seconds,
                limit_seconds > 0.0 ? (" / limit " + std::to_string(static_cast<int>(limit_seconds)) + "s").c_str()
                                    : "");
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3g", v);
    return buffer;
}

int run_cli(const std::string& args) {
    const std::string command = std::string(CLI_BINARY) + " " + args + " > /dev/null 2> /dev/null";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<ValueRow> read_rows(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing output file " + path.string());
    return parse_value_csv(in);
}

void criterion_1_normalization() {
    Stopwatch watch;
    double worst = 0.0;
    for (double r : {-1.0, -0.25, 0.25, 1.0})
        for (double t : {0.01, 0.1, 1.0, 10.0})
            for (double x : {0.0, -0.5, -2.0}) {
                const KernelParams p{r, t};
                const double mass = kernel_mass(p, x, kernel_support_lower(p, x), 0.0);
                worst = std::max(worst, std::abs(mass - 1.0));
            }
    report(worst <= 1e-6, 1, "normalization", "max|mass-1|=" + fmt(worst) + " tol=1e-06",
           watch.seconds(), 10.0);
}

void criterion_2_semigroup() {
    Stopwatch watch;
    double worst = 0.0;
    for (double r : {-0.5, 0.0, 0.5})
        for (double s : {0.25, 0.5, 1.0})
            for (double t : {0.25, 0.5, 1.0})
                for (double x : {0.0, -0.5, -1.5})
                    for (double y : {0.0, -0.5, -1.5}) {
                        const double lhs = chapman_lhs({r, s}, {r, t}, x, y);
                        const double rhs = kernel_density({r, s + t}, x, y);
                        worst = std::max(worst, std::abs(lhs - rhs));
                    }
    report(worst <= 1e-5, 2, "semigroup", "max|composition-closed form|=" + fmt(worst) + " tol=1e-05",
           watch.seconds(), 60.0);
}

void criterion_3_neumann() {
    Stopwatch watch;
    const double h = 1e-4;
    double worst = 0.0;
    for (double r : {-0.5, 0.0, 0.5})
        for (double t : {0.5, 1.0})
            for (double y : {-0.5, -1.0, -2.0}) {
                const KernelParams p{r, t};
                const double d = (3.0 * kernel_density(p, 0.0, y) - 4.0 * kernel_density(p, -h, y) +
                                  kernel_density(p, -2.0 * h, y)) /
                                 (2.0 * h);
                worst = std::max(worst, std::abs(d) / kernel_density(p, 0.0, y));
            }
    report(worst <= 1e-3, 3, "neumann-boundary", "max relative dp/dx at 0=" + fmt(worst) + " tol=0.001",
           watch.seconds());
}

void criterion_4_locality() {
    Stopwatch watch;
    const double x = -1.0;
    const double eps = 0.5;
    double worst = 0.0;
    for (double t : {1e-3, 1e-4})
        for (double r : {-0.5, 0.0, 0.5}) {
            const KernelParams p{r, t};
            std::vector<double> splits;
            detail::append_feature_edges(splits, x + r * t, std::sqrt(t));
            const double m1 =
                integrate_split([&](double y) { return (y - x) * kernel_density(p, x, y); },
                                x - eps, x + eps, splits, {1e-13, 60});
            const double m2 = integrate_split(
                [&](double y) { return (y - x) * (y - x) * kernel_density(p, x, y); }, x - eps,
                x + eps, splits, {1e-13, 60});
            const double m1_err = r == 0.0 ? std::abs(m1) / t : std::abs(m1 - r * t) / std::abs(r * t);
            worst = std::max({worst, m1_err, std::abs(m2 - t) / t});
        }
    report(worst <= 0.05, 4, "locality-moments",
           "max relative moment error=" + fmt(worst) + " tol=0.05", watch.seconds());
}

void criterion_5_small_scale() {
    Stopwatch watch;
    double worst_coarse = 0.0;  // t = 1e-2, tol 1%
    double worst_fine = 0.0;    // t = 1e-3, tol 1e-4
    for (double r : {-0.5, 0.0, 0.5})
        for (double x : {-0.5, -1.0, -2.0})
            for (double y : {-0.5, -1.0, -2.0}) {
                const KernelParams coarse{r, 1e-2};
                const KernelParams fine{r, 1e-3};
                worst_coarse = std::max(
                    worst_coarse,
                    std::abs(kernel_density(coarse, x, y) / kernel_small_t(coarse, x, y) - 1.0));
                worst_fine = std::max(
                    worst_fine,
                    std::abs(kernel_density(fine, x, y) / kernel_small_t(fine, x, y) - 1.0));
            }
    report(worst_coarse <= 1e-2 && worst_fine <= 1e-4, 5, "small-scale-limit",
           "|ratio-1|=" + fmt(worst_coarse) + " (tol 0.01 at t=1e-2), " + fmt(worst_fine) +
               " (tol 1e-4 at t=1e-3)",
           watch.seconds());
}

void criterion_6_large_scale() {
    Stopwatch watch;
    double worst_pos = 0.0;
    double worst_neg = 0.0;
    for (int i = 0; i <= 600; ++i) {
        const double y = -3.0 * (1.0 - i / 600.0);
        worst_pos = std::max(worst_pos, std::abs(kernel_density({0.5, 200.0}, -1.0, y) -
                                                 std::exp(y)));
        worst_neg = std::max(worst_neg, kernel_density({-0.5, 200.0}, -1.0, y));
    }
    report(worst_pos <= 1e-3 && worst_neg <= 1e-3, 6, "large-scale-limit",
           "sup|p-e^{2ry}|=" + fmt(worst_pos) + ", sup p (r<0)=" + fmt(worst_neg) + " tol=0.001",
           watch.seconds());
}

void criterion_7_pde() {
    Stopwatch watch;
    const StepFunction f({-6.0, -1.0, 0.0}, {1.0, 3.0});
    PdeConfig cfg;
    cfg.drift = 0.5;
    cfg.dt = 1e-3;
    cfg.grid = Grid{12.0, 2401};
    const double step_error = compare_with_kernel(f, {0.5, 1.0}, cfg).max_abs_error;

    const auto bump = [](double x) { return std::exp(-0.5 * (x + 3.0) * (x + 3.0)); };
    PdeConfig coarse;
    coarse.drift = 0.0;
    coarse.dt = 2e-3;
    coarse.grid = Grid{12.0, 1201};
    PdeConfig fine = coarse;
    fine.dt = 1e-3;
    fine.grid = Grid{12.0, 2401};
    const double e_coarse = compare_function_with_kernel(bump, {0.0, 1.0}, coarse).max_abs_error;
    const double e_fine = compare_function_with_kernel(bump, {0.0, 1.0}, fine).max_abs_error;
    const double ratio = e_fine / e_coarse;

    report(step_error <= 5e-3 && ratio <= 0.35, 7, "pde-vs-kernel",
           "step sup error=" + fmt(step_error) + " (tol 0.005), refinement ratio=" + fmt(ratio) +
               " (tol 0.35)",
           watch.seconds(), 120.0);
}

void criterion_8_monte_carlo() {
    Stopwatch watch;
    double worst = 0.0;
    for (double r : {-0.5, 0.0, 0.5}) {
        PathConfig cfg;
        cfg.start = -1.0;
        cfg.drift = r;
        cfg.horizon = 1.0;
        cfg.dt = 1e-3;
        cfg.n_paths = 100000;
        cfg.seed = 2024;
        const auto dist = simulate_endpoints(cfg);
        worst = std::max(worst, ks_statistic(dist, {r, 1.0}, cfg.start));
    }
    report(worst <= 0.03, 8, "mc-vs-kernel", "max KS=" + fmt(worst) + " tol=0.03", watch.seconds(),
           120.0);
}

void criterion_9_energy() {
    Stopwatch watch;
    double worst_uptick = 0.0;
    const auto run = [&](const FieldOnGrid& f0, const PdeConfig& cfg) {
        const auto report_ = decay_report(solve(f0, cfg), cfg.drift);
        for (std::size_t k = 0; k + 1 < report_.values.size(); ++k) {
            const double rel =
                (report_.values[k + 1] - report_.values[k]) / (1.0 + report_.values[k]);
            worst_uptick = std::max(worst_uptick, rel);
        }
    };
    PdeConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.5;
    cfg.grid = Grid{12.0, 1201};
    cfg.drift = 0.5;
    run(sample_on_grid(cfg.grid, [](double) { return 5.0; }), cfg);
    run(sample_on_grid(cfg.grid, StepFunction({-6.0, -1.0, 0.0}, {1.0, 3.0})), cfg);
    cfg.drift = 0.0;
    run(sample_on_grid(cfg.grid, [](double x) { return std::exp(-0.5 * (x + 3.0) * (x + 3.0)); }),
        cfg);

    detail::UniformSource rng(5);
    const Grid g{6.0, 301};
    FieldOnGrid u{g, {}};
    for (int i = 0; i < g.n; ++i) u.values.push_back(rng.range(-1.0, 1.0));
    FieldOnGrid scaled{g, u.values};
    const double alpha = 2.5;
    for (double& v : scaled.values) v *= alpha;
    const double scaling_err =
        std::abs(energy(scaled, 0.5) - alpha * alpha * energy(u, 0.5)) /
        (alpha * alpha * energy(u, 0.5));

    report(worst_uptick <= 1e-10 && scaling_err <= 1e-12, 9, "energy-decay",
           "max relative uptick=" + fmt(worst_uptick) + " (tol 1e-10), scaling error=" +
               fmt(scaling_err) + " (tol 1e-12)",
           watch.seconds());
}

void criterion_10_axioms() {
    Stopwatch watch;
    detail::UniformSource rng(99);
    double worst_bounds = 0.0;
    double worst_constant = 0.0;
    double worst_linearity = 0.0;
    const int cases = 1000;
    for (int c = 0; c < cases; ++c) {
        const StepFunction f = detail::random_step_function(rng);
        const KernelParams p{rng.range(-1.0, 1.0),
                             std::exp(rng.range(std::log(0.02), std::log(20.0)))};
        const double x = rng.range(-3.0, 0.0);
        const double scale_f = std::max({1.0, std::abs(f.min_value()), f.max_value()});
        const double u = smooth_at(f, p, x);
        worst_bounds =
            std::max({worst_bounds, (f.min_value() - u) / scale_f, (u - f.max_value()) / scale_f});
        if (c % 10 == 0) {
            const double constant = rng.range(-5.0, 10.0);
            const double uc = smooth_at(StepFunction({-1.0, 0.0}, {constant}), p, x);
            worst_constant = std::max(worst_constant,
                                      std::abs(uc - constant) / std::max(1.0, std::abs(constant)));
        }
        if (c % 5 == 0) {
            const StepFunction g = detail::random_step_function(rng);
            const double alpha = rng.range(-2.0, 2.0);
            const double beta = rng.range(-2.0, 2.0);
            const double direct = smooth_at(detail::combine(f, g, alpha, beta), p, x);
            const double composed = alpha * smooth_at(f, p, x) + beta * smooth_at(g, p, x);
            const double magnitude = std::max({1.0, std::abs(f.min_value()), f.max_value(),
                                               std::abs(g.min_value()), g.max_value()}) *
                                     (std::abs(alpha) + std::abs(beta));
            worst_linearity = std::max(worst_linearity,
                                       std::abs(direct - composed) / std::max(1.0, magnitude));
        }
    }
    report(worst_constant <= 1e-9 && worst_linearity <= 1e-9 && worst_bounds <= 1e-9, 10,
           "axiom-sanity",
           "constant=" + fmt(worst_constant) + ", linearity=" + fmt(worst_linearity) +
               ", bounds overshoot=" + fmt(worst_bounds) + " (tol 1e-9, " + std::to_string(cases) +
               " cases)",
           watch.seconds());
}

void criterion_11_figures() {
    Stopwatch watch;
    const fs::path work = "acceptance_work";
    fs::remove_all(work);
    fs::create_directories(work);
    bool pass = true;
    std::string details;

    // Weighting curves at the extreme scales: the small one must sit on the
    // (boundary-folded) Gaussian asymptote within the small-scale tolerance,
    // the large one on the exponential profile within the large-scale one.
    if (run_cli("weights --r 0.5 --scales 0.0001,200 --output " + (work / "w").string()) != 0) {
        pass = false;
        details = "weights command failed";
    } else {
        const auto weights = read_rows(work / "w.weights.csv");
        const auto asymptote = read_rows(work / "w.asymptote.csv");
        std::map<double, std::vector<std::pair<double, double>>> by_scale;  // y -> (p, a)
        double max_asymptote = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            by_scale[weights[i].scale].emplace_back(weights[i].value, asymptote[i].value);
            if (weights[i].scale == 0.0001) max_asymptote = std::max(max_asymptote, asymptote[i].value);
        }
        double worst_small = 0.0;
        for (const auto& [p, a] : by_scale[0.0001]) {
            if (a >= 1e-3 * max_asymptote) {
                worst_small = std::max(worst_small, std::abs(p / a - 1.0));
            }
        }
        double worst_large = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i].scale == 200.0 && weights[i].x >= -3.0) {
                worst_large = std::max(worst_large,
                                       std::abs(weights[i].value - std::exp(weights[i].x)));
            }
        }
        pass = pass && worst_small <= 1e-2 && worst_large <= 1e-3;
        details = "weights: |p/asymptote-1|=" + fmt(worst_small) +
                  " (tol 0.01), sup|p-e^{2ry}|=" + fmt(worst_large) + " (tol 0.001)";
    }

    // Bundled data set: smoothed profiles stay in the income range.
    const std::string dataset = std::string(DATA_DIR) + "/example_income.csv";
    if (run_cli("smooth --input " + dataset + " --r 0.5 --scales 0.1,1,10 --output " +
                (work / "s").string()) != 0) {
        pass = false;
        details += "; smooth command failed";
    } else {
        std::ifstream in(dataset);
        auto samples = parse_income_csv(in);
        const double shift = samples.back().time;
        for (auto& s : samples) s.time -= shift;
        const StepFunction f = step_from_samples(IncomeSeries{samples});
        double overshoot = 0.0;
        for (const auto& row : read_rows(work / "s.profiles.csv")) {
            overshoot = std::max({overshoot, f.min_value() - row.value, row.value - f.max_value()});
        }
        const double tol = 1e-9 * std::max(1.0, std::abs(f.max_value()));
        pass = pass && overshoot <= tol;
        details += "; dataset bounds overshoot=" + fmt(overshoot);
    }

    // Constant data through the CLI is preserved exactly (within quadrature).
    {
        const fs::path constant_csv = work / "constant.csv";
        std::ofstream out(constant_csv);
        out << "time,income\n1,4.5\n2,4.5\n3,4.5\n";
        out.close();
        if (run_cli("smooth --input " + constant_csv.string() + " --r 0.5 --scales 0.1,1,10 "
                    "--output " + (work / "c").string()) != 0) {
            pass = false;
            details += "; constant smooth failed";
        } else {
            double worst = 0.0;
            for (const auto& row : read_rows(work / "c.profiles.csv")) {
                worst = std::max(worst, std::abs(row.value - 4.5) / 4.5);
            }
            pass = pass && worst <= 1e-9;
            details += "; constant deviation=" + fmt(worst);
        }
    }

    report(pass, 11, "figure-reproduction", details, watch.seconds());
}

}  // namespace

int main() {
    criterion_1_normalization();
    criterion_2_semigroup();
    criterion_3_neumann();
    criterion_4_locality();
    criterion_5_small_scale();
    criterion_6_large_scale();
    criterion_7_pde();
    criterion_8_monte_carlo();
    criterion_9_energy();
    criterion_10_axioms();
    criterion_11_figures();
    std::printf("SUMMARY: %d/11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
