// Command-line front end: CSV ingestion, multi-scale smoothing, weighting
// curve emission, the verification battery, and the exponential-smoothing
// comparison. Emits plot-ready long-form CSV (scale,x,value) or a JSON
// envelope; no plotting dependencies.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <scale_smooth/scale_smooth.hpp>

namespace {

using nlohmann::json;
using namespace scale_smooth;

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_bad_input = 2;

constexpr int profile_points = 201;
constexpr int weights_points = 8193;  // dense enough that a trapezoid over the
                                      // emitted rows resolves the mass to 1e-6

struct CommonConfig {
    double r = 0.5;
    std::vector<double> scales;
    std::string input;
    std::string output;
    std::string format = "csv";
    std::string extension = "constant";
    std::string time_unit = "time";
};

TailExtension extension_policy(const std::string& name) {
    if (name == "constant") return TailExtension::Constant;
    if (name == "zero") return TailExtension::Zero;
    throw CLI::ValidationError("--extension", "must be 'constant' or 'zero'");
}

// Latest sample becomes the present (time 0); earlier samples shift with it.
IncomeSeries load_series(const CommonConfig& cfg) {
    std::ifstream in(cfg.input);
    if (!in) throw CsvError(0, "cannot open '" + cfg.input + "'");
    auto rows = parse_income_csv(in);
    const double shift = rows.back().time;
    for (auto& row : rows) row.time -= shift;
    IncomeSeries series{std::move(rows)};
    validate(series);
    return series;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CsvError(0, "cannot write '" + path + "'");
    out << contents;
}

std::string render_rows(const std::vector<ValueRow>& rows) {
    std::ostringstream out;
    write_value_csv(out, rows);
    return out.str();
}

json config_echo(const std::string& command, const CommonConfig& cfg) {
    return json{{"command", command},     {"r", cfg.r},
                {"scales", cfg.scales},   {"input", cfg.input},
                {"output", cfg.output},   {"format", cfg.format},
                {"extension", cfg.extension}, {"time_unit", cfg.time_unit}};
}

json rows_to_json(const std::string& series, const std::vector<ValueRow>& rows) {
    json out = json::array();
    for (const auto& row : rows) {
        out.push_back({{"series", series}, {"scale", row.scale}, {"x", row.x}, {"value", row.value}});
    }
    return out;
}

int run_smooth(const CommonConfig& cfg) {
    const IncomeSeries series = load_series(cfg);
    const StepFunction f = step_from_samples(series, extension_policy(cfg.extension));

    const double left = std::min(f.breakpoints().front(), -1.0);
    std::vector<double> xs(profile_points);
    for (int i = 0; i < profile_points; ++i) {
        xs[i] = left * static_cast<double>(profile_points - 1 - i) / (profile_points - 1);
    }

    std::vector<ValueRow> profile_rows;
    std::vector<ValueRow> present_rows;
    for (double t : cfg.scales) {
        if (!(t >= 0.0)) throw CsvError(0, "scales must be >= 0");
        const SmoothedProfile profile = smooth_profile(f, {cfg.r, t}, xs);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            profile_rows.push_back({t, xs[i], profile.values[i]});
        }
        present_rows.push_back({t, 0.0, profile.values.back()});
    }

    if (cfg.format == "json") {
        json envelope{{"config", config_echo("smooth", cfg)},
                      {"results", rows_to_json("profile", profile_rows)}};
        for (auto& row : rows_to_json("present", present_rows)) {
            envelope["results"].push_back(row);
        }
        write_file(cfg.output + ".json", envelope.dump(2) + "\n");
    } else {
        write_file(cfg.output + ".profiles.csv", render_rows(profile_rows));
        write_file(cfg.output + ".present.csv", render_rows(present_rows));
    }
    return exit_ok;
}

int run_weights(const CommonConfig& cfg) {
    std::vector<ValueRow> weight_rows;
    std::vector<ValueRow> asymptote_rows;
    std::vector<ValueRow> stationary_rows;

    double widest = 0.0;
    for (double t : cfg.scales) {
        if (!(t > 0.0)) throw CsvError(0, "weight curves need scales > 0");
        const KernelParams p{cfg.r, t};
        const double lo = kernel_support_lower(p, 0.0);
        widest = std::min(widest, lo);
        for (int i = 0; i < weights_points; ++i) {
            const double y = lo * static_cast<double>(weights_points - 1 - i) / (weights_points - 1);
            weight_rows.push_back({t, y, kernel_density(p, 0.0, y)});
            // At the boundary start x = 0 the image term equals the direct
            // one, so the small-scale shape is the folded Gaussian.
            asymptote_rows.push_back({t, y, 2.0 * kernel_small_t(p, 0.0, y)});
        }
    }
    if (cfg.r > 0.0) {
        const double inf = std::numeric_limits<double>::infinity();
        for (int i = 0; i < weights_points; ++i) {
            const double y = widest * static_cast<double>(weights_points - 1 - i) / (weights_points - 1);
            stationary_rows.push_back({inf, y, stationary_density(cfg.r, y)});
        }
    } else {
        std::cerr << "warning: no stationary profile for r <= 0; stationary curve suppressed\n";
    }

    if (cfg.format == "json") {
        json envelope{{"config", config_echo("weights", cfg)},
                      {"results", rows_to_json("weights", weight_rows)}};
        for (auto& row : rows_to_json("small-scale-asymptote", asymptote_rows)) {
            envelope["results"].push_back(row);
        }
        for (auto& row : rows_to_json("stationary", stationary_rows)) {
            envelope["results"].push_back(row);
        }
        write_file(cfg.output + ".json", envelope.dump(2) + "\n");
    } else {
        write_file(cfg.output + ".weights.csv", render_rows(weight_rows));
        write_file(cfg.output + ".asymptote.csv", render_rows(asymptote_rows));
        if (!stationary_rows.empty()) {
            write_file(cfg.output + ".stationary.csv", render_rows(stationary_rows));
        }
    }
    return exit_ok;
}

// Exact integral of f against the exponential weight 2 r e^{2ry}.
double exponential_average(const StepFunction& f, double r) {
    const auto& b = f.breakpoints();
    const auto& v = f.values();
    double total = f.tail_value() * std::exp(2.0 * r * b.front());
    for (std::size_t i = 0; i < v.size(); ++i) {
        total += v[i] * (std::exp(2.0 * r * b[i + 1]) - std::exp(2.0 * r * b[i]));
    }
    return total;
}

// Exact mean of f over the flat window [-width, 0].
double flat_window_average(const StepFunction& f, double width) {
    const auto& b = f.breakpoints();
    const auto& v = f.values();
    double total = 0.0;
    if (-width < b.front()) total += f.tail_value() * (b.front() - (-width));
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double lo = std::max(b[i], -width);
        const double hi = b[i + 1];
        if (hi > lo) total += v[i] * (hi - lo);
    }
    return total / width;
}

int run_compare_exponential(const CommonConfig& cfg) {
    if (!(cfg.r > 0.0)) {
        std::cerr << "error: the exponential comparison needs a drift toward the present (r > 0)\n";
        return exit_bad_input;
    }
    const IncomeSeries series = load_series(cfg);
    const StepFunction f = step_from_samples(series, extension_policy(cfg.extension));

    std::vector<ValueRow> kernel_rows;
    for (double t : cfg.scales) {
        if (!(t > 0.0)) throw CsvError(0, "comparison scales must be > 0");
        kernel_rows.push_back({t, 0.0, smooth_at(f, {cfg.r, t}, 0.0)});
    }
    const double exponential = exponential_average(f, cfg.r);
    const double window = 1.0 / (2.0 * cfg.r);
    const double flat = flat_window_average(f, window);

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<ValueRow> exponential_rows{{inf, 0.0, exponential}};
    std::vector<ValueRow> flat_rows{{window, 0.0, flat}};

    if (cfg.format == "json") {
        json envelope{{"config", config_echo("compare-exponential", cfg)},
                      {"results", rows_to_json("kernel", kernel_rows)}};
        for (auto& row : rows_to_json("exponential", exponential_rows)) {
            envelope["results"].push_back(row);
        }
        for (auto& row : rows_to_json("flat-window", flat_rows)) {
            envelope["results"].push_back(row);
        }
        write_file(cfg.output + ".json", envelope.dump(2) + "\n");
    } else {
        write_file(cfg.output + ".kernel.csv", render_rows(kernel_rows));
        write_file(cfg.output + ".exponential.csv", render_rows(exponential_rows));
        write_file(cfg.output + ".flat.csv", render_rows(flat_rows));
    }

    // The kernel average converges to the exponential one as the scale grows.
    for (const auto& row : kernel_rows) {
        std::cout << "scale " << format_double(row.scale) << ": |kernel - exponential| = "
                  << format_double(std::abs(row.value - exponential)) << '\n';
    }
    return exit_ok;
}

int run_verify(const VerifyOptions& options, const std::string& format,
               const std::string& output) {
    const auto checks = run_verification(options);
    bool all_pass = true;

    std::ostringstream text;
    for (const auto& check : checks) {
        all_pass = all_pass && check.pass;
        text << (check.pass ? "PASS" : "FAIL") << "  " << check.name
             << "  measured=" << format_double(check.measured)
             << "  tol=" << format_double(check.tolerance) << '\n';
    }

    if (format == "json") {
        json report = json::array();
        for (const auto& check : checks) {
            report.push_back({{"name", check.name},
                              {"measured", check.measured},
                              {"tolerance", check.tolerance},
                              {"pass", check.pass}});
        }
        const std::string body =
            json{{"config", {{"command", "verify"}, {"quick", options.quick}, {"seed", options.seed}}},
                 {"results", report}}
                .dump(2) +
            "\n";
        if (!output.empty()) write_file(output, body);
        std::cout << body;
    } else {
        if (!output.empty()) write_file(output, text.str());
        std::cout << text.str();
    }
    return all_pass ? exit_ok : exit_check_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-scale one-sided income smoothing with a reflected Brownian weighting kernel"};
    app.require_subcommand(1);

    CommonConfig smooth_cfg;
    auto* smooth = app.add_subcommand("smooth", "Smooth a time,income CSV at one or more scales");
    smooth->add_option("--input", smooth_cfg.input, "input CSV (header: time,income)")->required();
    smooth->add_option("--output", smooth_cfg.output, "output path prefix")->required();
    smooth->add_option("--r", smooth_cfg.r, "drift toward the present");
    smooth->add_option("--scales", smooth_cfg.scales, "smoothing scales (>= 0)")
        ->required()
        ->delimiter(',');
    smooth->add_option("--format", smooth_cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    smooth->add_option("--extension", smooth_cfg.extension, "pre-sample income fill: constant or zero")
        ->check(CLI::IsMember({"constant", "zero"}));
    smooth->add_option("--time-unit", smooth_cfg.time_unit, "label for the time axis");

    CommonConfig weights_cfg;
    weights_cfg.scales = {0.05, 1.0, 200.0};
    auto* weights = app.add_subcommand("weights", "Emit the weighting curves p_t(0,y)");
    weights->add_option("--output", weights_cfg.output, "output path prefix")->required();
    weights->add_option("--r", weights_cfg.r, "drift toward the present");
    weights->add_option("--scales", weights_cfg.scales, "scales (> 0)")->delimiter(',');
    weights->add_option("--format", weights_cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    VerifyOptions verify_options;
    std::string verify_format = "text";
    std::string verify_output;
    auto* verify = app.add_subcommand("verify", "Run the full property battery");
    verify->add_flag("--quick", verify_options.quick, "reduced grids, well under 30 s");
    verify->add_option("--seed", verify_options.seed, "RNG seed for the stochastic checks");
    verify->add_option("--mc-paths", verify_options.mc_paths, "Monte Carlo path count");
    verify->add_option("--mc-dt", verify_options.mc_dt, "Monte Carlo time step");
    verify->add_option("--pde-L", verify_options.pde_length, "PDE domain length");
    verify->add_option("--pde-n", verify_options.pde_nodes, "PDE node count");
    verify->add_option("--pde-dt", verify_options.pde_dt, "PDE time step");
    verify->add_option("--format", verify_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    verify->add_option("--output", verify_output, "also write the report here");
    verify
        ->add_flag("--inject-sign-bug", verify_options.inject_drift_sign_fault,
                   "fault-injection self-test: must make the semigroup check fail")
        ->group("");  // hidden

    CommonConfig compare_cfg;
    auto* compare = app.add_subcommand(
        "compare-exponential", "Present-time average: kernel vs exponential vs flat window");
    compare->add_option("--input", compare_cfg.input, "input CSV (header: time,income)")->required();
    compare->add_option("--output", compare_cfg.output, "output path prefix")->required();
    compare->add_option("--r", compare_cfg.r, "drift toward the present (must be > 0)");
    compare->add_option("--scales", compare_cfg.scales, "kernel scales (> 0)")
        ->required()
        ->delimiter(',');
    compare->add_option("--format", compare_cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    compare->add_option("--extension", compare_cfg.extension, "pre-sample income fill")
        ->check(CLI::IsMember({"constant", "zero"}));
    compare->add_option("--time-unit", compare_cfg.time_unit, "label for the time axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_bad_input;
    }

    if (const char* env_seed = std::getenv("SCALE_SMOOTH_SEED")) {
        char* end = nullptr;
        const unsigned long long parsed = std::strtoull(env_seed, &end, 10);
        if (end != env_seed && *end == '\0') {
            verify_options.seed = parsed;
        } else {
            std::cerr << "warning: ignoring non-numeric SCALE_SMOOTH_SEED\n";
        }
    }

    try {
        if (smooth->parsed()) return run_smooth(smooth_cfg);
        if (weights->parsed()) return run_weights(weights_cfg);
        if (verify->parsed()) return run_verify(verify_options, verify_format, verify_output);
        if (compare->parsed()) return run_compare_exponential(compare_cfg);
    } catch (const CsvError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_bad_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_bad_input;
    }
    return exit_bad_input;
}
