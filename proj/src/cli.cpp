#include "livsic/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <json.hpp>

#include "livsic/coboundary.hpp"
#include "livsic/io.hpp"
#include "livsic/observables.hpp"
#include "livsic/selftest.hpp"
#include "livsic/spectral.hpp"
#include "livsic/transfer.hpp"
#include "livsic/util.hpp"
#include "livsic/vexp.hpp"

namespace livsic::cli {

namespace {

using nlohmann::json;

constexpr const char* kToolVersion = "livsic 0.1.0";

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigInvalid(std::string("config parse error: ") + e.what());
    }
}

template <typename T>
T field(const json& j, const std::string& key, const T& fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigInvalid("field '" + key + "': " + e.what());
    }
}

template <typename T>
T required_field(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigInvalid("missing required field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigInvalid("field '" + key + "': " + e.what());
    }
}

maps::MapModel map_from_config(const json& j) {
    if (!j.contains("map")) throw ConfigInvalid("missing required field 'map'");
    const json& m = j.at("map");
    const auto type = required_field<std::string>(m, "type");
    try {
        if (type == "circle")
            return maps::AnalyticCircleMap(required_field<int>(m, "k"),
                                           field<double>(m, "eps", 0.0));
        if (type == "beta") return maps::BetaTransformation(required_field<double>(m, "beta"));
        if (type == "tsujii") return maps::TsujiiSkewProduct(required_field<int>(m, "m"));
    } catch (const Error& e) {
        throw ConfigInvalid(std::string("field 'map': ") + e.what());
    }
    throw ConfigInvalid("field 'map.type': expected circle | beta | tsujii");
}

basis::BasisSpec basis_from_config(const json& j) {
    if (!j.contains("basis")) throw ConfigInvalid("missing required field 'basis'");
    const json& b = j.at("basis");
    const auto family = required_field<std::string>(b, "family");
    const int size = required_field<int>(b, "size");
    if (size < 1) throw ConfigInvalid("field 'basis.size': must be >= 1");
    if (family == "fourier") return {basis::Family::fourier, size};
    if (family == "ulam") return {basis::Family::ulam, size};
    throw ConfigInvalid("field 'basis.family': expected fourier | ulam");
}

basis::FunctionRep observable_from_config(const json& j, const basis::BasisSpec& spec) {
    if (!j.contains("observable")) throw ConfigInvalid("missing required field 'observable'");
    const json& o = j.at("observable");
    if (o.contains("coefficients")) {
        const auto rows = o.at("coefficients");
        if (!rows.is_array() || static_cast<int>(rows.size()) != spec.dim())
            throw ConfigInvalid("field 'observable.coefficients': expected " +
                                std::to_string(spec.dim()) + " [re, im] pairs");
        Eigen::VectorXcd v(spec.dim());
        for (int i = 0; i < spec.dim(); ++i) {
            const auto& row = rows.at(static_cast<std::size_t>(i));
            if (!row.is_array() || row.size() != 2)
                throw ConfigInvalid("field 'observable.coefficients': entries are [re, im] pairs");
            v(i) = basis::cd{row.at(0).get<double>(), row.at(1).get<double>()};
        }
        return basis::rep_from_coords(spec, std::move(v));
    }
    const auto name = required_field<std::string>(o, "name");
    if (name == "cos1") return observables::cos1(spec);
    if (name == "cos2-minus-cos1") return observables::cos2_minus_cos1(spec);
    if (name == "constant") return observables::constant(spec, required_field<double>(o, "c"));
    if (name == "indicator-a-b" || name == "indicator")
        return observables::indicator(spec, required_field<double>(o, "a"),
                                      required_field<double>(o, "b"));
    throw ConfigInvalid("field 'observable.name': expected cos1 | cos2-minus-cos1 | constant | "
                        "indicator-a-b (or a coefficient list)");
}

coboundary::TGrid tgrid_from_config(const json& j) {
    coboundary::TGrid grid;
    if (j.contains("t_grid")) {
        const json& g = j.at("t_grid");
        grid.t_max = field<double>(g, "t_max", grid.t_max);
        grid.points = field<int>(g, "points", grid.points);
    }
    try {
        grid.validate();
    } catch (const Error& e) {
        throw ConfigInvalid(std::string("field 't_grid': ") + e.what());
    }
    return grid;
}

coboundary::Tolerances tolerances_from_config(const json& j, const basis::BasisSpec& spec) {
    auto tol = coboundary::Tolerances::defaults_for(spec);
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        tol.drift = field<double>(t, "drift", tol.drift);
        tol.variance = field<double>(t, "variance", tol.variance);
        tol.lambda_dev = field<double>(t, "lambda", tol.lambda_dev);
    }
    return tol;
}

std::optional<spectral::ContourSpec> contour_from_config(const json& j) {
    if (!j.contains("contour")) return std::nullopt;
    const json& c = j.at("contour");
    spectral::ContourSpec spec;
    spec.radius = field<double>(c, "radius", spec.radius);
    spec.nodes = field<int>(c, "nodes", spec.nodes);
    try {
        spec.validate();
    } catch (const Error& e) {
        throw ConfigInvalid(std::string("field 'contour': ") + e.what());
    }
    return spec;
}

vexp::WeightVariant variant_from_string(const std::string& s) {
    if (s == "printed") return vexp::WeightVariant::printed;
    if (s == "reciprocal" || s == "reciprocal-pullback")
        return vexp::WeightVariant::reciprocal_pullback;
    throw ConfigInvalid("variant: expected printed | reciprocal");
}

struct Context {
    json config;
    std::filesystem::path out_dir;
    std::chrono::steady_clock::time_point start;
    json timings = json::object();
};

Context make_context(const RunOptions& options) {
    Context ctx;
    ctx.config = load_config(options.config_path);
    std::string out = field<std::string>(ctx.config, "out_dir", "out");
    if (!options.out_dir.empty()) out = options.out_dir;
    ctx.out_dir = out;
    std::filesystem::create_directories(ctx.out_dir);
    ctx.start = std::chrono::steady_clock::now();
    return ctx;
}

void write_provenance(const Context& ctx, const std::string& subcommand, const json& extra) {
    json p;
    p["tool"] = kToolVersion;
    p["subcommand"] = subcommand;
    p["config"] = ctx.config;
    p["seed"] = field<std::uint64_t>(ctx.config, "seed", 1);
    p["threads"] = util::thread_count();
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - ctx.start)
                             .count();
    p["timings_ms"] = {{"total", elapsed}};
    for (auto it = extra.begin(); it != extra.end(); ++it) p[it.key()] = it.value();
    io::write_json(ctx.out_dir / "provenance.json", p);
}

int run_density(Context& ctx, const RunOptions& options) {
    const auto map = map_from_config(ctx.config);
    const auto spec = basis_from_config(ctx.config);
    const auto op = transfer::assemble(map, spec);
    const auto eig = spectral::leading_eigen(op);

    io::write_rep_csv(ctx.out_dir / "density.csv", eig.density);
    if (options.dump_operator) io::write_operator_csv(ctx.out_dir / "operator.csv", op);
    json summary;
    summary["lambda"] = {{"re", eig.eigenvalue.real()}, {"im", eig.eigenvalue.imag()}};
    summary["gap"] = eig.gap;
    summary["residual"] = eig.residual;
    summary["map"] = maps::map_id(map);
    summary["basis"] = {{"family", basis::family_name(spec.family)}, {"size", spec.size}};
    io::write_json(ctx.out_dir / "density_summary.json", summary);
    write_provenance(ctx, "density", {{"outputs", {"density.csv", "density_summary.json"}}});
    util::log_info("density written to " + (ctx.out_dir / "density.csv").string());
    return 0;
}

int run_lambda_curve(Context& ctx, const RunOptions& options) {
    const auto map = map_from_config(ctx.config);
    const auto spec = basis_from_config(ctx.config);
    const auto f = observable_from_config(ctx.config, spec);
    const auto grid = tgrid_from_config(ctx.config);
    const auto ws = spectral::Workspace::make(map, spec, contour_from_config(ctx.config));

    std::vector<coboundary::LambdaSample> curve;
    for (const double t : grid.values()) {
        const auto ped = spectral::perturbed_eigendata(ws, f, basis::cd{t, 0.0});
        curve.push_back({t, ped.lambda, ped.eigen_residual, ped.projection_defect});
    }
    io::write_lambda_curve_csv(ctx.out_dir / "lambda_curve.csv", curve);
    if (options.dump_operator)
        io::write_operator_csv(ctx.out_dir / "operator.csv", ws.plain);
    write_provenance(ctx, "lambda-curve", {{"outputs", {"lambda_curve.csv"}}});
    return 0;
}

void attach_obstructions(const json& config, const maps::MapModel& map,
                         const basis::FunctionRep& f, coboundary::CoboundaryReport& report) {
    const int n_max = field<int>(config, "periodic_n_max", 0);
    if (n_max > 0 && maps::is_one_dimensional(map))
        report.periodic_obstruction_max = coboundary::periodic_obstructions(map, f, n_max).max_abs;
}

int run_detect(Context& ctx, const RunOptions& options) {
    const auto map = map_from_config(ctx.config);
    const auto spec = basis_from_config(ctx.config);
    const auto f = observable_from_config(ctx.config, spec);
    const auto grid = tgrid_from_config(ctx.config);
    const auto tol = tolerances_from_config(ctx.config, spec);

    auto report = coboundary::detect(map, f, spec, grid, tol);
    attach_obstructions(ctx.config, map, f, report);

    io::write_lambda_curve_csv(ctx.out_dir / "lambda_curve.csv", report.lambda_curve);
    io::write_json(ctx.out_dir / "report.json", io::report_json(report, ""));
    if (options.dump_operator)
        io::write_operator_csv(ctx.out_dir / "operator.csv", transfer::assemble(map, spec));
    write_provenance(ctx, "detect",
                     {{"outputs", {"report.json", "lambda_curve.csv"}},
                      {"tolerances_used",
                       {{"drift", tol.drift}, {"variance", tol.variance}, {"lambda", tol.lambda_dev}}}});
    util::log_info("verdict: " + coboundary::verdict_name(report.verdict));
    return report.verdict == coboundary::Verdict::inconclusive ? 1 : 0;
}

int run_recover(Context& ctx, const RunOptions& options) {
    const auto map = map_from_config(ctx.config);
    const auto spec = basis_from_config(ctx.config);
    const auto f = observable_from_config(ctx.config, spec);
    const auto grid = tgrid_from_config(ctx.config);
    const auto tol = tolerances_from_config(ctx.config, spec);

    std::string method_name = field<std::string>(ctx.config, "method", "resolvent");
    if (!options.method.empty()) method_name = options.method;
    coboundary::RecoveryMethod method;
    if (method_name == "cauchy") {
        method = coboundary::RecoveryMethod::cauchy;
    } else if (method_name == "resolvent") {
        method = coboundary::RecoveryMethod::resolvent;
    } else {
        throw ConfigInvalid("method: expected cauchy | resolvent");
    }

    const bool force = field<bool>(ctx.config, "force", false);
    auto report = coboundary::detect(map, f, spec, grid, tol);
    attach_obstructions(ctx.config, map, f, report);
    io::write_lambda_curve_csv(ctx.out_dir / "lambda_curve.csv", report.lambda_curve);

    if (report.verdict != coboundary::Verdict::coboundary && !force) {
        io::write_json(ctx.out_dir / "report.json", io::report_json(report, ""));
        write_provenance(ctx, "recover",
                         {{"outputs", {"report.json", "lambda_curve.csv"}},
                          {"note", "recovery skipped: verdict was " +
                                       coboundary::verdict_name(report.verdict)}});
        util::log_info("recovery skipped; verdict " + coboundary::verdict_name(report.verdict));
        return 1;
    }

    const auto recovery = coboundary::recover(map, f, spec, method);
    report.recovered_h = recovery.h;
    report.cocycle_residual = recovery.residual.max;
    report.cocycle_residual_mean = recovery.cell_averaged_residual;

    io::write_rep_csv(ctx.out_dir / "h.csv", recovery.h);
    io::write_json(ctx.out_dir / "report.json", io::report_json(report, "h.csv"));
    if (options.dump_operator)
        io::write_operator_csv(ctx.out_dir / "operator.csv", transfer::assemble(map, spec));
    write_provenance(ctx, "recover",
                     {{"outputs", {"report.json", "h.csv", "lambda_curve.csv"}},
                      {"method", method_name}});
    return 0;
}

int run_periodic(Context& ctx) {
    const auto map = map_from_config(ctx.config);
    const auto spec = basis_from_config(ctx.config);
    const auto f = observable_from_config(ctx.config, spec);
    const int n_max = field<int>(ctx.config, "n_max", 10);
    if (n_max < 1) throw ConfigInvalid("field 'n_max': must be >= 1");

    const auto obs = coboundary::periodic_obstructions(map, f, n_max);
    io::write_obstructions_csv(ctx.out_dir / "obstructions.csv", obs);
    write_provenance(ctx, "periodic",
                     {{"outputs", {"obstructions.csv"}}, {"max_obstruction", obs.max_abs}});
    return 0;
}

int run_vexp_certify(Context& ctx, const RunOptions& options) {
    const auto map = map_from_config(ctx.config);
    const json v = ctx.config.contains("vexp") ? ctx.config.at("vexp") : json::object();
    const double s = field<double>(v, "s", 2.0);
    const int n_max = field<int>(v, "n_max", 2);
    const int xres = field<int>(v, "x_resolution", 256);
    const int ares = field<int>(v, "angle_resolution", 256);

    std::string variant_name = field<std::string>(ctx.config, "variant", "reciprocal");
    if (!options.variant.empty()) variant_name = options.variant;
    const auto variant = variant_from_string(variant_name);

    int m = 0;
    if (const auto* t = std::get_if<maps::TsujiiSkewProduct>(&map)) {
        m = t->m();
    } else if (const auto* c = std::get_if<maps::AnalyticCircleMap>(&map)) {
        m = c->degree();
    } else {
        m = std::get<maps::BetaTransformation>(map).branch_count_max();
    }

    const auto cert = vexp::certify(map, s, n_max, variant, xres, ares);
    io::write_certificate_csv(ctx.out_dir / "certificate.csv", m, cert);
    write_provenance(ctx, "vexp-certify",
                     {{"outputs", {"certificate.csv"}}, {"positive", cert.positive}});
    util::log_info(std::string("certificate ") + (cert.positive ? "positive" : "negative") +
                   ", value " + io::format_double(cert.value));
    return cert.positive ? 0 : 1;
}

int run_selftest(Context& ctx) {
    const auto results = selftest::run_acceptance(&std::cout);
    json lines = json::array();
    for (const auto& r : results)
        lines.push_back({{"criterion", r.index}, {"pass", r.pass}, {"detail", r.detail}});
    write_provenance(ctx, "selftest", {{"results", lines}});
    return selftest::all_passed(results) ? 0 : 1;
}

} // namespace

int run(const std::string& subcommand, const RunOptions& options) {
    try {
        util::set_thread_count(options.threads);
        Context ctx = make_context(options);
        if (subcommand == "density") return run_density(ctx, options);
        if (subcommand == "lambda-curve") return run_lambda_curve(ctx, options);
        if (subcommand == "detect") return run_detect(ctx, options);
        if (subcommand == "recover") return run_recover(ctx, options);
        if (subcommand == "periodic") return run_periodic(ctx);
        if (subcommand == "vexp-certify") return run_vexp_certify(ctx, options);
        if (subcommand == "selftest") return run_selftest(ctx);
        throw ConfigInvalid("unknown subcommand: " + subcommand);
    } catch (const ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace livsic::cli
