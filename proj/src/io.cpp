#include "livsic/io.hpp"

#include <cstdio>
#include <fstream>

namespace livsic::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);  // binary: uniform newlines everywhere
    if (!out) throw Error("cannot open output file: " + path.string());
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_rep_csv(const std::filesystem::path& path, const basis::FunctionRep& rep) {
    auto out = open_out(path);
    out << "index,re,im\n";
    const auto spec = basis::spec_of(rep);
    const auto& v = basis::coords(rep);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const long long index =
            spec.family == basis::Family::fourier ? static_cast<long long>(i) - spec.size : i;
        out << index << ',' << format_double(v(i).real()) << ',' << format_double(v(i).imag())
            << '\n';
    }
}

void write_operator_csv(const std::filesystem::path& path, const transfer::OperatorMatrix& op) {
    auto out = open_out(path);
    out << "row,col,re,im\n";
    const auto& m = op.dense();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out << r << ',' << c << ',' << format_double(m(r, c).real()) << ','
                << format_double(m(r, c).imag()) << '\n';
}

void write_lambda_curve_csv(const std::filesystem::path& path,
                            const std::vector<coboundary::LambdaSample>& curve) {
    auto out = open_out(path);
    out << "t,re_lambda,im_lambda,abs_lambda,eigen_residual,proj_defect\n";
    for (const auto& s : curve) {
        out << format_double(s.t) << ',' << format_double(s.lambda.real()) << ','
            << format_double(s.lambda.imag()) << ',' << format_double(std::abs(s.lambda)) << ','
            << format_double(s.eigen_residual) << ',' << format_double(s.projection_defect)
            << '\n';
    }
}

void write_certificate_csv(const std::filesystem::path& path, int m,
                           const vexp::Certificate& cert) {
    auto out = open_out(path);
    out << "m,s,n,variant,value,margin,x_star,angle_star\n";
    out << m << ',' << format_double(cert.s) << ',' << cert.n << ','
        << vexp::variant_name(cert.variant) << ',' << format_double(cert.value) << ','
        << format_double(cert.margin) << ',' << format_double(cert.x_star) << ','
        << format_double(cert.angle_star) << '\n';
}

void write_obstructions_csv(const std::filesystem::path& path,
                            const coboundary::Obstructions& obs) {
    auto out = open_out(path);
    out << "period,point_index,x,birkhoff_re,birkhoff_im,closure_residual\n";
    for (const auto& [orbit, sum] : obs.birkhoff_sums) {
        for (std::size_t i = 0; i < orbit.points.size(); ++i) {
            out << orbit.period << ',' << i << ',' << format_double(orbit.points[i]) << ','
                << format_double(sum.real()) << ',' << format_double(sum.imag()) << ','
                << format_double(orbit.closure_residual) << '\n';
        }
    }
}

nlohmann::json report_json(const coboundary::CoboundaryReport& report,
                           const std::string& recovered_csv_name) {
    nlohmann::json j;
    j["drift"] = {{"re", report.drift.real()}, {"im", report.drift.imag()}};
    j["variance"] = report.variance;
    j["lambda_deviation"] = report.lambda_deviation;
    if (report.periodic_obstruction_max.has_value())
        j["periodic_obstruction_max"] = *report.periodic_obstruction_max;
    if (report.recovered_h.has_value() && !recovered_csv_name.empty())
        j["recovered_h_csv"] = recovered_csv_name;
    if (report.cocycle_residual.has_value()) j["cocycle_residual"] = *report.cocycle_residual;
    if (report.cocycle_residual_mean.has_value())
        j["cocycle_residual_mean"] = *report.cocycle_residual_mean;
    j["verdict"] = coboundary::verdict_name(report.verdict);
    j["tolerances"] = {{"drift", report.tolerances.drift},
                       {"variance", report.tolerances.variance},
                       {"lambda", report.tolerances.lambda_dev}};
    return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace livsic::io
