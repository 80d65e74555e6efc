#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "livsic/basis.hpp"
#include "livsic/coboundary.hpp"
#include "livsic/transfer.hpp"
#include "livsic/vexp.hpp"

namespace livsic::io {

/// Shortest round-trippable decimal form; locale-independent and
/// deterministic, so identical inputs give byte-identical files.
std::string format_double(double v);

/// FunctionRep serialization: header "index,re,im"; Fourier index is the mode
/// number n in [-N, N], Ulam index is the cell number.
void write_rep_csv(const std::filesystem::path& path, const basis::FunctionRep& rep);

/// Dense row-major dump, header "row,col,re,im".
void write_operator_csv(const std::filesystem::path& path, const transfer::OperatorMatrix& op);

/// Header "t,re_lambda,im_lambda,abs_lambda,eigen_residual,proj_defect".
void write_lambda_curve_csv(const std::filesystem::path& path,
                            const std::vector<coboundary::LambdaSample>& curve);

/// Header "m,s,n,variant,value,margin,x_star,angle_star".
void write_certificate_csv(const std::filesystem::path& path, int m,
                           const vexp::Certificate& cert);

/// Header "period,point_index,x,birkhoff_re,birkhoff_im,closure_residual".
void write_obstructions_csv(const std::filesystem::path& path,
                            const coboundary::Obstructions& obs);

nlohmann::json report_json(const coboundary::CoboundaryReport& report,
                           const std::string& recovered_csv_name);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

} // namespace livsic::io
