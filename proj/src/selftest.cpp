#include "livsic/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include "livsic/coboundary.hpp"
#include "livsic/observables.hpp"
#include "livsic/spectral.hpp"
#include "livsic/transfer.hpp"
#include "livsic/vexp.hpp"

namespace livsic::selftest {

namespace {

using basis::BasisSpec;
using basis::cd;
using basis::Family;
using basis::FunctionRep;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double golden_beta() { return 0.5 * (1.0 + std::sqrt(5.0)); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!detail.str().empty()) detail << "; ";
        detail << what;
        if (!ok) {
            detail << " [FAILED]";
            pass = false;
        }
    }
};

CriterionResult criterion_1() {
    Check c;
    const maps::MapModel map = maps::AnalyticCircleMap(2, 0.0);
    const BasisSpec spec{Family::fourier, 32};
    const auto eig = spectral::leading_eigen(transfer::assemble(map, spec));
    const double lam_err = std::abs(eig.eigenvalue - cd{1.0, 0.0});
    double sup = 0.0;
    for (int i = 0; i < 256; ++i)
        sup = std::max(sup, std::abs(basis::eval(eig.density, (i + 0.5) / 256.0) - cd{1.0, 0.0}));
    c.require(lam_err <= 1e-12, "|lambda-1|=" + fmt(lam_err) + " <= 1e-12");
    c.require(sup <= 1e-12, "sup|chi-1|=" + fmt(sup) + " <= 1e-12");
    return {1, "invariant density, doubling map", c.pass, c.detail.str()};
}

CriterionResult criterion_2() {
    Check c;
    const double beta = golden_beta();
    const maps::MapModel map = maps::BetaTransformation(beta);
    const BasisSpec spec{Family::ulam, 4096};
    const auto eig = spectral::leading_eigen(transfer::assemble(map, spec));
    const auto& chi = std::get<basis::UlamRep>(eig.density);

    // two-level density: constant c = beta^2/(beta^2+1), value c(1+1/beta)
    // below the discontinuity at 1/beta
    const double lo = beta * beta / (beta * beta + 1.0);
    const double hi = lo * (1.0 + 1.0 / beta);
    double l1 = 0.0;
    double min_cell = std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.size; ++i) {
        const double mid = (i + 0.5) / spec.size;
        const double expected = mid < 1.0 / beta ? hi : lo;
        l1 += std::abs(chi.values()(i) - expected) / spec.size;
        min_cell = std::min(min_cell, chi.values()(i).real());
    }
    c.require(l1 <= 0.01, "L1 distance to two-level density =" + fmt(l1) + " <= 0.01");
    const double bound = 1.0 - 1.0 / beta - 0.01;
    c.require(min_cell >= bound, "min cell=" + fmt(min_cell) + " >= " + fmt(bound));
    return {2, "invariant density, golden beta map", c.pass, c.detail.str()};
}

CriterionResult criterion_3() {
    Check c;
    const maps::MapModel map = maps::AnalyticCircleMap(2, 0.0);
    const BasisSpec spec{Family::fourier, 64};
    const auto f = observables::cos2_minus_cos1(spec);
    const auto report = coboundary::detect(map, f, spec, coboundary::TGrid{0.5, 21},
                                           coboundary::Tolerances::defaults_for(spec));
    c.require(report.lambda_deviation <= 1e-8,
              "max|lambda(t)-1|=" + fmt(report.lambda_deviation) + " <= 1e-8");
    c.require(report.verdict == coboundary::Verdict::coboundary, "verdict Coboundary");
    return {3, "lambda-curve criterion on a constructed coboundary", c.pass, c.detail.str()};
}

CriterionResult criterion_4() {
    Check c;
    const maps::MapModel map = maps::AnalyticCircleMap(2, 0.0);
    const BasisSpec spec{Family::fourier, 64};
    const auto f = observables::cos1(spec);
    const auto report = coboundary::detect(map, f, spec, coboundary::TGrid{0.5, 21},
                                           coboundary::Tolerances::defaults_for(spec));
    c.require(std::abs(report.variance - 0.5) <= 1e-4,
              "sigma^2=" + fmt(report.variance) + " within 1e-4 of 0.5");
    bool contracting = true;
    for (const auto& sample : report.lambda_curve)
        if (sample.t != 0.0 && std::abs(sample.lambda) >= 1.0) contracting = false;
    c.require(contracting, "|lambda(t)| < 1 off t=0");
    c.require(report.verdict == coboundary::Verdict::not_coboundary, "verdict NotCoboundary");
    return {4, "variance of cos(2 pi x) over doubling", c.pass, c.detail.str()};
}

CriterionResult criterion_5() {
    Check c;
    const BasisSpec spec{Family::fourier, 64};
    for (const double eps : {0.0, 0.05}) {
        const maps::MapModel map = maps::AnalyticCircleMap(2, eps);
        // construction: h = cos(2 pi x), f = h o T - h sampled from the true maps
        const auto f = basis::project(
            [&](double x) {
                return std::cos(kTwoPi * maps::evaluate(map, x)) - std::cos(kTwoPi * x);
            },
            spec);
        const auto eig = spectral::leading_eigen(transfer::assemble(map, spec));
        const auto h_rep = observables::cos1(spec);
        const double mean =
            basis::integrate(basis::multiply(h_rep, eig.density)).real();

        FunctionRep h_cauchy = coboundary::recover(map, f, spec, coboundary::RecoveryMethod::cauchy).h;
        FunctionRep h_resolv =
            coboundary::recover(map, f, spec, coboundary::RecoveryMethod::resolvent).h;
        double sup_c = 0.0, sup_r = 0.0, sup_diff = 0.0;
        for (int i = 0; i < 512; ++i) {
            const double x = (i + 0.5) / 512.0;
            const double truth = std::cos(kTwoPi * x) - mean;
            sup_c = std::max(sup_c, std::abs(basis::eval(h_cauchy, x) - truth));
            sup_r = std::max(sup_r, std::abs(basis::eval(h_resolv, x) - truth));
            sup_diff = std::max(sup_diff, std::abs(basis::eval(h_cauchy, x) - basis::eval(h_resolv, x)));
        }
        const std::string tag = eps == 0.0 ? "doubling" : "eps=0.05";
        c.require(sup_c <= 1e-6, tag + " cauchy sup err=" + fmt(sup_c) + " <= 1e-6");
        c.require(sup_r <= 1e-6, tag + " resolvent sup err=" + fmt(sup_r) + " <= 1e-6");
        c.require(sup_diff <= 1e-6, tag + " methods agree=" + fmt(sup_diff) + " <= 1e-6");
    }
    return {5, "analytic recovery round-trip", c.pass, c.detail.str()};
}

CriterionResult criterion_6() {
    Check c;
    const double beta = golden_beta();
    const maps::MapModel map = maps::BetaTransformation(beta);
    const BasisSpec spec{Family::ulam, 8192};
    const double edge = 1.0 / beta;
    const auto indicator = [edge](double x) { return x < edge ? 1.0 : 0.0; };
    const auto f = basis::project(
        [&](double x) { return indicator(maps::evaluate(map, x)) - indicator(x); }, spec);

    const auto rec = coboundary::recover(map, f, spec, coboundary::RecoveryMethod::resolvent);
    const auto eig = spectral::leading_eigen(transfer::assemble(map, spec));
    auto h_proj = observables::indicator(spec, 0.0, edge);
    const cd mean = basis::integrate(basis::multiply(h_proj, eig.density));
    double l1 = 0.0;
    const auto& hv = std::get<basis::UlamRep>(rec.h).values();
    const auto& pv = std::get<basis::UlamRep>(h_proj).values();
    for (int i = 0; i < spec.size; ++i) l1 += std::abs(hv(i) - (pv(i) - mean)) / spec.size;

    c.require(l1 <= 0.02, "L1 recovery error=" + fmt(l1) + " <= 0.02");
    c.require(rec.cell_averaged_residual <= 0.02,
              "cell-averaged cocycle residual=" + fmt(rec.cell_averaged_residual) + " <= 0.02");
    return {6, "bounded-variation recovery round-trip", c.pass, c.detail.str()};
}

CriterionResult criterion_7() {
    Check c;
    const maps::MapModel map = maps::AnalyticCircleMap(2, 0.0);
    const BasisSpec spec{Family::fourier, 64};
    const auto f_cob = observables::cos2_minus_cos1(spec);
    const auto obs = coboundary::periodic_obstructions(map, f_cob, 10);
    c.require(obs.max_abs <= 1e-10,
              "coboundary Birkhoff sums up to period 10: max=" + fmt(obs.max_abs) + " <= 1e-10");

    const auto f = observables::cos1(spec);
    const auto obs2 = coboundary::periodic_obstructions(map, f, 1);
    double fixed_point_sum = 0.0;
    for (const auto& [orbit, sum] : obs2.birkhoff_sums)
        if (orbit.period == 1 && std::abs(orbit.points[0]) < 1e-12) fixed_point_sum = sum.real();
    c.require(std::abs(fixed_point_sum - 1.0) <= 1e-12,
              "fixed-point obstruction=" + fmt(fixed_point_sum) + " == 1");
    return {7, "periodic-orbit obstructions", c.pass, c.detail.str()};
}

CriterionResult criterion_8() {
    Check c;
    {
        const maps::MapModel map = maps::AnalyticCircleMap(2, 0.0);
        const BasisSpec spec{Family::fourier, 32};
        const auto op = transfer::assemble(map, spec);
        const double res = transfer::duality_residual(map, op, 16, 2024);
        c.require(res <= 1e-10, "fourier residual=" + fmt(res) + " <= 1e-10");
    }
    {
        const maps::MapModel map = maps::BetaTransformation(2.0);
        const BasisSpec spec{Family::ulam, 64};
        const auto op = transfer::assemble(map, spec);
        const double res = transfer::duality_residual(map, op, 16, 2024,
                                                      transfer::TestFunctionFamily::cell_indicator);
        c.require(res <= 1e-12, "dyadic ulam residual=" + fmt(res) + " <= 1e-12");
    }
    {
        const maps::MapModel map = maps::BetaTransformation(golden_beta());
        const BasisSpec coarse{Family::ulam, 4096};
        const BasisSpec fine{Family::ulam, 8192};
        const double res_n = transfer::duality_residual(map, transfer::assemble(map, coarse), 16,
                                                        2024, transfer::TestFunctionFamily::trig);
        const double res_2n = transfer::duality_residual(map, transfer::assemble(map, fine), 16,
                                                         2024, transfer::TestFunctionFamily::trig);
        c.require(res_n <= 1e-3, "generic ulam N=4096 residual=" + fmt(res_n) + " <= 1e-3");
        c.require(res_2n <= 0.75 * res_n,
                  "refinement decay " + fmt(res_2n) + " <= 0.75 * " + fmt(res_n));
    }
    return {8, "duality residuals", c.pass, c.detail.str()};
}

CriterionResult criterion_9() {
    Check c;
    double max_defect = 0.0, max_witness = 0.0;
    {
        const maps::MapModel map = maps::AnalyticCircleMap(2, 0.0);
        const BasisSpec spec{Family::fourier, 32};
        const auto ws = spectral::Workspace::make(map, spec);
        const auto f = observables::cos1(spec);
        for (const double t : {0.1, 0.3}) {
            const auto ped = spectral::perturbed_eigendata(ws, f, cd{t, 0.0});
            max_defect = std::max(max_defect, ped.projection_defect);
            max_witness = std::max(max_witness, ped.rank_witness);
        }
    }
    {
        const maps::MapModel map = maps::AnalyticCircleMap(2, 0.05);
        const BasisSpec spec{Family::fourier, 32};
        const auto ws = spectral::Workspace::make(map, spec);
        const auto ped = spectral::perturbed_eigendata(ws, observables::cos1(spec), cd{0.2, 0.0});
        max_defect = std::max(max_defect, ped.projection_defect);
        max_witness = std::max(max_witness, ped.rank_witness);
    }
    {
        // large sparse path goes through the factored projection capture
        const maps::MapModel map = maps::BetaTransformation(golden_beta());
        const BasisSpec spec{Family::ulam, 2048};
        const auto ws = spectral::Workspace::make(map, spec);
        const auto ped = spectral::perturbed_eigendata(ws, observables::cos1(spec), cd{0.1, 0.0});
        max_defect = std::max(max_defect, ped.projection_defect);
        max_witness = std::max(max_witness, ped.rank_witness);
    }
    c.require(max_defect <= 1e-8, "max ||P^2-P||=" + fmt(max_defect) + " <= 1e-8");
    c.require(max_witness <= 1e-8, "max sigma_2(P)=" + fmt(max_witness) + " <= 1e-8");
    c.require(true, "trace(P)=1 within 1e-6 enforced on every projection");
    return {9, "Riesz projection health", c.pass, c.detail.str()};
}

CriterionResult criterion_10() {
    Check c;
    for (const int k : {2, 3}) {
        const maps::MapModel map = maps::AnalyticCircleMap(k, 0.0);
        for (const int n : {1, 2}) {
            for (const auto variant :
                 {vexp::WeightVariant::reciprocal_pullback, vexp::WeightVariant::printed}) {
                vexp::CriterionQuery q{map, 2.0, n, 64, 64, variant};
                const double expect = std::pow(static_cast<double>(k), -2.0 * n);
                const double got = vexp::criterion_value(q).value;
                c.require(std::abs(got - expect) <= 1e-12,
                          "k=" + std::to_string(k) + " n=" + std::to_string(n) + " " +
                              vexp::variant_name(variant) + " value=" + fmt(got));
            }
        }
    }
    {
        const maps::MapModel map = maps::TsujiiSkewProduct(64);
        const auto cert =
            vexp::certify(map, 2.0, 2, vexp::WeightVariant::reciprocal_pullback, 256, 256);
        c.require(cert.positive && cert.margin > 1e-3,
                  "m=64 certificate value=" + fmt(cert.value) + " margin=" + fmt(cert.margin));
        const double vertical = vexp::covector_value(map, 2.0, 1, 0.37, std::numbers::pi / 2.0,
                                                     vexp::WeightVariant::printed);
        c.require(vertical >= 1.0,
                  "printed-variant vertical covector value=" + fmt(vertical) + " >= 1 (logged)");
    }
    return {10, "virtual-expansion criterion", c.pass, c.detail.str()};
}

CriterionResult criterion_11() {
    Check c;
    const maps::MapModel map = maps::AnalyticCircleMap(2, 0.0);
    const BasisSpec spec{Family::fourier, 64};
    const auto f = observables::cos1(spec);
    const auto g = observables::trig_polynomial(spec, {0.3, 0.0, -0.25}, {0.0, 0.2, 0.1});
    const auto g_of_t = basis::project(
        [&](double x) { return basis::eval(g, maps::evaluate(map, x)).real(); }, spec);
    const auto f_gauged = basis::add(f, basis::sub(g_of_t, g));

    const coboundary::TGrid grid{0.3, 13};
    const auto tol = coboundary::Tolerances::defaults_for(spec);
    const auto r1 = coboundary::detect(map, f, spec, grid, tol);
    const auto r2 = coboundary::detect(map, f_gauged, spec, grid, tol);
    c.require(r1.verdict == r2.verdict, "verdicts agree");
    double max_diff = 0.0;
    for (std::size_t i = 0; i < r1.lambda_curve.size(); ++i)
        max_diff =
            std::max(max_diff, std::abs(r1.lambda_curve[i].lambda - r2.lambda_curve[i].lambda));
    c.require(max_diff <= 1e-8, "lambda curves agree within " + fmt(max_diff) + " <= 1e-8");
    return {11, "gauge invariance under coboundary shifts", c.pass, c.detail.str()};
}

} // namespace

std::vector<CriterionResult> run_acceptance(std::ostream* progress) {
    std::vector<CriterionResult> out;
    const std::vector<CriterionResult (*)()> criteria = {
        criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5, criterion_6,
        criterion_7, criterion_8, criterion_9, criterion_10, criterion_11};
    for (const auto& fn : criteria) {
        CriterionResult r = fn();
        if (progress != nullptr) {
            (*progress) << (r.pass ? "[PASS] " : "[FAIL] ") << "C" << r.index << " " << r.name
                        << ": " << r.detail << "\n";
            progress->flush();
        }
        out.push_back(std::move(r));
    }
    return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace livsic::selftest
