#include <CLI11.hpp>

#include "livsic/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"transfer-operator toolkit: coboundary detection, transfer-function recovery, "
                 "and virtual-expansion certificates"};
    app.require_subcommand(1);

    livsic::cli::RunOptions options;
    const std::vector<std::pair<std::string, std::string>> subcommands = {
        {"density", "invariant density and spectral summary of a map"},
        {"lambda-curve", "leading eigenvalue of the twisted operator over a t grid"},
        {"detect", "coboundary diagnostics and verdict for an observable"},
        {"recover", "reconstruct the transfer function h of a coboundary"},
        {"periodic", "Birkhoff sums of the observable over periodic orbits"},
        {"vexp-certify", "virtual-expansion certificate for a map family"},
        {"selftest", "run the full acceptance and invariant suite"},
    };

    for (const auto& [name, desc] : subcommands) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", options.config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", options.out_dir, "output directory override");
        sub->add_option("--threads", options.threads, "worker threads (0 = auto)");
        if (name == "recover")
            sub->add_option("--method", options.method, "recovery method: cauchy | resolvent");
        if (name == "vexp-certify")
            sub->add_option("--variant", options.variant, "weight variant: printed | reciprocal");
        if (name == "density" || name == "lambda-curve" || name == "detect" || name == "recover")
            sub->add_flag("--dump-operator", options.dump_operator,
                          "also write the assembled operator matrix (CSV)");
    }

    CLI11_PARSE(app, argc, argv);
    return livsic::cli::run(app.get_subcommands().front()->get_name(), options);
}
