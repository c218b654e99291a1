#include <CLI11.hpp>

#include "seclend/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Securities-lending haircut and indemnification pricing engine"};
    app.require_subcommand(1);

    seclend::CalibrateCliOptions cal;
    CLI::App* calibrate = app.add_subcommand(
        "calibrate", "Fit DEJD asset parameters to a date,close price CSV");
    calibrate->add_option("--csv", cal.csv_path, "Input price CSV (date,close)")->required();
    calibrate->add_option("--out", cal.out_dir, "Output directory");
    calibrate->add_flag("--zero-drift", cal.zero_drift, "Zero the fitted drift in the report");

    seclend::CommonCliOptions hc;
    std::uint64_t hc_seed = 0;
    CLI::App* haircut = app.add_subcommand(
        "haircut", "Solve rating-targeted haircuts or a grade-by-target schedule");
    haircut->add_option("--config", hc.config_path, "Run configuration JSON")->required();
    CLI::Option* hc_seed_opt =
        haircut->add_option("--seed", hc_seed, "Override the configured seed");
    haircut->add_option("--workers", hc.workers, "Worker threads (0 = all cores)");
    std::string hc_out;
    CLI::Option* hc_out_opt = haircut->add_option("--out", hc_out, "Override output directory");
    haircut->add_flag("--self-check", hc.self_check,
                      "Verify monotonicity of the produced grid");

    seclend::CommonCliOptions pr;
    std::uint64_t pr_seed = 0;
    CLI::App* price = app.add_subcommand(
        "price", "Price borrower-default indemnification (sheet or scenario grid)");
    price->add_option("--config", pr.config_path, "Run configuration JSON")->required();
    CLI::Option* pr_seed_opt = price->add_option("--seed", pr_seed, "Override the configured seed");
    price->add_option("--workers", pr.workers, "Worker threads (0 = all cores)");
    std::string pr_out;
    CLI::Option* pr_out_opt = price->add_option("--out", pr_out, "Override output directory");
    price->add_flag("--self-check", pr.self_check,
                    "Verify monotonicity of the produced grid");

    CLI11_PARSE(app, argc, argv);

    if (calibrate->parsed())
        return seclend::cmd_calibrate(cal);
    if (haircut->parsed()) {
        if (hc_seed_opt->count())
            hc.seed = hc_seed;
        if (hc_out_opt->count())
            hc.out_dir = hc_out;
        return seclend::cmd_haircut(hc);
    }
    if (price->parsed()) {
        if (pr_seed_opt->count())
            pr.seed = pr_seed;
        if (pr_out_opt->count())
            pr.out_dir = pr_out;
        return seclend::cmd_price(pr);
    }
    return seclend::kExitInputError;
}
