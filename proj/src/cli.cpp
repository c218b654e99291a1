#include "seclend/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "seclend/calibration.hpp"
#include "seclend/format.hpp"
#include "seclend/haircut.hpp"
#include "seclend/indemnity.hpp"
#include "seclend/io.hpp"

namespace seclend {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
    if (!obj.is_object())
        throw std::invalid_argument("config: " + context + " must be a JSON object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + context);
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config '" + path + "'");
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config '" + path + "': " + e.what());
    }
    return cfg;
}

CreditParams parse_credit(const json& j, json* assumptions) {
    check_keys(j, {"params", "cds"}, "credit");
    if (j.contains("params") == j.contains("cds"))
        throw std::invalid_argument("config: credit needs exactly one of 'params' or 'cds'");
    if (j.contains("params")) {
        check_keys(j.at("params"), {"k", "ybar", "sigma", "y0", "recovery", "rho"},
                   "credit.params");
        return require_valid(j.at("params").get<CreditParams>());
    }
    const json& cds = j.at("cds");
    check_keys(cds, {"spread", "recovery", "k", "sigma", "rho", "y0"}, "credit.cds");
    CdsOverrides overrides;
    if (cds.contains("k"))
        overrides.k = cds.at("k").get<double>();
    else if (assumptions)
        (*assumptions)["credit_k_assumed"] = overrides.k;
    if (cds.contains("sigma"))
        overrides.sigma = cds.at("sigma").get<double>();
    else if (assumptions)
        (*assumptions)["credit_sigma_assumed"] = overrides.sigma;
    overrides.rho = cds.value("rho", 0.0);
    if (cds.contains("y0"))
        overrides.y0 = cds.at("y0").get<double>();
    // File spreads are decimal fractions; the credit-triangle helper quotes bps.
    return cds_to_credit(cds.at("spread").get<double>() * 1e4, cds.at("recovery").get<double>(),
                         overrides);
}

CreditGrade parse_grade(const json& j, json* assumptions) {
    check_keys(j, {"label", "params", "cds"}, "grade");
    CreditGrade g;
    g.label = j.at("label").get<std::string>();
    json credit;
    if (j.contains("params"))
        credit["params"] = j.at("params");
    if (j.contains("cds"))
        credit["cds"] = j.at("cds");
    g.params = parse_credit(credit, assumptions);
    return g;
}

RatingTarget parse_target(const json& j) {
    if (j.is_object())
        check_keys(j, {"criterion", "threshold", "label", "moodys_label"}, "target");
    return require_valid(j.get<RatingTarget>());
}

struct RunConfig {
    DejdParams dejd;
    bool asset_calibrated = false;
    std::string series_csv;
    std::optional<CreditParams> credit;
    TransactionSpec txn;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    double es_confidence = 0.99;
    SolverSettings solver;
    std::string out_dir = ".";
    json assumptions; // echoed into the sidecar's provenance block
};

RunConfig parse_common(const json& cfg, const CommonCliOptions& opts, bool credit_required) {
    check_keys(cfg,
               {"schema_version", "asset", "credit", "transaction", "simulation", "solver",
                "haircut", "pricing", "output", "provenance"},
               "top level");
    if (!cfg.contains("schema_version") || cfg.at("schema_version").get<int>() != 1)
        throw std::invalid_argument("config: schema_version must be 1");

    RunConfig rc;

    const json& asset = cfg.at("asset");
    check_keys(asset, {"dejd", "series_csv", "zero_drift"}, "asset");
    if (asset.contains("dejd") == asset.contains("series_csv"))
        throw std::invalid_argument(
            "config: asset needs exactly one of 'dejd' or 'series_csv'");
    if (asset.contains("dejd")) {
        check_keys(asset.at("dejd"), {"mu", "sigma_a", "lambda_a", "p_u", "eta", "theta"},
                   "asset.dejd");
        rc.dejd = require_valid(asset.at("dejd").get<DejdParams>());
    } else {
        rc.series_csv = asset.at("series_csv").get<std::string>();
        const ReturnSeries series = load_return_series_csv(rc.series_csv);
        const FitReport fit = fit_dejd(series, DejdParams{0.0, 0.2, 10.0, 0.5, 50.0, 50.0});
        rc.dejd = fit.params;
        if (asset.value("zero_drift", false))
            rc.dejd.mu = 0.0;
        rc.asset_calibrated = true;
        rc.assumptions["calibrated_from"] = rc.series_csv;
        rc.assumptions["calibration_log_likelihood"] = fit.log_likelihood;
    }

    if (cfg.contains("credit"))
        rc.credit = parse_credit(cfg.at("credit"), &rc.assumptions);
    else if (credit_required)
        throw std::invalid_argument("config: 'credit' section is required for this command");

    check_keys(cfg.at("transaction"),
               {"haircut", "liquidity_spread", "mpr_days", "side", "notional", "horizon"},
               "transaction");
    rc.txn = require_valid(cfg.at("transaction").get<TransactionSpec>());

    const json& sim = cfg.at("simulation");
    check_keys(sim, {"n_paths", "seed", "es_confidence"}, "simulation");
    if (!sim.contains("seed"))
        throw std::invalid_argument(
            "config: simulation.seed is mandatory (no wall-clock seeding)");
    rc.n_paths = sim.at("n_paths").get<std::size_t>();
    if (rc.n_paths == 0)
        throw std::invalid_argument("config: simulation.n_paths must be >= 1");
    rc.seed = sim.at("seed").get<std::uint64_t>();
    rc.es_confidence = sim.value("es_confidence", 0.99);
    if (!(rc.es_confidence > 0.0 && rc.es_confidence < 1.0))
        throw std::invalid_argument("config: es_confidence must lie in (0, 1)");

    if (cfg.contains("solver")) {
        check_keys(cfg.at("solver"), {"resolution", "h_max"}, "solver");
        rc.solver.resolution = cfg.at("solver").value("resolution", 1e-4);
        if (cfg.at("solver").contains("h_max"))
            rc.solver.h_max = cfg.at("solver").at("h_max").get<double>();
    }
    if (std::isnan(rc.solver.h_max))
        rc.solver.h_max = default_h_max(rc.txn.side);

    if (cfg.contains("output")) {
        check_keys(cfg.at("output"), {"dir"}, "output");
        rc.out_dir = cfg.at("output").value("dir", ".");
    }
    if (opts.out_dir)
        rc.out_dir = *opts.out_dir;
    if (opts.seed)
        rc.seed = *opts.seed;
    return rc;
}

json resolved_common(const RunConfig& rc) {
    json out;
    out["schema_version"] = 1;
    out["asset"] = json{{"dejd", rc.dejd}};
    if (rc.credit)
        out["credit"] = json{{"params", *rc.credit}};
    out["transaction"] = rc.txn;
    out["simulation"] = json{{"n_paths", rc.n_paths},
                             {"seed", rc.seed},
                             {"es_confidence", rc.es_confidence}};
    out["solver"] = json{{"resolution", rc.solver.resolution}, {"h_max", rc.solver.h_max}};
    out["output"] = json{{"dir", rc.out_dir}};
    if (!rc.assumptions.empty())
        out["provenance"] = rc.assumptions;
    return out;
}

void write_text(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const TargetUnreachableError*>(&e))
        return kExitTargetUnreachable;
    if (dynamic_cast<const FitError*>(&e))
        return kExitNoConvergence;
    return kExitInputError;
}

bool schedule_monotone(const HaircutSchedule& s, std::string* why) {
    for (std::size_t gi = 0; gi < s.cells.size(); ++gi)
        for (std::size_t ti = 1; ti < s.cells[gi].size(); ++ti)
            if (s.cells[gi][ti].haircut > s.cells[gi][ti - 1].haircut + 1e-12) {
                *why = "row " + s.grades[gi].label + " not nonincreasing left-to-right";
                return false;
            }
    for (std::size_t gi = 1; gi < s.cells.size(); ++gi)
        for (std::size_t ti = 0; ti < s.cells[gi].size(); ++ti)
            if (s.cells[gi][ti].haircut + 1e-12 < s.cells[gi - 1][ti].haircut) {
                *why = "column " + std::to_string(ti) + " not nondecreasing top-to-bottom";
                return false;
            }
    return true;
}

bool scenario_monotone(const ScenarioGrid& grid, std::string* why) {
    const auto& ax = grid.axes;
    for (std::size_t ci = 0; ci < ax.criteria.size(); ++ci)
        for (std::size_t bi = 0; bi < ax.borrowers.size(); ++bi)
            for (std::size_t mi = 0; mi < ax.mpr_days.size(); ++mi)
                for (std::size_t hi = 1; hi < ax.haircuts.size(); ++hi) {
                    if (!(ax.haircuts[hi] > ax.haircuts[hi - 1]))
                        continue;
                    const auto& prev = grid.at(ci, bi, mi, hi - 1);
                    const auto& cur = grid.at(ci, bi, mi, hi);
                    if (prev.ok && cur.ok && cur.sheet.total > prev.sheet.total + 1e-12) {
                        *why = "total not nonincreasing along the haircut axis";
                        return false;
                    }
                }
    return true;
}

} // namespace

int cmd_calibrate(const CalibrateCliOptions& opts) {
    try {
        ReturnSeries series;
        try {
            series = load_return_series_csv(opts.csv_path);
        } catch (const CsvError& e) {
            std::cerr << "calibrate: " << opts.csv_path << ": " << e.what() << "\n";
            return kExitInputError;
        }
        FitReport report;
        try {
            report = fit_dejd(series, DejdParams{0.0, 0.2, 10.0, 0.5, 50.0, 50.0});
        } catch (const FitError& e) {
            std::cerr << "calibrate: " << e.what() << "\n";
            return kExitNoConvergence;
        }
        if (opts.zero_drift)
            report.params.mu = 0.0;

        const fs::path out_dir(opts.out_dir);
        write_text(out_dir / "fit_report.json", dump_json(json(report)));
        json resolved;
        resolved["csv"] = opts.csv_path;
        resolved["zero_drift"] = opts.zero_drift;
        resolved["observations"] = series.log_returns.size();
        write_text(out_dir / "calibrate_resolved_config.json", dump_json(resolved));

        std::cout << "fitted DEJD parameters (" << series.log_returns.size()
                  << " daily returns from " << opts.csv_path << ")\n"
                  << dump_json(json(report.params));
        if (report.short_history_warning)
            std::cout << "warning: fewer than ~5 years of daily data\n";
        std::cout << "wrote " << (out_dir / "fit_report.json").string() << "\n";
        return report.converged ? kExitOk : kExitNoConvergence;
    } catch (const std::exception& e) {
        std::cerr << "calibrate: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_haircut(const CommonCliOptions& opts) {
    try {
        const json cfg = load_config(opts.config_path);
        const json hc = cfg.value("haircut", json::object());
        check_keys(hc, {"mode", "target", "targets", "grades", "pd_threshold"}, "haircut");
        const std::string mode = hc.value("mode", std::string("joint"));
        if (mode != "joint" && mode != "independent")
            throw std::invalid_argument("config: haircut.mode must be joint or independent");

        RunConfig rc = parse_common(cfg, opts, /*credit_required=*/false);

        std::vector<RatingTarget> targets;
        if (hc.contains("target") == hc.contains("targets"))
            throw std::invalid_argument(
                "config: haircut needs exactly one of 'target' or 'targets'");
        if (hc.contains("target"))
            targets.push_back(parse_target(hc.at("target")));
        else
            for (const auto& t : hc.at("targets"))
                targets.push_back(parse_target(t));

        HaircutSchedule schedule;
        schedule.targets = targets;
        if (mode == "independent") {
            if (hc.contains("grades"))
                throw std::invalid_argument(
                    "config: independent mode prices the asset only; grades are not allowed");
            schedule.grades = {CreditGrade{"asset_only", CreditParams{}}};
            schedule.cells.resize(1);
            for (const auto& target : targets)
                schedule.cells[0].push_back(
                    solve_haircut_independent(rc.dejd, rc.txn, target, rc.solver));
        } else {
            std::vector<CreditGrade> grades;
            if (hc.contains("grades"))
                for (const auto& g : hc.at("grades"))
                    grades.push_back(parse_grade(g, &rc.assumptions));
            else if (rc.credit)
                grades.push_back(CreditGrade{"borrower", *rc.credit});
            else
                throw std::invalid_argument(
                    "config: joint mode needs 'credit' or haircut.grades");
            ScheduleOptions sched_opts;
            sched_opts.solver = rc.solver;
            sched_opts.workers = opts.workers;
            schedule = haircut_schedule(rc.dejd, grades, targets, rc.txn, rc.n_paths, rc.seed,
                                        sched_opts);
        }

        const fs::path out_dir(rc.out_dir);
        std::ostringstream csv;
        write_schedule_csv(schedule, csv);
        write_text(out_dir / "haircut_schedule.csv", csv.str());

        json resolved = resolved_common(rc);
        resolved["haircut"]["mode"] = mode;
        resolved["haircut"]["targets"] = schedule.targets;
        if (mode == "joint") {
            json grades = json::array();
            for (const auto& g : schedule.grades)
                grades.push_back(json{{"label", g.label}, {"params", g.params}});
            resolved["haircut"]["grades"] = grades;
        }
        write_text(out_dir / "haircut_resolved_config.json", dump_json(resolved));

        std::cout << csv.str();
        if (opts.self_check) {
            std::string why;
            if (!schedule_monotone(schedule, &why)) {
                std::cerr << "self-check failed: " << why << "\n";
                return kExitInputError;
            }
            std::cout << "self-check: schedule monotonicity OK\n";
        }
        std::cout << "wrote " << (out_dir / "haircut_schedule.csv").string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "haircut: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_price(const CommonCliOptions& opts) {
    try {
        const json cfg = load_config(opts.config_path);
        const json pricing = cfg.value("pricing", json::object());
        check_keys(pricing,
                   {"criterion", "pd_threshold", "cost_of_capital", "funding_spread", "replay",
                    "scenario"},
                   "pricing");

        PricingOptions popts;
        popts.criterion =
            criterion_from_string(pricing.value("criterion", std::string("expected_loss")));
        if (pricing.contains("pd_threshold"))
            popts.pd_threshold = pricing.at("pd_threshold").get<double>();
        popts.cost_of_capital = pricing.value("cost_of_capital", 0.15);
        popts.funding_spread = pricing.value("funding_spread", 0.01);

        const bool replay = pricing.contains("replay");
        const bool scenario = pricing.contains("scenario");
        if (replay && scenario)
            throw std::invalid_argument("config: pricing.replay and pricing.scenario conflict");

        RunConfig rc = parse_common(cfg, opts, /*credit_required=*/!replay && !scenario);
        popts.es_confidence = rc.es_confidence;
        popts.solver = rc.solver;
        popts.workers = opts.workers;
        const fs::path out_dir(rc.out_dir);

        if (scenario) {
            const json& sc = pricing.at("scenario");
            check_keys(sc, {"haircuts", "borrowers", "criteria", "mpr_days"},
                       "pricing.scenario");
            ScenarioAxes axes;
            axes.haircuts =
                sc.contains("haircuts")
                    ? sc.at("haircuts").get<std::vector<double>>()
                    : std::vector<double>{rc.txn.haircut};
            if (!sc.contains("borrowers"))
                throw std::invalid_argument("config: pricing.scenario.borrowers is required");
            for (const auto& b : sc.at("borrowers"))
                axes.borrowers.push_back(parse_grade(b, &rc.assumptions));
            if (sc.contains("criteria"))
                for (const auto& c : sc.at("criteria"))
                    axes.criteria.push_back(criterion_from_string(c.get<std::string>()));
            else
                axes.criteria.push_back(popts.criterion);
            axes.mpr_days = sc.contains("mpr_days") ? sc.at("mpr_days").get<std::vector<int>>()
                                                    : std::vector<int>{rc.txn.mpr_days};

            const ScenarioGrid grid =
                scenario_grid(rc.dejd, axes, rc.txn, rc.n_paths, rc.seed, popts);

            std::ostringstream csv;
            write_scenario_csv(grid, csv);
            write_text(out_dir / "pricing_scenarios.csv", csv.str());
            json resolved = resolved_common(rc);
            resolved["pricing"] = json{{"criterion", to_string(popts.criterion)},
                                       {"cost_of_capital", popts.cost_of_capital},
                                       {"funding_spread", popts.funding_spread}};
            if (!std::isnan(popts.pd_threshold))
                resolved["pricing"]["pd_threshold"] = popts.pd_threshold;
            json sc_resolved;
            sc_resolved["haircuts"] = axes.haircuts;
            sc_resolved["mpr_days"] = axes.mpr_days;
            json crit = json::array();
            for (auto c : axes.criteria)
                crit.push_back(to_string(c));
            sc_resolved["criteria"] = crit;
            json borrowers = json::array();
            for (const auto& b : axes.borrowers)
                borrowers.push_back(json{{"label", b.label}, {"params", b.params}});
            sc_resolved["borrowers"] = borrowers;
            resolved["pricing"]["scenario"] = sc_resolved;
            write_text(out_dir / "price_resolved_config.json", dump_json(resolved));

            std::cout << scenario_summary(grid);
            if (opts.self_check) {
                std::string why;
                if (!scenario_monotone(grid, &why)) {
                    std::cerr << "self-check failed: " << why << "\n";
                    return kExitInputError;
                }
                std::cout << "self-check: scenario monotonicity OK\n";
            }
            std::cout << "wrote " << (out_dir / "pricing_scenarios.csv").string() << "\n";
            for (const auto& cell : grid.cells)
                if (!cell.ok && cell.error.find("unreachable") != std::string::npos)
                    return kExitTargetUnreachable;
            return kExitOk;
        }

        IndemnitySheet sheet;
        json pricing_resolved{{"criterion", to_string(popts.criterion)},
                              {"cost_of_capital", popts.cost_of_capital},
                              {"funding_spread", popts.funding_spread}};
        if (!std::isnan(popts.pd_threshold))
            pricing_resolved["pd_threshold"] = popts.pd_threshold;
        if (replay) {
            const json& rj = pricing.at("replay");
            check_keys(rj, {"el", "es", "triple_a_haircut"}, "pricing.replay");
            sheet = price_indemnity(rc.txn.haircut, rj.at("triple_a_haircut").get<double>(),
                                    rj.at("el").get<double>(), rj.at("es").get<double>(),
                                    popts.cost_of_capital, popts.funding_spread);
            pricing_resolved["replay"] = rj;
        } else {
            sheet = pricing_sheet(rc.dejd, *rc.credit, rc.txn, rc.n_paths, rc.seed, popts);
        }

        std::ostringstream csv;
        write_sheet_csv(sheet, csv);
        write_text(out_dir / "pricing_sheet.csv", csv.str());
        write_text(out_dir / "pricing_sheet.json", dump_json(json(sheet)));
        json resolved = resolved_common(rc);
        resolved["pricing"] = pricing_resolved;
        write_text(out_dir / "price_resolved_config.json", dump_json(resolved));

        std::cout << sheet_summary(sheet);
        std::cout << "wrote " << (out_dir / "pricing_sheet.json").string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "price: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

} // namespace seclend
