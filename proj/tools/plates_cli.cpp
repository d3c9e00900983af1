#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "plates/experiments.hpp"

using namespace plates;
namespace fs = std::filesystem;

namespace {

json records_to_json(const std::vector<StepRecord>& recs)
{
    json a = json::array();
    for (const auto& r : recs)
        a.push_back({{"t", r.t},
                     {"K", r.K},
                     {"V_cum", r.V_cum},
                     {"R_cum", r.R_cum},
                     {"E_bulk", r.E_bulk},
                     {"E_surf", r.E_surf},
                     {"E_total", r.E_total},
                     {"power_cum", r.power_cum},
                     {"balance_residual", r.balance_residual}});
    return a;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"adhesive contact simulator for visco-elastodynamic plates"};
    app.require_subcommand(1);

    std::string config_path, trajectory_path, study_kind;
    std::string out_dir = ".";
    std::string format = "csv";
    unsigned seed = 1;
    double dt_override = 0.0;
    bool undamped = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "seed for randomized certification checks");
        cmd->add_option("--dt", dt_override, "override the configured time step");
        cmd->add_option("--out-dir", out_dir, "output directory");
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* sim = app.add_subcommand("simulate", "run one configured trajectory");
    sim->add_option("config", config_path, "config JSON file")->required();
    add_common(sim);

    CLI::App* study = app.add_subcommand("study", "run a scaling-family study");
    study->add_option("kind", study_kind, "nu | dimred-undamped | dimred-damped")
        ->required()
        ->check(CLI::IsMember({"nu", "dimred-undamped", "dimred-damped"}));
    study->add_option("config", config_path, "config JSON file")->required();
    add_common(study);

    CLI::App* cert = app.add_subcommand("certify", "re-check a written trajectory");
    cert->add_option("trajectory", trajectory_path, "trajectory CSV file")->required();
    cert->add_flag("--undamped", undamped, "apply the one-sided energy inequality");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cert->parsed()) {
            auto recs = read_trajectory_csv(trajectory_path);
            std::string msg;
            int rc = certify_trajectory(recs, undamped, &msg);
            std::cout << (rc == 0 ? "certified: " : "rejected: ") << msg << "\n";
            return rc;
        }

        RunConfig cfg = parse_config_file(config_path);
        if (dt_override > 0.0) cfg.scheme.dt = dt_override;
        fs::create_directories(out_dir);

        if (sim->parsed()) {
            RunResult r = run_simulation(cfg, seed);
            if (format == "csv") {
                write_trajectory_csv((fs::path(out_dir) / "trajectory.csv").string(),
                                     r.records);
            } else {
                save_json_file((fs::path(out_dir) / "trajectory.json").string(),
                               records_to_json(r.records));
            }
            save_json_file((fs::path(out_dir) / "checkpoint.json").string(),
                           state_to_json(r.final_state));
            json summary = certification_summary(cfg, r);
            save_json_file((fs::path(out_dir) / "certification.json").string(), summary);
            std::cout << summary.dump(2) << "\n";
            return summary["passed"].get<bool>() ? 0 : 1;
        }

        json report;
        if (study_kind == "nu") report = study_nu_to_zero(cfg, seed);
        if (study_kind == "dimred-undamped") report = study_dimred_undamped(cfg, seed);
        if (study_kind == "dimred-damped") report = study_dimred_damped(cfg, seed);
        if (format == "csv")
            emit_report_csv(report, (fs::path(out_dir) / "report.csv").string());
        else
            save_json_file((fs::path(out_dir) / "report.json").string(), report);
        json summary = report;
        summary.erase("tables");
        std::cout << summary.dump(2) << "\n";
        return report["passed"].get<bool>() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
