#ifndef PLATES_EXPERIMENTS_HPP
#define PLATES_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "plates/stepper.hpp"

namespace plates {

enum class ModelVariant { physical3d, rescaled3d, limit_undamped, limit_damped };

std::string variant_name(ModelVariant v);
ModelVariant variant_from_name(const std::string& name);

// Fully parsed run configuration; parse errors name the offending field.
struct RunConfig {
    ModelVariant variant = ModelVariant::physical3d;
    double eps = 1.0;

    int nx = 4, ny = 2, nz = 2;
    int nz_interface = 2;  // thickness resolution of z in the plate variants

    SymTensor4 C, D;
    double rho = 1.0;

    ModelParams params;
    SchemeConfig scheme;

    AffineField f_spat, w_spat;
    TimeProfile g_f, g_w;
    double z0 = 1.0;

    // Study section.
    std::vector<double> nu_list;
    std::vector<double> eps_list;
    double delta = 1.0;
    SymTensor4 Dstar;
    bool has_dstar = false;

    int output_every = 1;
};

RunConfig parse_config(const json& j);
RunConfig parse_config_file(const std::string& path);

struct BuiltSystem {
    SlabMesh slab;
    PlateMesh plate;
    AssembledForms forms;
    LoadData loads;
    bool is_plate = false;
};

BuiltSystem build_system(const RunConfig& cfg);

struct RunResult {
    std::vector<StepRecord> records;
    std::vector<double> hist_times;                       // sampling times of the histories
    std::vector<Eigen::VectorXd> u_hist, v_hist, a_hist;  // per sample, including t = 0
    std::vector<std::vector<double>> z_hist;
    SystemState final_state;
    double peak_energy = 0.0;
    double max_residual = 0.0;
    double min_margin = 0.0;
    bool admissible = true;
    bool balance_ok = true;
    bool semistab_ok = true;
};

// Runs the configured trajectory and certifies balance (one-sided for the
// undamped limit), admissibility/monotonicity of z, and semistability at
// sampled times.
RunResult run_simulation(const RunConfig& cfg, unsigned seed);

json certification_summary(const RunConfig& cfg, const RunResult& r);

// u(t, x) -> (u1(t/eps, r_eps x), u2(t/eps, r_eps x), eps * u3(t/eps, r_eps x))
// on nodal samples of the fixed reference slab; z is composed with the same
// maps. eps = 1 is the identity.
void rescale_solution(const SlabMesh& mesh, double eps, Eigen::VectorXd& u,
                      std::vector<double>& z);

// Studies; each returns a report as {"tables": {name: {"columns": [...],
// "rows": [[...]]}}, ...} plus scalar summary fields.
json study_nu_to_zero(const RunConfig& cfg, unsigned seed);
json study_dimred_undamped(const RunConfig& cfg, unsigned seed);
json study_dimred_damped(const RunConfig& cfg, unsigned seed);

// Norm of the assembled adhesive coupling between in-plane and deflection
// dofs for a named z profile ("uniform", "top_half", "zero").
double plate_cross_coupling_norm(const RunConfig& cfg, const std::string& z_profile);

void emit_report_csv(const json& report, const std::string& path);

// Re-checks a written trajectory: bounded balance residual (or one-sided if
// undamped), monotone cumulative tallies. Returns 0 on success and fills
// message otherwise.
int certify_trajectory(const std::vector<StepRecord>& records, bool undamped,
                       std::string* message);

}  // namespace plates

#endif
