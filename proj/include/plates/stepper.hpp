#ifndef PLATES_STEPPER_HPP
#define PLATES_STEPPER_HPP

#include <Eigen/SparseCholesky>
#include <string>
#include <vector>

#include "plates/energetics.hpp"
#include "plates/fem.hpp"

namespace plates {

struct SystemState {
    double t = 0.0;
    Eigen::VectorXd u, v, a;
    AdhesionField z;
    double V_cum = 0.0;      // accumulated viscous dissipation
    double R_cum = 0.0;      // accumulated rate-independent dissipation
    double power_cum = 0.0;  // accumulated work of the external loading
    double K0 = 0.0;         // kinetic energy at the initial time
    double E0 = 0.0;         // stored energy at the initial time
};

struct SchemeConfig {
    double dt = 0.01;
    double T_final = 1.0;
    double beta = 0.25;
    double gamma = 0.5;
    double solver_tol = 1e-10;
    int max_newton = 50;
    int competitor_count = 100;
    double q3 = 1.0;  // weight of the normal jump in the adhesive energy
};

struct StepRecord {
    double t, K, V_cum, R_cum, E_bulk, E_surf, E_total, power_cum, balance_residual;
};

// Staggered incremental scheme: per step, first the semistable debonding
// update at the current jumps, then an implicit Newmark momentum solve with
// the updated adhesion, then midpoint updates of the cumulative tallies.
class Stepper {
public:
    Stepper(const AssembledForms* forms, const LoadData* loads, const ModelParams& params,
            const SchemeConfig& cfg);

    // State at rest with the adhesion candidate projected to semistability.
    SystemState initial_state(const AdhesionField& z_candidate) const;
    SystemState initial_state(double z0 = 1.0) const;

    void step(SystemState& s);

    // Exact minimizer of the incremental debonding problem at frozen jumps:
    // cellwise threshold for b = 0, grid min-cut for b > 0, keep-on-tie.
    AdhesionField semistable_update(const AdhesionField& z_prev,
                                    const std::vector<Eigen::Vector3d>& jumps) const;

    double kinetic_energy(const SystemState& s) const;
    double bulk(const SystemState& s) const;
    double surface(const SystemState& s) const;
    double total_energy(const SystemState& s) const;

    // [K + V_cum + R_cum + E(t)] - [K0 + E0 + power_cum].
    double balance_residual(const SystemState& s) const;

    // Minimum over random admissible competitors z~ <= z of
    // E(t,u,z~) + R(z~ - z) - E(t,u,z); semistability means >= -tol.
    double semistability_margin(const SystemState& s, int n_competitors, unsigned seed) const;

    StepRecord record(const SystemState& s) const;

    const AssembledForms& forms() const { return *forms_; }
    const ModelParams& params() const { return params_; }
    const SchemeConfig& config() const { return cfg_; }

private:
    void momentum_step(SystemState& s, const AdhesionField& z_new);
    Eigen::VectorXd penalty_force(const std::vector<Eigen::Vector3d>& jumps) const;
    SparseMat adhesive_matrix(const AdhesionField& z) const;
    SparseMat penalty_jacobian(const std::vector<Eigen::Vector3d>& jumps) const;
    Eigen::VectorXd solve_system(const SparseMat& m, const Eigen::VectorXd& rhs,
                                 const std::string& sig);

    const AssembledForms* forms_;
    const LoadData* loads_;
    ModelParams params_;
    SchemeConfig cfg_;
    SparseMat mass_bc_, damp_bc_, stiff_bc_;  // Dirichlet rows/cols zeroed
    std::vector<char> pinned_;

    mutable Eigen::SimplicialLDLT<SparseMat> solver_;
    mutable std::string solver_sig_;
};

void write_trajectory_csv(const std::string& path, const std::vector<StepRecord>& records);
std::vector<StepRecord> read_trajectory_csv(const std::string& path);

json state_to_json(const SystemState& s);
SystemState state_from_json(const json& j);

}  // namespace plates

#endif
