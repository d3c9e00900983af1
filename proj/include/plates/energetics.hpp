#ifndef PLATES_ENERGETICS_HPP
#define PLATES_ENERGETICS_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "plates/tensor.hpp"

namespace plates {

using SparseMat = Eigen::SparseMatrix<double>;

struct ModelParams {
    double kappa = 1.0;         // adhesive stiffness
    double lambda_yosida = 1.0; // cone-penalty parameter
    double a0 = 1.0;            // adhesion energy coefficient
    double a1 = 1.0;            // rate-independent dissipation coefficient
    double b = 0.0;             // perimeter coefficient
    double nu = 0.0;            // cone-penalty weight
    double rho = 1.0;           // mass density
    Eigen::Vector3d n_interface = Eigen::Vector3d::UnitX();

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Piecewise-constant adhesion variable on the structured interface-cell grid,
// indexed idx = i_along * n_thick + i_thick.
struct AdhesionField {
    std::vector<double> values;      // in [0,1]; {0,1} when b > 0
    std::vector<double> cell_areas;
    int n_along = 0;
    int n_thick = 0;
    double h_along = 0.0;  // cell extent along the interface
    double h_thick = 0.0;  // cell extent through the thickness

    int idx(int ia, int it) const { return ia * n_thick + it; }
    int size() const { return n_along * n_thick; }

    static AdhesionField uniform(int n_along, int n_thick, double h_along, double h_thick,
                                 double value);
    bool admissible(bool binary_required) const;
    double integral() const;  // sum of area * value
};

// Scalar time profile g(t) = c0 + c1 t + c2 t^2 + c3 t^3 + amp sin(freq t + phase)
// with exact derivatives up to third order.
struct TimeProfile {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
    double amp = 0.0, freq = 0.0, phase = 0.0;

    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;
    double d3(double t) const;
};

// External loading F(t) = g_f b_f - g_w b_stiff - g_w' b_damp - g_w'' b_mass,
// for a volume force f(t,x) = g_f(t) f_spat(x) and Dirichlet datum
// w(t,x) = g_w(t) W(x). The spatial vectors are assembled by the
// discretization layer against the same test space as the solution dofs.
struct LoadData {
    Eigen::VectorXd b_f;      // integral f_spat . phi
    Eigen::VectorXd b_stiff;  // integral C e(W) : e(phi)
    Eigen::VectorXd b_damp;   // integral D e(W) : e(phi)
    Eigen::VectorXd b_mass;   // integral rho W . phi (component-weighted)
    TimeProfile g_f;
    TimeProfile g_w;

    Eigen::VectorXd force(double t, int n) const;
    Eigen::VectorXd force_rate(double t, int n) const;
};

struct YosidaPair {
    Eigen::Vector3d alpha;
    double alpha_hat;
};

// alpha_hat = dist^2(v, K)/lambda with K = {v : v.n >= 0}; alpha its gradient.
YosidaPair yosida_pair(const Eigen::Vector3d& v, const Eigen::Vector3d& n, double lambda);

// 0.5 v^T M v with the mass matrix carrying density and component weights.
double kinetic(const SparseMat& mass, const Eigen::VectorXd& v);

// 0.5 v^T D v; epsilon weights are baked into D at assembly time.
double viscous_dissipation(const SparseMat& damping, const Eigen::VectorXd& v);

// 0.5 u^T K u - F . u.
double bulk_energy(const SparseMat& stiffness, const Eigen::VectorXd& u,
                   const Eigen::VectorXd& F);

// Explicit partial time derivative of the bulk energy: -Fdot(t) . u.
double power_of_loads(double t, const Eigen::VectorXd& u, const LoadData& loads);

// Tagged result of the rate-independent dissipation potential: inadmissible
// whenever z increases anywhere.
struct Dissipation {
    bool admissible = true;
    double value = 0.0;
};

Dissipation dissipation_R(const AdhesionField& z_old, const AdhesionField& z_new, double a1);

// 4-neighbor grid total variation: sum over interior edges of
// edge_length * |z_left - z_right|.
double perimeter(const AdhesionField& z);

// nu * sum alpha_hat(planar jump) * area + (kappa/2) * sum z * |jump|_q3^2 * area
// - a0 * sum z * area + b * perimeter(z), with |v|_q3^2 = v1^2 + v2^2 + q3 v3^2.
// Requires binary z when b > 0.
double surface_energy(const std::vector<Eigen::Vector3d>& jumps, const AdhesionField& z,
                      const ModelParams& p, double q3 = 1.0);

}  // namespace plates

#endif
