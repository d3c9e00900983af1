#ifndef PLATES_FEM_HPP
#define PLATES_FEM_HPP

#include <functional>
#include <string>

#include "plates/energetics.hpp"
#include "plates/json_io.hpp"
#include "plates/kernels.hpp"
#include "plates/mesh.hpp"

namespace plates {

// Bilinear forms and interface plumbing for one model variant, all in a
// single dof numbering. Matrices are assembled without boundary elimination;
// dirichlet_dofs lists the pinned rows (solution dofs are homogeneous there,
// the inhomogeneous datum enters through the load vector).
struct AssembledForms {
    SparseMat mass;
    SparseMat stiffness;
    SparseMat damping;
    SparseMat grad3;  // gradient form of the out-of-plane component
    SparseMat jump;   // (3 * n interface cells) x n_dofs, jumps at cell midpoints

    std::vector<double> iface_area;
    std::vector<double> iface_x3;  // thickness coordinate of each interface cell midpoint
    int n_iface_along = 0;
    int n_iface_thick = 0;
    double h_along = 0.0;
    double h_thick = 0.0;

    std::vector<int> dirichlet_dofs;
    int n_dofs = 0;

    AdhesionField make_adhesion(double value) const;
    std::vector<Eigen::Vector3d> jumps_of(const Eigen::VectorXd& u) const;
};

// 3D slab forms; `rescaled` switches on the thin-domain weights: strains are
// eps-rescaled, the viscous form carries an extra factor eps, the mass the
// component weights (eps^2 rho, eps^2 rho, rho).
AssembledForms assemble_slab_forms(const SlabMesh& mesh, const SymTensor4& C,
                                   const SymTensor4& D_eps, double rho, double eps,
                                   bool rescaled, bool parallel = false);

// Limit plate forms: membrane + bending stiffness from the reduced tensor of
// C (and of D when damped), inertia on the deflection only. The interface
// grid resolves the thickness with nz_interface cells.
AssembledForms assemble_plate_forms(const PlateMesh& mesh, const SymTensor4& C,
                                    const SymTensor4& D, double rho, bool damped,
                                    int nz_interface);

// f(x) = A x + b.
struct AffineField {
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();

    Eigen::Vector3d eval(const Eigen::Vector3d& x) const { return A * x + b; }
};

// Loading F(t) built from a volume force g_f(t) f_spat(x) and a continuous
// Dirichlet lifting g_w(t) W(x); the lifting terms reuse the assembled forms
// so the discrete balance bookkeeping is exact.
LoadData build_slab_loads(const SlabMesh& mesh, const AssembledForms& forms,
                          const AffineField& f_spat, const AffineField& w_spat,
                          const TimeProfile& g_f, const TimeProfile& g_w);

// Plate analogue; f_spat is sampled at x3 = 0 and W must be x3-independent
// (Kirchhoff-Love datum with affine deflection).
LoadData build_plate_loads(const PlateMesh& mesh, const AssembledForms& forms,
                           const AffineField& f_spat, const AffineField& w_spat,
                           const TimeProfile& g_f, const TimeProfile& g_w);

// Nodal interpolation of a spatial field on the slab (duplicated interface
// nodes get the same value; use for continuous fields only).
Eigen::VectorXd slab_interpolate(const SlabMesh& mesh, const AffineField& w);

// Kirchhoff-Love displacement built from plate dofs: u = (ubar - x3 grad u3, u3)
// with the deflection and its derivatives evaluated through the Hermite basis,
// so the (i,3) strain components vanish identically.
struct KLField {
    const PlateMesh* mesh = nullptr;
    Eigen::VectorXd dofs;

    // side < 0 / > 0 selects the interface side when x1 = 0.
    Eigen::Vector3d displacement(const Eigen::Vector3d& x, int side = 0) const;
    Strain3 strain(const Eigen::Vector3d& x, int side = 0) const;
    Strain2 e_plan(const Eigen::Vector3d& x, int side = 0) const;
};

// Sparse map from plate dofs to slab nodal displacement dofs (evaluation of
// the lifted field at slab nodes, interface sides respected).
SparseMat kl_lift_matrix(const PlateMesh& plate, const SlabMesh& slab);

// Plate dofs minimizing || L p - u ||_G for an SPD metric G; a small Tikhonov
// term handles plate dofs invisible to the slab nodes (twist dofs when the
// planar grids coincide).
Eigen::VectorXd kl_project(const SparseMat& lift, const SparseMat& metric,
                           const Eigen::VectorXd& u, double reg = 1e-10);

// Minimum over random admissible fields (zero on the Dirichlet faces) of
// [eps int D_eps e^eps(v):e^eps(v)] / [int |grad v3|^2]; fields with zero
// denominator are skipped.
double korn_check(const SlabMesh& mesh, const SymTensor4& D_eps, double eps, int n_samples,
                  unsigned seed);

void zero_rows_cols(SparseMat& m, const std::vector<int>& dofs, bool unit_diagonal);
void zero_entries(Eigen::VectorXd& v, const std::vector<int>& dofs);

void export_matrix(const SparseMat& m, const std::string& path);
json slab_mesh_to_json(const SlabMesh& mesh);

}  // namespace plates

#endif
