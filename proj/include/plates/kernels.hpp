#ifndef PLATES_KERNELS_HPP
#define PLATES_KERNELS_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>

#include "plates/mesh.hpp"
#include "plates/tensor.hpp"

namespace plates {

using SparseMat = Eigen::SparseMatrix<double>;
using Mat24 = Eigen::Matrix<double, 24, 24>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat16 = Eigen::Matrix<double, 16, 16>;

// Gauss-Legendre points and weights on [0,1].
struct QuadRule {
    std::vector<double> points;
    std::vector<double> weights;
};
QuadRule gauss_rule(int n);

// Element matrices for the uniform hexahedron of extents (hx,hy,hz), trilinear
// shape functions. Strains are measured in the eps-rescaled sense: (i,3)
// components divided by eps, (3,3) by eps^2.
Mat24 hex_stiffness(const SymTensor4& c, double eps, double hx, double hy, double hz,
                    int qorder = 2);
Mat24 hex_mass(double rho, const Eigen::Vector3d& comp_weights, double hx, double hy,
               double hz);
// Gradient form of the third displacement component only.
Mat24 hex_grad3(double hx, double hy, double hz);

// Scatter one element matrix over all cells, serial or OpenMP over cells.
// Both paths produce identical matrices.
SparseMat assemble_slab_matrix(const SlabMesh& mesh, const Mat24& ke, bool parallel);

// 1/2 int C e^eps(u_h) : e^eps(u_h) by direct element-loop quadrature on the
// trilinear interpolant; oracle for the matrix path at qorder 2.
double slab_form_energy(const SlabMesh& mesh, const SymTensor4& c, double eps,
                        const Eigen::VectorXd& u, int qorder, bool parallel);

// Same quadrature driven by an analytic strain field.
double slab_energy_of_strain(const SlabMesh& mesh, const SymTensor4& c,
                             const std::function<Strain3(const Eigen::Vector3d&)>& strain,
                             int qorder);

// Load vector int f(x) . phi_i(x) dx for an arbitrary spatial field.
Eigen::VectorXd assemble_slab_load(
    const SlabMesh& mesh, const std::function<Eigen::Vector3d(const Eigen::Vector3d&)>& f,
    int qorder);

// Plate elements on the uniform rectangle (hx,hy). Membrane: bilinear, 2 dofs
// per corner. Bending and deflection mass: bicubic Hermite, 4 dofs per corner
// in the order (value, d/dx, d/dy, d2/dxdy); the bending form carries the
// 1/12 thickness factor.
Mat8 quad_membrane_stiffness(const ReducedTensor& cr, double hx, double hy);
Mat16 bfs_bending_stiffness(const ReducedTensor& cr, double hx, double hy);
Mat16 bfs_mass(double rho, double hx, double hy);

// Membrane + bending scatter into the stacked plate dof layout.
SparseMat assemble_plate_stiffness(const PlateMesh& mesh, const Mat8& membrane,
                                   const Mat16& bending);
SparseMat assemble_plate_mass(const PlateMesh& mesh, double rho);

// Cubic Hermite 1D basis on [0,h]; f[A][p] is the basis with value (p=0) or
// slope (p=1) equal to one at end A. Arrays are value, first, second
// derivative with respect to x.
void hermite_basis(double x, double h, double val[2][2], double d1[2][2], double d2[2][2]);

}  // namespace plates

#endif
