#ifndef PLATES_TENSOR_HPP
#define PLATES_TENSOR_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace plates {

// Symmetric 3x3 / 2x2 strain-like matrices.
using Strain3 = Eigen::Matrix3d;
using Strain2 = Eigen::Matrix2d;

// Voigt packing order (11, 22, 33, 23, 13, 12), shear entries weighted by
// sqrt(2) so that |voigt(A)|^2 = |A|^2 and the eigenvalues of the 6x6 matrix
// equal the definiteness constants of the tensor on symmetric matrices.
Eigen::Matrix<double, 6, 1> voigt(const Strain3& a);
Strain3 from_voigt(const Eigen::Matrix<double, 6, 1>& v);

// Planar analogue, packing (11, 22, 12) with sqrt(2) on the shear entry.
Eigen::Vector3d voigt2(const Strain2& a);
Strain2 from_voigt2(const Eigen::Vector3d& v);

// mix(Xi, eta): embeds a planar 2x2 block and an out-of-plane vector into a
// symmetric 3x3 matrix; mix_out(eta) is the planar-zero special case.
Strain3 mix(const Strain2& xi, const Eigen::Vector3d& eta);
Strain3 mix_out(const Eigen::Vector3d& eta);
Strain3 planar_embed(const Strain2& xi);

// Fourth-order tensor with major and minor symmetries. Houses the elasticity
// and viscosity moduli.
class SymTensor4 {
public:
    SymTensor4();

    double& operator()(int i, int j, int k, int l) { return e_[i][j][k][l]; }
    double operator()(int i, int j, int k, int l) const { return e_[i][j][k][l]; }

    // T A, contraction over the last two indices.
    Strain3 apply(const Strain3& a) const;

    // Weighted 6x6 Voigt matrix M with voigt(TA) = M voigt(A).
    Eigen::Matrix<double, 6, 6> voigt_matrix() const;
    static SymTensor4 from_voigt_matrix(const Eigen::Matrix<double, 6, 6>& m);

    // T_ijkl = 1/2 (d_ik d_jl + d_il d_jk), the identity on symmetric matrices.
    static SymTensor4 identity();

    SymTensor4 scaled(double s) const;

private:
    double e_[3][3][3][3];
};

struct TensorReport {
    double major_symmetry_defect = 0.0;  // max |T_ijkl - T_klij|
    double minor_symmetry_defect = 0.0;  // max over ij<->ji, kl<->lk swaps
    double min_eigenvalue = 0.0;         // of the weighted Voigt matrix
    double max_eigenvalue = 0.0;

    bool valid(double sym_tol = 1e-12, double eig_floor = 1e-10) const
    {
        return major_symmetry_defect <= sym_tol && minor_symmetry_defect <= sym_tol &&
               min_eigenvalue >= eig_floor;
    }
};

TensorReport validate_tensor(const SymTensor4& t);

// T_ijkl = lambda d_ij d_kl + mu (d_ik d_jl + d_il d_jk).
SymTensor4 make_isotropic(double lambda_lame, double mu);

// Lambda_T(A) = 1/2 TA : A.
double quadratic_form(const SymTensor4& t, const Strain3& a);

// True iff |T_i3kl| <= tol for all i and planar k,l: planar strains then map
// to planar stresses.
bool check_planar_condition(const SymTensor4& t, double tol = 1e-14);

// Minimizer of Lambda_C(mix(Xi, .)) over the out-of-plane components; the
// unique matrix with planar part Xi whose image under C is planar.
Strain3 apply_M(const SymTensor4& c, const Strain2& xi);

// The out-of-plane minimizer itself.
Eigen::Vector3d oop_minimizer(const SymTensor4& c, const Strain2& xi);

// Reduced (plane-stress-type) tensor: Xi -> planar block of C M Xi, stored as
// the weighted 3x3 Voigt matrix acting on voigt2-packed planar strains.
struct ReducedTensor {
    Eigen::Matrix3d voigt3;

    Strain2 apply(const Strain2& xi) const { return from_voigt2(voigt3 * voigt2(xi)); }
};

ReducedTensor reduced_tensor(const SymTensor4& c);

// Planar block unchanged, (i,3) entries divided by eps, (3,3) by eps^2.
Strain3 rescale_strain(const Strain3& e, double eps);

template <class Value>
struct Trajectory {
    std::vector<double> times;
    std::vector<Value> values;
};

using Trajectory2 = Trajectory<Strain2>;
using Trajectory3 = Trajectory<Strain3>;

// Temporally nonlocal extension of apply_M: the out-of-plane components solve
// the linear ODE expressing (C Y + D Ydot) : mix_out(zeta) = 0 for all zeta,
// integrated by implicit midpoint on the trajectory's own time grid. The
// returned values are mix(Xi(t_n), lambda(t_n)).
Trajectory3 mve_evolve(const SymTensor4& c, const SymTensor4& d, const Trajectory2& xi,
                       const Eigen::Vector3d& lambda0);

// Stationary value of the above ODE for constant Xi; also the natural default
// for lambda0.
Eigen::Vector3d mve_stationary(const SymTensor4& c, const Strain2& xi);

}  // namespace plates

#endif
