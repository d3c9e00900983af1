#include "plates/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace plates {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
// Voigt index pairs in packing order (11, 22, 33, 23, 13, 12).
constexpr int kVi[6] = {0, 1, 2, 1, 0, 0};
constexpr int kVj[6] = {0, 1, 2, 2, 2, 1};
}  // namespace

Eigen::Matrix<double, 6, 1> voigt(const Strain3& a)
{
    Eigen::Matrix<double, 6, 1> v;
    for (int p = 0; p < 6; ++p) {
        double w = (p < 3) ? 1.0 : kSqrt2;
        v(p) = w * a(kVi[p], kVj[p]);
    }
    return v;
}

Strain3 from_voigt(const Eigen::Matrix<double, 6, 1>& v)
{
    Strain3 a;
    for (int p = 0; p < 6; ++p) {
        double w = (p < 3) ? 1.0 : 1.0 / kSqrt2;
        a(kVi[p], kVj[p]) = w * v(p);
        a(kVj[p], kVi[p]) = w * v(p);
    }
    return a;
}

Eigen::Vector3d voigt2(const Strain2& a)
{
    return {a(0, 0), a(1, 1), kSqrt2 * a(0, 1)};
}

Strain2 from_voigt2(const Eigen::Vector3d& v)
{
    Strain2 a;
    a(0, 0) = v(0);
    a(1, 1) = v(1);
    a(0, 1) = a(1, 0) = v(2) / kSqrt2;
    return a;
}

Strain3 mix(const Strain2& xi, const Eigen::Vector3d& eta)
{
    Strain3 m;
    m(0, 0) = xi(0, 0);
    m(1, 1) = xi(1, 1);
    m(0, 1) = m(1, 0) = xi(0, 1);
    m(0, 2) = m(2, 0) = eta(0);
    m(1, 2) = m(2, 1) = eta(1);
    m(2, 2) = eta(2);
    return m;
}

Strain3 mix_out(const Eigen::Vector3d& eta)
{
    return mix(Strain2::Zero(), eta);
}

Strain3 planar_embed(const Strain2& xi)
{
    return mix(xi, Eigen::Vector3d::Zero());
}

SymTensor4::SymTensor4()
{
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) e_[i][j][k][l] = 0.0;
}

Strain3 SymTensor4::apply(const Strain3& a) const
{
    Strain3 r = Strain3::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) s += e_[i][j][k][l] * a(k, l);
            r(i, j) = s;
        }
    return r;
}

Eigen::Matrix<double, 6, 6> SymTensor4::voigt_matrix() const
{
    Eigen::Matrix<double, 6, 6> m;
    for (int p = 0; p < 6; ++p)
        for (int q = 0; q < 6; ++q) {
            double wp = (p < 3) ? 1.0 : kSqrt2;
            double wq = (q < 3) ? 1.0 : kSqrt2;
            m(p, q) = wp * wq * e_[kVi[p]][kVj[p]][kVi[q]][kVj[q]];
        }
    return m;
}

SymTensor4 SymTensor4::from_voigt_matrix(const Eigen::Matrix<double, 6, 6>& m)
{
    SymTensor4 t;
    for (int p = 0; p < 6; ++p)
        for (int q = 0; q < 6; ++q) {
            double wp = (p < 3) ? 1.0 : kSqrt2;
            double wq = (q < 3) ? 1.0 : kSqrt2;
            double v = m(p, q) / (wp * wq);
            int i = kVi[p], j = kVj[p], k = kVi[q], l = kVj[q];
            t.e_[i][j][k][l] = v;
            t.e_[j][i][k][l] = v;
            t.e_[i][j][l][k] = v;
            t.e_[j][i][l][k] = v;
        }
    return t;
}

SymTensor4 SymTensor4::identity()
{
    SymTensor4 t;
    auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    t.e_[i][j][k][l] = 0.5 * (d(i, k) * d(j, l) + d(i, l) * d(j, k));
    return t;
}

SymTensor4 SymTensor4::scaled(double s) const
{
    SymTensor4 t(*this);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) t.e_[i][j][k][l] *= s;
    return t;
}

TensorReport validate_tensor(const SymTensor4& t)
{
    TensorReport r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    r.major_symmetry_defect =
                        std::max(r.major_symmetry_defect, std::abs(t(i, j, k, l) - t(k, l, i, j)));
                    r.minor_symmetry_defect =
                        std::max(r.minor_symmetry_defect, std::abs(t(i, j, k, l) - t(j, i, k, l)));
                    r.minor_symmetry_defect =
                        std::max(r.minor_symmetry_defect, std::abs(t(i, j, k, l) - t(i, j, l, k)));
                }
    Eigen::Matrix<double, 6, 6> m = t.voigt_matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(0.5 * (m + m.transpose()));
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.max_eigenvalue = es.eigenvalues().maxCoeff();
    return r;
}

SymTensor4 make_isotropic(double lambda_lame, double mu)
{
    if (!(mu > 0.0) || !(3.0 * lambda_lame + 2.0 * mu > 0.0))
        throw std::domain_error("make_isotropic: need mu > 0 and 3*lambda + 2*mu > 0");
    SymTensor4 t;
    auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    t(i, j, k, l) = lambda_lame * d(i, j) * d(k, l) +
                                    mu * (d(i, k) * d(j, l) + d(i, l) * d(j, k));
    return t;
}

double quadratic_form(const SymTensor4& t, const Strain3& a)
{
    return 0.5 * (t.apply(a).cwiseProduct(a)).sum();
}

bool check_planar_condition(const SymTensor4& t, double tol)
{
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
                if (std::abs(t(i, 2, k, l)) > tol) return false;
    return true;
}

namespace {

// 3x3 system for the out-of-plane components: A eta = -b with
// A_pq = T mix_out(e_q) : mix_out(e_p), b_p = T planar_embed(Xi) : mix_out(e_p).
Eigen::Matrix3d oop_block(const SymTensor4& t)
{
    Eigen::Matrix3d a;
    for (int q = 0; q < 3; ++q) {
        Strain3 tq = t.apply(mix_out(Eigen::Vector3d::Unit(q)));
        for (int p = 0; p < 3; ++p)
            a(p, q) = (tq.cwiseProduct(mix_out(Eigen::Vector3d::Unit(p)))).sum();
    }
    return a;
}

Eigen::Vector3d oop_rhs(const SymTensor4& t, const Strain3& s)
{
    Eigen::Vector3d b;
    Strain3 ts = t.apply(s);
    for (int p = 0; p < 3; ++p) b(p) = (ts.cwiseProduct(mix_out(Eigen::Vector3d::Unit(p)))).sum();
    return b;
}

// Direct elimination with partial pivoting; the systems are tiny and SPD.
Eigen::Vector3d solve3(Eigen::Matrix3d a, Eigen::Vector3d b)
{
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
        if (std::abs(a(piv, c)) < 1e-300)
            throw std::runtime_error("singular out-of-plane system (tensor not positive definite?)");
        if (piv != c) {
            a.row(c).swap(a.row(piv));
            std::swap(b(c), b(piv));
        }
        for (int r = c + 1; r < 3; ++r) {
            double f = a(r, c) / a(c, c);
            a.row(r) -= f * a.row(c);
            b(r) -= f * b(c);
        }
    }
    Eigen::Vector3d x;
    for (int r = 2; r >= 0; --r) {
        double s = b(r);
        for (int c = r + 1; c < 3; ++c) s -= a(r, c) * x(c);
        x(r) = s / a(r, r);
    }
    return x;
}

}  // namespace

Eigen::Vector3d oop_minimizer(const SymTensor4& c, const Strain2& xi)
{
    return solve3(oop_block(c), -oop_rhs(c, planar_embed(xi)));
}

Strain3 apply_M(const SymTensor4& c, const Strain2& xi)
{
    return mix(xi, oop_minimizer(c, xi));
}

ReducedTensor reduced_tensor(const SymTensor4& c)
{
    ReducedTensor r;
    for (int q = 0; q < 3; ++q) {
        Strain2 basis = from_voigt2(Eigen::Vector3d::Unit(q));
        Strain3 stress = c.apply(apply_M(c, basis));
        r.voigt3.col(q) = voigt2(stress.topLeftCorner<2, 2>());
    }
    return r;
}

Strain3 rescale_strain(const Strain3& e, double eps)
{
    if (!(eps > 0.0)) throw std::domain_error("rescale_strain: eps must be positive");
    Strain3 r = e;
    r(0, 2) /= eps;
    r(2, 0) /= eps;
    r(1, 2) /= eps;
    r(2, 1) /= eps;
    r(2, 2) /= eps * eps;
    return r;
}

Eigen::Vector3d mve_stationary(const SymTensor4& c, const Strain2& xi)
{
    return oop_minimizer(c, xi);
}

Trajectory3 mve_evolve(const SymTensor4& c, const SymTensor4& d, const Trajectory2& xi,
                       const Eigen::Vector3d& lambda0)
{
    const std::size_t n = xi.times.size();
    if (xi.values.size() != n) throw std::invalid_argument("mve_evolve: times/values mismatch");
    Trajectory3 out;
    out.times = xi.times;
    out.values.reserve(n);
    if (n == 0) return out;

    const Eigen::Matrix3d ac = oop_block(c);
    const Eigen::Matrix3d ad = oop_block(d);

    Eigen::Vector3d lambda = lambda0;
    out.values.push_back(mix(xi.values[0], lambda));
    for (std::size_t s = 1; s < n; ++s) {
        double dt = xi.times[s] - xi.times[s - 1];
        if (!(dt > 0.0)) throw std::invalid_argument("mve_evolve: times must be increasing");
        // Implicit midpoint for A_D ldot = -(A_C l + bC(Xi) + A_D-part of Xidot),
        // with Xi piecewise linear so Xidot is constant on the interval.
        Strain2 xi_mid = 0.5 * (xi.values[s - 1] + xi.values[s]);
        Strain2 xi_rate = (xi.values[s] - xi.values[s - 1]) / dt;
        Eigen::Vector3d bc = oop_rhs(c, planar_embed(xi_mid));
        Eigen::Vector3d bd = oop_rhs(d, planar_embed(xi_rate));
        // (A_D/dt + A_C/2) l_new = (A_D/dt - A_C/2) l_old - bc - bd
        Eigen::Matrix3d lhs = ad / dt + 0.5 * ac;
        Eigen::Vector3d rhs = (ad / dt - 0.5 * ac) * lambda - bc - bd;
        lambda = solve3(lhs, rhs);
        out.values.push_back(mix(xi.values[s], lambda));
    }
    return out;
}

}  // namespace plates
