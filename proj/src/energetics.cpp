#include "plates/energetics.hpp"

#include <cmath>
#include <stdexcept>

namespace plates {

void ModelParams::validate() const
{
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
    if (!(lambda_yosida > 0.0)) throw std::invalid_argument("lambda_yosida must be > 0");
    if (!(a0 > 0.0)) throw std::invalid_argument("a0 must be > 0");
    if (!(a1 > 0.0)) throw std::invalid_argument("a1 must be > 0");
    if (!(b >= 0.0)) throw std::invalid_argument("b must be >= 0");
    if (!(nu >= 0.0)) throw std::invalid_argument("nu must be >= 0");
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
    if (std::abs(n_interface.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("n_interface must be a unit vector");
}

AdhesionField AdhesionField::uniform(int n_along, int n_thick, double h_along, double h_thick,
                                     double value)
{
    AdhesionField z;
    z.n_along = n_along;
    z.n_thick = n_thick;
    z.h_along = h_along;
    z.h_thick = h_thick;
    z.values.assign(std::size_t(n_along) * n_thick, value);
    z.cell_areas.assign(std::size_t(n_along) * n_thick, h_along * h_thick);
    return z;
}

bool AdhesionField::admissible(bool binary_required) const
{
    for (double v : values) {
        if (v < 0.0 || v > 1.0) return false;
        if (binary_required && v != 0.0 && v != 1.0) return false;
    }
    return true;
}

double AdhesionField::integral() const
{
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += cell_areas[i] * values[i];
    return s;
}

double TimeProfile::value(double t) const
{
    return c0 + t * (c1 + t * (c2 + t * c3)) + amp * std::sin(freq * t + phase);
}

double TimeProfile::d1(double t) const
{
    return c1 + t * (2.0 * c2 + 3.0 * c3 * t) + amp * freq * std::cos(freq * t + phase);
}

double TimeProfile::d2(double t) const
{
    return 2.0 * c2 + 6.0 * c3 * t - amp * freq * freq * std::sin(freq * t + phase);
}

double TimeProfile::d3(double t) const
{
    return 6.0 * c3 - amp * freq * freq * freq * std::cos(freq * t + phase);
}

namespace {

void axpy(Eigen::VectorXd& out, double a, const Eigen::VectorXd& v)
{
    if (a != 0.0 && v.size() > 0) out += a * v;
}

}  // namespace

Eigen::VectorXd LoadData::force(double t, int n) const
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    axpy(out, g_f.value(t), b_f);
    axpy(out, -g_w.value(t), b_stiff);
    axpy(out, -g_w.d1(t), b_damp);
    axpy(out, -g_w.d2(t), b_mass);
    return out;
}

Eigen::VectorXd LoadData::force_rate(double t, int n) const
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    axpy(out, g_f.d1(t), b_f);
    axpy(out, -g_w.d1(t), b_stiff);
    axpy(out, -g_w.d2(t), b_damp);
    axpy(out, -g_w.d3(t), b_mass);
    return out;
}

YosidaPair yosida_pair(const Eigen::Vector3d& v, const Eigen::Vector3d& n, double lambda)
{
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    double s = std::min(v.dot(n), 0.0);
    YosidaPair out;
    out.alpha_hat = s * s / lambda;
    out.alpha = (2.0 / lambda) * s * n;
    return out;
}

double kinetic(const SparseMat& mass, const Eigen::VectorXd& v)
{
    return 0.5 * v.dot(mass * v);
}

double viscous_dissipation(const SparseMat& damping, const Eigen::VectorXd& v)
{
    return 0.5 * v.dot(damping * v);
}

double bulk_energy(const SparseMat& stiffness, const Eigen::VectorXd& u,
                   const Eigen::VectorXd& F)
{
    double e = 0.5 * u.dot(stiffness * u);
    if (F.size() > 0) e -= F.dot(u);
    return e;
}

double power_of_loads(double t, const Eigen::VectorXd& u, const LoadData& loads)
{
    return -loads.force_rate(t, int(u.size())).dot(u);
}

Dissipation dissipation_R(const AdhesionField& z_old, const AdhesionField& z_new, double a1)
{
    Dissipation d;
    if (z_new.values.size() != z_old.values.size())
        throw std::invalid_argument("dissipation_R: grid mismatch");
    for (std::size_t i = 0; i < z_old.values.size(); ++i) {
        double drop = z_old.values[i] - z_new.values[i];
        if (drop < 0.0) {
            d.admissible = false;
            d.value = 0.0;
            return d;
        }
        d.value += a1 * z_old.cell_areas[i] * drop;
    }
    return d;
}

double perimeter(const AdhesionField& z)
{
    double p = 0.0;
    for (int ia = 0; ia < z.n_along; ++ia)
        for (int it = 0; it < z.n_thick; ++it) {
            if (ia + 1 < z.n_along)
                p += z.h_thick * std::abs(z.values[z.idx(ia, it)] - z.values[z.idx(ia + 1, it)]);
            if (it + 1 < z.n_thick)
                p += z.h_along * std::abs(z.values[z.idx(ia, it)] - z.values[z.idx(ia, it + 1)]);
        }
    return p;
}

double surface_energy(const std::vector<Eigen::Vector3d>& jumps, const AdhesionField& z,
                      const ModelParams& p, double q3)
{
    if (int(jumps.size()) != z.size())
        throw std::invalid_argument("surface_energy: jump field / grid mismatch");
    if (p.b > 0.0 && !z.admissible(true))
        throw std::invalid_argument("surface_energy: z must be binary when b > 0");
    double e = 0.0;
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        const Eigen::Vector3d& j = jumps[i];
        double area = z.cell_areas[i];
        if (p.nu > 0.0) {
            Eigen::Vector3d planar(j(0), j(1), 0.0);
            e += p.nu * area * yosida_pair(planar, p.n_interface, p.lambda_yosida).alpha_hat;
        }
        double q = j(0) * j(0) + j(1) * j(1) + q3 * j(2) * j(2);
        e += area * z.values[i] * (0.5 * p.kappa * q - p.a0);
    }
    if (p.b > 0.0) e += p.b * perimeter(z);
    return e;
}

}  // namespace plates
