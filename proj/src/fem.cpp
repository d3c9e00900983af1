#include "plates/fem.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace plates {

namespace {

// Basis data of both plate spaces at one planar point.
struct PEval {
    std::array<int, 4> nodes;
    double mv[4];
    Eigen::Vector2d mg[4];
    double dv[16], ddx[16], ddy[16], dxx[16], dyy[16], dxy[16];
};

PEval plate_eval(const PlateMesh& m, double x1, double x2, int side)
{
    int cx, cy;
    if (std::abs(x1) < 1e-14 && side != 0)
        cx = side < 0 ? m.nx / 2 - 1 : m.nx / 2;
    else
        cx = std::min(std::max(int(std::floor((x1 + 1.0) / m.hx)), 0), m.nx - 1);
    cy = std::min(std::max(int(std::floor(x2 / m.hy)), 0), m.ny - 1);

    PEval e;
    e.nodes = m.cells[std::size_t(cx) * m.ny + cy];
    double lx = x1 - (-1.0 + cx * m.hx), ly = x2 - cy * m.hy;

    const int ax[4] = {0, 1, 0, 1}, by[4] = {0, 0, 1, 1};
    for (int l = 0; l < 4; ++l) {
        double sx = lx / m.hx, sy = ly / m.hy;
        double gx = ax[l] ? sx : 1.0 - sx;
        double gy = by[l] ? sy : 1.0 - sy;
        double dgx = (ax[l] ? 1.0 : -1.0) / m.hx;
        double dgy = (by[l] ? 1.0 : -1.0) / m.hy;
        e.mv[l] = gx * gy;
        e.mg[l] = Eigen::Vector2d(dgx * gy, gx * dgy);
    }
    double vx[2][2], d1x[2][2], d2x[2][2], vy[2][2], d1y[2][2], d2y[2][2];
    hermite_basis(lx, m.hx, vx, d1x, d2x);
    hermite_basis(ly, m.hy, vy, d1y, d2y);
    for (int l = 0; l < 4; ++l)
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) {
                int k = 4 * l + p + 2 * q;
                e.dv[k] = vx[ax[l]][p] * vy[by[l]][q];
                e.ddx[k] = d1x[ax[l]][p] * vy[by[l]][q];
                e.ddy[k] = vx[ax[l]][p] * d1y[by[l]][q];
                e.dxx[k] = d2x[ax[l]][p] * vy[by[l]][q];
                e.dyy[k] = vx[ax[l]][p] * d2y[by[l]][q];
                e.dxy[k] = d1x[ax[l]][p] * d1y[by[l]][q];
            }
    return e;
}

}  // namespace

AdhesionField AssembledForms::make_adhesion(double value) const
{
    return AdhesionField::uniform(n_iface_along, n_iface_thick, h_along, h_thick, value);
}

std::vector<Eigen::Vector3d> AssembledForms::jumps_of(const Eigen::VectorXd& u) const
{
    Eigen::VectorXd j = jump * u;
    std::vector<Eigen::Vector3d> out(std::size_t(j.size()) / 3);
    for (std::size_t c = 0; c < out.size(); ++c)
        out[c] = Eigen::Vector3d(j(3 * c), j(3 * c + 1), j(3 * c + 2));
    return out;
}

AssembledForms assemble_slab_forms(const SlabMesh& mesh, const SymTensor4& C,
                                   const SymTensor4& D_eps, double rho, double eps,
                                   bool rescaled, bool parallel)
{
    AssembledForms f;
    f.n_dofs = 3 * mesh.n_nodes();
    f.stiffness = assemble_slab_matrix(mesh, hex_stiffness(C, eps, mesh.hx, mesh.hy, mesh.hz),
                                       parallel);
    double visc_weight = rescaled ? eps : 1.0;
    f.damping = visc_weight * assemble_slab_matrix(
                                  mesh, hex_stiffness(D_eps, eps, mesh.hx, mesh.hy, mesh.hz),
                                  parallel);
    Eigen::Vector3d mw = rescaled ? Eigen::Vector3d(eps * eps, eps * eps, 1.0)
                                  : Eigen::Vector3d(1.0, 1.0, 1.0);
    f.mass = assemble_slab_matrix(mesh, hex_mass(rho, mw, mesh.hx, mesh.hy, mesh.hz), parallel);
    f.grad3 = assemble_slab_matrix(mesh, hex_grad3(mesh.hx, mesh.hy, mesh.hz), parallel);

    std::vector<Eigen::Triplet<double>> jt;
    for (int c = 0; c < mesh.n_iface_cells(); ++c)
        for (int k = 0; k < 4; ++k)
            for (int comp = 0; comp < 3; ++comp) {
                jt.emplace_back(3 * c + comp, 3 * mesh.iface_plus[c][k] + comp, 0.25);
                jt.emplace_back(3 * c + comp, 3 * mesh.iface_minus[c][k] + comp, -0.25);
            }
    f.jump = SparseMat(3 * mesh.n_iface_cells(), f.n_dofs);
    f.jump.setFromTriplets(jt.begin(), jt.end());

    f.n_iface_along = mesh.ny;
    f.n_iface_thick = mesh.nz;
    f.h_along = mesh.hy;
    f.h_thick = mesh.hz;
    f.iface_area.assign(mesh.n_iface_cells(), mesh.iface_cell_area());
    for (int iy = 0; iy < mesh.ny; ++iy)
        for (int iz = 0; iz < mesh.nz; ++iz)
            f.iface_x3.push_back(-0.5 + (iz + 0.5) * mesh.hz);

    for (int n : mesh.dirichlet_nodes)
        for (int c = 0; c < 3; ++c) f.dirichlet_dofs.push_back(3 * n + c);
    return f;
}

AssembledForms assemble_plate_forms(const PlateMesh& mesh, const SymTensor4& C,
                                    const SymTensor4& D, double rho, bool damped,
                                    int nz_interface)
{
    if (nz_interface < 1) throw std::invalid_argument("nz_interface must be >= 1");
    AssembledForms f;
    f.n_dofs = mesh.n_dofs();
    ReducedTensor cr = reduced_tensor(C);
    f.stiffness = assemble_plate_stiffness(mesh, quad_membrane_stiffness(cr, mesh.hx, mesh.hy),
                                           bfs_bending_stiffness(cr, mesh.hx, mesh.hy));
    if (damped) {
        ReducedTensor dr = reduced_tensor(D);
        f.damping = assemble_plate_stiffness(mesh, quad_membrane_stiffness(dr, mesh.hx, mesh.hy),
                                             bfs_bending_stiffness(dr, mesh.hx, mesh.hy));
    } else {
        f.damping = SparseMat(f.n_dofs, f.n_dofs);
    }
    f.mass = assemble_plate_mass(mesh, rho);
    f.grad3 = SparseMat(f.n_dofs, f.n_dofs);

    f.n_iface_along = mesh.ny;
    f.n_iface_thick = nz_interface;
    f.h_along = mesh.hy;
    f.h_thick = 1.0 / nz_interface;

    std::vector<Eigen::Triplet<double>> jt;
    int row = 0;
    for (int iy = 0; iy < mesh.ny; ++iy) {
        double x2m = (iy + 0.5) * mesh.hy;
        PEval plus = plate_eval(mesh, 0.0, x2m, +1);
        PEval minus = plate_eval(mesh, 0.0, x2m, -1);
        for (int iz = 0; iz < nz_interface; ++iz) {
            double x3m = -0.5 + (iz + 0.5) * f.h_thick;
            for (int sgn = 0; sgn < 2; ++sgn) {
                const PEval& e = sgn ? minus : plus;
                double s = sgn ? -1.0 : 1.0;
                for (int l = 0; l < 4; ++l) {
                    int n = e.nodes[l];
                    jt.emplace_back(row + 0, mesh.membrane_dof(n, 0), s * e.mv[l]);
                    jt.emplace_back(row + 1, mesh.membrane_dof(n, 1), s * e.mv[l]);
                }
                for (int l = 0; l < 4; ++l)
                    for (int k = 0; k < 4; ++k) {
                        int d = mesh.deflection_dof(e.nodes[l], k);
                        jt.emplace_back(row + 0, d, -s * x3m * e.ddx[4 * l + k]);
                        jt.emplace_back(row + 1, d, -s * x3m * e.ddy[4 * l + k]);
                        jt.emplace_back(row + 2, d, s * e.dv[4 * l + k]);
                    }
            }
            f.iface_area.push_back(mesh.hy * f.h_thick);
            f.iface_x3.push_back(x3m);
            row += 3;
        }
    }
    f.jump = SparseMat(row, f.n_dofs);
    f.jump.setFromTriplets(jt.begin(), jt.end());

    for (int n : mesh.dirichlet_nodes) {
        for (int c = 0; c < 2; ++c) f.dirichlet_dofs.push_back(mesh.membrane_dof(n, c));
        for (int k = 0; k < 4; ++k) f.dirichlet_dofs.push_back(mesh.deflection_dof(n, k));
    }
    return f;
}

LoadData build_slab_loads(const SlabMesh& mesh, const AssembledForms& forms,
                          const AffineField& f_spat, const AffineField& w_spat,
                          const TimeProfile& g_f, const TimeProfile& g_w)
{
    LoadData ld;
    ld.g_f = g_f;
    ld.g_w = g_w;
    ld.b_f = assemble_slab_load(
        mesh, [&](const Eigen::Vector3d& x) { return f_spat.eval(x); }, 2);
    Eigen::VectorXd w = slab_interpolate(mesh, w_spat);
    ld.b_stiff = forms.stiffness * w;
    ld.b_damp = forms.damping * w;
    ld.b_mass = forms.mass * w;
    return ld;
}

LoadData build_plate_loads(const PlateMesh& mesh, const AssembledForms& forms,
                           const AffineField& f_spat, const AffineField& w_spat,
                           const TimeProfile& g_f, const TimeProfile& g_w)
{
    for (int i = 0; i < 3; ++i)
        if (w_spat.A(i, 2) != 0.0)
            throw std::invalid_argument("plate Dirichlet datum must be x3-independent");

    LoadData ld;
    ld.g_f = g_f;
    ld.g_w = g_w;

    Eigen::VectorXd bf = Eigen::VectorXd::Zero(mesh.n_dofs());
    QuadRule q = gauss_rule(4);
    for (std::size_t cell = 0; cell < mesh.cells.size(); ++cell) {
        int cx = int(cell) / mesh.ny, cy = int(cell) % mesh.ny;
        double x0 = -1.0 + cx * mesh.hx, y0 = cy * mesh.hy;
        for (std::size_t qi = 0; qi < q.points.size(); ++qi)
            for (std::size_t qj = 0; qj < q.points.size(); ++qj) {
                double x = x0 + q.points[qi] * mesh.hx, y = y0 + q.points[qj] * mesh.hy;
                double w = q.weights[qi] * q.weights[qj] * mesh.hx * mesh.hy;
                Eigen::Vector3d fx = f_spat.eval(Eigen::Vector3d(x, y, 0.0));
                PEval e = plate_eval(mesh, x, y, cx >= mesh.nx / 2 ? +1 : -1);
                for (int l = 0; l < 4; ++l) {
                    bf(mesh.membrane_dof(e.nodes[l], 0)) += w * e.mv[l] * fx(0);
                    bf(mesh.membrane_dof(e.nodes[l], 1)) += w * e.mv[l] * fx(1);
                    for (int k = 0; k < 4; ++k)
                        bf(mesh.deflection_dof(e.nodes[l], k)) += w * e.dv[4 * l + k] * fx(2);
                }
            }
    }
    ld.b_f = bf;

    Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.n_dofs());
    for (int n = 0; n < mesh.n_nodes(); ++n) {
        Eigen::Vector3d x(mesh.coords[n](0), mesh.coords[n](1), 0.0);
        Eigen::Vector3d v = w_spat.eval(x);
        w(mesh.membrane_dof(n, 0)) = v(0);
        w(mesh.membrane_dof(n, 1)) = v(1);
        w(mesh.deflection_dof(n, 0)) = v(2);
        w(mesh.deflection_dof(n, 1)) = w_spat.A(2, 0);
        w(mesh.deflection_dof(n, 2)) = w_spat.A(2, 1);
        w(mesh.deflection_dof(n, 3)) = 0.0;
    }
    ld.b_stiff = forms.stiffness * w;
    ld.b_damp = forms.damping * w;
    ld.b_mass = forms.mass * w;
    return ld;
}

Eigen::VectorXd slab_interpolate(const SlabMesh& mesh, const AffineField& w)
{
    Eigen::VectorXd out(3 * mesh.n_nodes());
    for (int n = 0; n < mesh.n_nodes(); ++n) out.segment<3>(3 * n) = w.eval(mesh.coords[n]);
    return out;
}

Eigen::Vector3d KLField::displacement(const Eigen::Vector3d& x, int side) const
{
    PEval e = plate_eval(*mesh, x(0), x(1), side);
    Eigen::Vector2d ubar = Eigen::Vector2d::Zero();
    double u3 = 0.0;
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int l = 0; l < 4; ++l) {
        ubar(0) += e.mv[l] * dofs(mesh->membrane_dof(e.nodes[l], 0));
        ubar(1) += e.mv[l] * dofs(mesh->membrane_dof(e.nodes[l], 1));
        for (int k = 0; k < 4; ++k) {
            double d = dofs(mesh->deflection_dof(e.nodes[l], k));
            u3 += e.dv[4 * l + k] * d;
            g(0) += e.ddx[4 * l + k] * d;
            g(1) += e.ddy[4 * l + k] * d;
        }
    }
    return Eigen::Vector3d(ubar(0) - x(2) * g(0), ubar(1) - x(2) * g(1), u3);
}

Strain3 KLField::strain(const Eigen::Vector3d& x, int side) const
{
    Strain2 ep = e_plan(x, side);
    Strain3 e = Strain3::Zero();
    e.topLeftCorner<2, 2>() = ep;
    // The transverse components cancel identically for the lifted field:
    // d3 u_i = -di u3 while d_i u3 = +di u3.
    return e;
}

Strain2 KLField::e_plan(const Eigen::Vector3d& x, int side) const
{
    PEval e = plate_eval(*mesh, x(0), x(1), side);
    Eigen::Matrix2d grad_ubar = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
    for (int l = 0; l < 4; ++l) {
        grad_ubar.row(0) += dofs(mesh->membrane_dof(e.nodes[l], 0)) * e.mg[l].transpose();
        grad_ubar.row(1) += dofs(mesh->membrane_dof(e.nodes[l], 1)) * e.mg[l].transpose();
        for (int k = 0; k < 4; ++k) {
            double d = dofs(mesh->deflection_dof(e.nodes[l], k));
            hess(0, 0) += e.dxx[4 * l + k] * d;
            hess(1, 1) += e.dyy[4 * l + k] * d;
            hess(0, 1) += e.dxy[4 * l + k] * d;
        }
    }
    hess(1, 0) = hess(0, 1);
    Strain2 sym = 0.5 * (grad_ubar + grad_ubar.transpose());
    return sym - x(2) * hess;
}

SparseMat kl_lift_matrix(const PlateMesh& plate, const SlabMesh& slab)
{
    const int n_base = (slab.nx + 1) * (slab.ny + 1) * (slab.nz + 1);
    std::vector<Eigen::Triplet<double>> trips;
    for (int n = 0; n < slab.n_nodes(); ++n) {
        const Eigen::Vector3d& x = slab.coords[n];
        int side = 0;
        if (std::abs(x(0)) < 1e-14) side = n >= n_base ? +1 : -1;
        PEval e = plate_eval(plate, x(0), x(1), side);
        for (int l = 0; l < 4; ++l) {
            trips.emplace_back(3 * n + 0, plate.membrane_dof(e.nodes[l], 0), e.mv[l]);
            trips.emplace_back(3 * n + 1, plate.membrane_dof(e.nodes[l], 1), e.mv[l]);
            for (int k = 0; k < 4; ++k) {
                int d = plate.deflection_dof(e.nodes[l], k);
                trips.emplace_back(3 * n + 0, d, -x(2) * e.ddx[4 * l + k]);
                trips.emplace_back(3 * n + 1, d, -x(2) * e.ddy[4 * l + k]);
                trips.emplace_back(3 * n + 2, d, e.dv[4 * l + k]);
            }
        }
    }
    SparseMat lift(3 * slab.n_nodes(), plate.n_dofs());
    lift.setFromTriplets(trips.begin(), trips.end());
    return lift;
}

Eigen::VectorXd kl_project(const SparseMat& lift, const SparseMat& metric,
                           const Eigen::VectorXd& u, double reg)
{
    SparseMat normal = SparseMat(lift.transpose()) * metric * lift;
    SparseMat id(normal.rows(), normal.cols());
    id.setIdentity();
    normal += reg * id;
    Eigen::SimplicialLDLT<SparseMat> solver(normal);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("kl_project: normal equations not SPD");
    return solver.solve(lift.transpose() * (metric * u));
}

double korn_check(const SlabMesh& mesh, const SymTensor4& D_eps, double eps, int n_samples,
                  unsigned seed)
{
    SparseMat kd =
        assemble_slab_matrix(mesh, hex_stiffness(D_eps, eps, mesh.hx, mesh.hy, mesh.hz), false);
    SparseMat g3 = assemble_slab_matrix(mesh, hex_grad3(mesh.hx, mesh.hy, mesh.hz), false);
    std::vector<char> pinned(3 * mesh.n_nodes(), 0);
    for (int n : mesh.dirichlet_nodes)
        for (int c = 0; c < 3; ++c) pinned[3 * n + c] = 1;

    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n_samples; ++s) {
        Eigen::VectorXd v(3 * mesh.n_nodes());
        for (int i = 0; i < v.size(); ++i) v(i) = pinned[i] ? 0.0 : gauss(rng);
        double den = v.dot(g3 * v);
        if (den < 1e-14 * v.size()) continue;
        double num = eps * v.dot(kd * v);
        best = std::min(best, num / den);
    }
    return best;
}

void zero_rows_cols(SparseMat& m, const std::vector<int>& dofs, bool unit_diagonal)
{
    std::vector<char> pinned(m.rows(), 0);
    for (int d : dofs) pinned[d] = 1;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(std::size_t(m.nonZeros()));
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMat::InnerIterator it(m, k); it; ++it)
            if (!pinned[it.row()] && !pinned[it.col()])
                trips.emplace_back(int(it.row()), int(it.col()), it.value());
    if (unit_diagonal)
        for (int d : dofs) trips.emplace_back(d, d, 1.0);
    SparseMat out(m.rows(), m.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    m = std::move(out);
}

void zero_entries(Eigen::VectorXd& v, const std::vector<int>& dofs)
{
    for (int d : dofs) v(d) = 0.0;
}

void export_matrix(const SparseMat& m, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMat::InnerIterator it(m, k); it; ++it)
            out << it.row() << " " << it.col() << " " << it.value() << "\n";
}

json slab_mesh_to_json(const SlabMesh& mesh)
{
    json j;
    j["nx"] = mesh.nx;
    j["ny"] = mesh.ny;
    j["nz"] = mesh.nz;
    j["n_nodes"] = mesh.n_nodes();
    j["n_cells"] = mesh.n_cells();
    json coords = json::array();
    for (const auto& c : mesh.coords) coords.push_back({c(0), c(1), c(2)});
    j["coords"] = coords;
    json cells = json::array();
    for (const auto& c : mesh.cells) cells.push_back(c);
    j["cells"] = cells;
    j["dirichlet_nodes"] = mesh.dirichlet_nodes;
    return j;
}

}  // namespace plates
