#include "doctest.h"
#include "plates/fem.hpp"

#include <random>

using namespace plates;

namespace {
std::mt19937 rng(11);
Eigen::VectorXd random_vec(int n)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = g(rng);
    return v;
}
}  // namespace

TEST_CASE("slab mesh counting and geometry")
{
    SlabMesh m = build_slab_mesh(2, 1, 1);
    CHECK(m.n_cells() == 2);
    CHECK(m.n_nodes() == 3 * 2 * 2 + 2 * 2);
    CHECK(m.n_iface_cells() == 1);

    SlabMesh big = build_slab_mesh(4, 3, 2);
    CHECK(big.n_nodes() == 5 * 4 * 3 + 4 * 3);
    CHECK(big.n_cells() == 4 * 3 * 2);
    CHECK(big.hx * big.nx * big.hy * big.ny * big.hz * big.nz == doctest::Approx(2.0));

    CHECK_THROWS_AS(build_slab_mesh(3, 1, 1), std::invalid_argument);

    // Duplicated sheet shares coordinates with the base sheet.
    for (int c = 0; c < big.n_iface_cells(); ++c)
        for (int k = 0; k < 4; ++k)
            CHECK((big.coords[big.iface_plus[c][k]] - big.coords[big.iface_minus[c][k]]).norm() ==
                  0.0);
}

TEST_CASE("stiffness matrix matches direct quadrature")
{
    SlabMesh m = build_slab_mesh(4, 2, 2);
    SymTensor4 c = make_isotropic(1.3, 0.9);
    for (double eps : {1.0, 0.25}) {
        AssembledForms f = assemble_slab_forms(m, c, c, 1.0, eps, true);
        Eigen::VectorXd u = random_vec(f.n_dofs);
        double via_matrix = 0.5 * u.dot(f.stiffness * u);
        double via_quad = slab_form_energy(m, c, eps, u, 2, false);
        CHECK(via_matrix == doctest::Approx(via_quad).epsilon(1e-10));
    }
}

TEST_CASE("serial and parallel assembly agree exactly")
{
    SlabMesh m = build_slab_mesh(4, 2, 2);
    SymTensor4 c = make_isotropic(1.0, 1.0);
    Mat24 ke = hex_stiffness(c, 1.0, m.hx, m.hy, m.hz);
    SparseMat a = assemble_slab_matrix(m, ke, false);
    SparseMat b = assemble_slab_matrix(m, ke, true);
    CHECK((a - b).norm() == 0.0);

    Eigen::VectorXd u = random_vec(3 * m.n_nodes());
    CHECK(slab_form_energy(m, c, 1.0, u, 2, false) ==
          doctest::Approx(slab_form_energy(m, c, 1.0, u, 2, true)).epsilon(1e-14));
}

TEST_CASE("matrices symmetric, SPD after elimination")
{
    SlabMesh m = build_slab_mesh(2, 2, 2);
    SymTensor4 c = make_isotropic(1.0, 1.0);
    AssembledForms f = assemble_slab_forms(m, c, c, 2.0, 1.0, false);
    CHECK((f.stiffness - SparseMat(f.stiffness.transpose())).norm() < 1e-12);
    CHECK((f.mass - SparseMat(f.mass.transpose())).norm() < 1e-12);

    SparseMat k = f.stiffness;
    zero_rows_cols(k, f.dirichlet_dofs, true);
    Eigen::MatrixXd dense = Eigen::MatrixXd(k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("mass matrix kinetic energies")
{
    SlabMesh m = build_slab_mesh(2, 1, 1);
    SymTensor4 c = make_isotropic(1.0, 1.0);

    // Volume is 2; constant unit u3 velocity, rho = 2: K = rho/2 * vol = 2.
    AssembledForms f = assemble_slab_forms(m, c, c, 2.0, 1.0, false);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(f.n_dofs);
    for (int n = 0; n < m.n_nodes(); ++n) v(3 * n + 2) = 1.0;
    CHECK(kinetic(f.mass, v) == doctest::Approx(2.0).epsilon(1e-12));

    // Rescaled weights: in-plane velocity picks up eps^2.
    double eps = 0.1;
    AssembledForms fr = assemble_slab_forms(m, c, c, 1.0, eps, true);
    Eigen::VectorXd v1 = Eigen::VectorXd::Zero(fr.n_dofs);
    for (int n = 0; n < m.n_nodes(); ++n) v1(3 * n + 0) = 1.0;
    CHECK(kinetic(fr.mass, v1) == doctest::Approx(eps * eps * 0.5 * 2.0).epsilon(1e-12));
}

TEST_CASE("jump operator")
{
    SlabMesh m = build_slab_mesh(4, 3, 2);
    SymTensor4 c = make_isotropic(1.0, 1.0);
    AssembledForms f = assemble_slab_forms(m, c, c, 1.0, 1.0, false);

    AffineField w;
    w.A << 0.3, -0.1, 0.2, 0.0, 0.5, 0.1, 0.2, 0.0, -0.4;
    w.b = Eigen::Vector3d(1, 2, 3);
    Eigen::VectorXd cont = slab_interpolate(m, w);
    for (const auto& j : f.jumps_of(cont)) CHECK(j.norm() < 1e-13);

    const int n_base = (m.nx + 1) * (m.ny + 1) * (m.nz + 1);
    Eigen::VectorXd split = Eigen::VectorXd::Zero(f.n_dofs);
    for (int n = n_base; n < m.n_nodes(); ++n) split(3 * n + 0) = 1.0;
    for (const auto& j : f.jumps_of(split)) {
        CHECK(j(0) == doctest::Approx(1.0));
        CHECK(j(1) == 0.0);
    }

    // Adjoint identity.
    Eigen::VectorXd u = random_vec(f.n_dofs);
    Eigen::VectorXd wt = random_vec(int(f.jump.rows()));
    auto jumps = f.jumps_of(u);
    double lhs = (f.jump.transpose() * wt).dot(u);
    double rhs = 0.0;
    for (std::size_t cidx = 0; cidx < jumps.size(); ++cidx)
        rhs += wt.segment<3>(3 * int(cidx)).dot(jumps[cidx]);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("KL field: linear deflection worked example")
{
    PlateMesh p = build_plate_mesh(4, 2);
    KLField kl;
    kl.mesh = &p;
    kl.dofs = Eigen::VectorXd::Zero(p.n_dofs());
    // u3 = x1: value x1, slope_x 1 at every node.
    for (int n = 0; n < p.n_nodes(); ++n) {
        kl.dofs(p.deflection_dof(n, 0)) = p.coords[n](0);
        kl.dofs(p.deflection_dof(n, 1)) = 1.0;
    }
    Eigen::Vector3d x(0.3, 0.4, 0.2);
    Eigen::Vector3d u = kl.displacement(x);
    CHECK(u(0) == doctest::Approx(-0.2));
    CHECK(u(1) == doctest::Approx(0.0));
    CHECK(u(2) == doctest::Approx(0.3));
    Strain3 e = kl.strain(x);
    CHECK(e.norm() < 1e-13);  // linear deflection has zero curvature
}

TEST_CASE("KL field: transverse strain components vanish at quadrature points")
{
    PlateMesh p = build_plate_mesh(4, 2);
    SlabMesh s = build_slab_mesh(4, 2, 2);
    KLField kl;
    kl.mesh = &p;
    kl.dofs = random_vec(p.n_dofs());
    QuadRule q = gauss_rule(2);
    for (const auto& cell : s.cells) {
        Eigen::Vector3d x0 = s.coords[cell[0]];
        for (double a : q.points)
            for (double b : q.points)
                for (double c : q.points) {
                    Eigen::Vector3d x =
                        x0 + Eigen::Vector3d(a * s.hx, b * s.hy, c * s.hz);
                    Strain3 e = kl.strain(x);
                    for (int i = 0; i < 3; ++i) CHECK(std::abs(e(i, 2)) <= 1e-12);
                }
    }
}

TEST_CASE("KL identity: 3D energy of a lifted field equals the plate energy")
{
    PlateMesh p = build_plate_mesh(4, 2);
    SlabMesh s = build_slab_mesh(4, 2, 2);
    SymTensor4 c = make_isotropic(0.0, 1.3);  // satisfies the planarity condition
    REQUIRE(check_planar_condition(c));

    AssembledForms pf = assemble_plate_forms(p, c, c, 1.0, false, 2);
    for (int trial = 0; trial < 5; ++trial) {
        KLField kl;
        kl.mesh = &p;
        kl.dofs = random_vec(p.n_dofs());
        double plate_energy = 0.5 * kl.dofs.dot(pf.stiffness * kl.dofs);
        double slab_energy = slab_energy_of_strain(
            s, c, [&](const Eigen::Vector3d& x) { return kl.strain(x); }, 4);
        CHECK(slab_energy == doctest::Approx(plate_energy).epsilon(1e-8));
    }
}

TEST_CASE("lift matrix agrees with direct evaluation, including interface sides")
{
    PlateMesh p = build_plate_mesh(4, 2);
    SlabMesh s = build_slab_mesh(4, 2, 2);
    KLField kl;
    kl.mesh = &p;
    kl.dofs = random_vec(p.n_dofs());
    SparseMat lift = kl_lift_matrix(p, s);
    Eigen::VectorXd nodal = lift * kl.dofs;
    const int n_base = (s.nx + 1) * (s.ny + 1) * (s.nz + 1);
    for (int n = 0; n < s.n_nodes(); ++n) {
        int side = 0;
        if (std::abs(s.coords[n](0)) < 1e-14) side = n >= n_base ? +1 : -1;
        Eigen::Vector3d direct = kl.displacement(s.coords[n], side);
        CHECK((nodal.segment<3>(3 * n) - direct).norm() < 1e-12);
    }
}

TEST_CASE("KL projection recovers a lifted field")
{
    PlateMesh p = build_plate_mesh(4, 2);
    SlabMesh s = build_slab_mesh(8, 4, 2);
    SparseMat lift = kl_lift_matrix(p, s);
    SymTensor4 id = SymTensor4::identity();
    AssembledForms sf = assemble_slab_forms(s, id, id, 1.0, 1.0, false);
    SparseMat metric = sf.mass + sf.stiffness;

    Eigen::VectorXd dofs = random_vec(p.n_dofs());
    Eigen::VectorXd u = lift * dofs;
    Eigen::VectorXd rec = kl_project(lift, metric, u);
    CHECK((lift * rec - u).norm() < 1e-6 * (1.0 + u.norm()));
}

TEST_CASE("adhesive coupling decouples for thickness-independent z")
{
    PlateMesh p = build_plate_mesh(4, 2);
    SymTensor4 c = make_isotropic(0.0, 1.0);
    AssembledForms f = assemble_plate_forms(p, c, c, 1.0, true, 4);

    auto cross_norm = [&](const AdhesionField& z) {
        Eigen::VectorXd d(f.jump.rows());
        for (int cidx = 0; cidx < z.size(); ++cidx)
            for (int comp = 0; comp < 3; ++comp)
                d(3 * cidx + comp) = z.values[cidx] * z.cell_areas[cidx];
        SparseMat adh = SparseMat(f.jump.transpose()) * d.asDiagonal() * f.jump;
        int nm = 2 * p.n_nodes();
        return Eigen::MatrixXd(adh).block(0, nm, nm, f.n_dofs - nm).norm();
    };

    AdhesionField z_const = f.make_adhesion(1.0);
    CHECK(cross_norm(z_const) <= 1e-12);

    AdhesionField z_half = f.make_adhesion(0.0);
    for (int iy = 0; iy < z_half.n_along; ++iy)
        for (int iz = z_half.n_thick / 2; iz < z_half.n_thick; ++iz)
            z_half.values[z_half.idx(iy, iz)] = 1.0;
    CHECK(cross_norm(z_half) > 1e-6);
}

TEST_CASE("korn_check returns a positive finite ratio")
{
    SlabMesh m = build_slab_mesh(4, 2, 2);
    SymTensor4 d = make_isotropic(1.0, 1.0);
    for (double eps : {1.0, 0.5}) {
        double r = korn_check(m, d, eps, 20, 5);
        CHECK(r > 0.0);
        CHECK(std::isfinite(r));
    }
}

TEST_CASE("plate loads: partition of unity and KL datum validation")
{
    PlateMesh p = build_plate_mesh(4, 2);
    SymTensor4 c = make_isotropic(0.0, 1.0);
    AssembledForms f = assemble_plate_forms(p, c, c, 1.0, false, 2);

    AffineField force;  // constant (0,0,1)
    force.b = Eigen::Vector3d(0, 0, 1);
    AffineField w;
    LoadData ld = build_plate_loads(p, f, force, w, TimeProfile{1}, TimeProfile{});

    // Pair b_f with the constant-one deflection: integral of f3 over omega = 2.
    Eigen::VectorXd ones = Eigen::VectorXd::Zero(p.n_dofs());
    for (int n = 0; n < p.n_nodes(); ++n) ones(p.deflection_dof(n, 0)) = 1.0;
    CHECK(ld.b_f.dot(ones) == doctest::Approx(2.0).epsilon(1e-12));

    AffineField bad;
    bad.A(2, 2) = 1.0;
    CHECK_THROWS_AS(build_plate_loads(p, f, force, bad, TimeProfile{}, TimeProfile{}),
                    std::invalid_argument);
}

TEST_CASE("slab loads reuse the assembled forms")
{
    SlabMesh m = build_slab_mesh(4, 2, 2);
    SymTensor4 c = make_isotropic(1.0, 1.0);
    AssembledForms f = assemble_slab_forms(m, c, c, 1.5, 1.0, false);
    AffineField fv;
    fv.b = Eigen::Vector3d(0, 0, 1);
    AffineField w;
    w.A(0, 0) = 0.5;
    LoadData ld = build_slab_loads(m, f, fv, w, TimeProfile{1}, TimeProfile{0, 1});
    Eigen::VectorXd wd = slab_interpolate(m, w);
    CHECK((ld.b_stiff - f.stiffness * wd).norm() == 0.0);
    CHECK((ld.b_mass - f.mass * wd).norm() == 0.0);

    Eigen::VectorXd ones = Eigen::VectorXd::Zero(f.n_dofs);
    for (int n = 0; n < m.n_nodes(); ++n) ones(3 * n + 2) = 1.0;
    CHECK(ld.b_f.dot(ones) == doctest::Approx(2.0).epsilon(1e-12));
}
