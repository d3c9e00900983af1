#include "doctest.h"
#include "plates/stepper.hpp"

#include <cmath>
#include <cstdio>
#include <random>

using namespace plates;

namespace {

// One-dof oscillator packaged in the assembled-forms shape.
AssembledForms oscillator_forms(double m, double k)
{
    AssembledForms f;
    f.n_dofs = 1;
    f.mass = SparseMat(1, 1);
    f.mass.insert(0, 0) = m;
    f.stiffness = SparseMat(1, 1);
    f.stiffness.insert(0, 0) = k;
    f.damping = SparseMat(1, 1);
    f.grad3 = SparseMat(1, 1);
    f.jump = SparseMat(0, 1);
    return f;
}

struct SlabSetup {
    SlabMesh mesh;
    AssembledForms forms;
    LoadData loads;
};

// Slab pulled apart by a ramped Dirichlet stretch that varies along x2.
SlabSetup make_slab_setup(int nx, int ny, int nz, double stretch, double shear,
                          double d_scale)
{
    SlabSetup s;
    s.mesh = build_slab_mesh(nx, ny, nz);
    SymTensor4 c = make_isotropic(1.0, 1.0);
    SymTensor4 d = make_isotropic(d_scale, d_scale);
    s.forms = assemble_slab_forms(s.mesh, c, d, 1.0, 1.0, false);
    AffineField fv;
    AffineField w;
    w.A(0, 0) = stretch;
    w.A(0, 1) = shear;
    s.loads = build_slab_loads(s.mesh, s.forms, fv, w, TimeProfile{}, TimeProfile{0.0, 1.0});
    return s;
}

}  // namespace

TEST_CASE("oscillator: energy conserved, trajectory near the closed form")
{
    double m = 2.0, k = 5.0, omega = std::sqrt(k / m);
    AssembledForms f = oscillator_forms(m, k);
    LoadData ld;
    ModelParams p;
    SchemeConfig cfg;
    cfg.dt = 0.01;
    Stepper st(&f, &ld, p, cfg);

    SystemState s = st.initial_state();
    s.u(0) = 1.0;
    s.a(0) = -k / m;
    s.K0 = st.kinetic_energy(s);
    s.E0 = st.bulk(s) + st.surface(s);

    int n_steps = int(std::round(2.0 * M_PI / omega / cfg.dt));
    for (int i = 0; i < n_steps; ++i) {
        st.step(s);
        CHECK(std::abs(st.balance_residual(s)) < 1e-12);
    }
    // Second-order accurate phase: within O(dt^2) after one period.
    CHECK(s.u(0) == doctest::Approx(std::cos(omega * s.t)).epsilon(5e-3));
}

TEST_CASE("zero loads keep the rest state at rest")
{
    SlabSetup s = make_slab_setup(2, 2, 2, 0.0, 0.0, 1.0);
    ModelParams p;
    p.kappa = 2.0;
    p.nu = 0.5;
    SchemeConfig cfg;
    cfg.dt = 0.05;
    Stepper st(&s.forms, &s.loads, p, cfg);
    SystemState state = st.initial_state();
    for (int i = 0; i < 5; ++i) st.step(state);
    CHECK(state.u.norm() == 0.0);
    CHECK(state.v.norm() == 0.0);
    CHECK(state.t == doctest::Approx(0.25));
    for (double z : state.z.values) CHECK(z == 1.0);
    CHECK(st.balance_residual(state) == 0.0);
}

TEST_CASE("damped run settles to the static solution")
{
    SlabSetup s = make_slab_setup(4, 2, 1, 0.0, 0.0, 6.0);
    // Constant volume force so the long-time limit is the plain static solve.
    AffineField fv;
    fv.b = Eigen::Vector3d(0.5, 0.0, 0.3);
    s.loads = build_slab_loads(s.mesh, s.forms, fv, AffineField{}, TimeProfile{1.0},
                               TimeProfile{});
    ModelParams p;
    p.kappa = 0.3;
    p.a0 = 100.0;  // no debonding in this test
    p.a1 = 100.0;
    SchemeConfig cfg;
    cfg.dt = 0.25;
    Stepper st(&s.forms, &s.loads, p, cfg);
    SystemState state = st.initial_state();
    for (int i = 0; i < 400; ++i) st.step(state);

    // Static: (K + K_adh) u = F(T) restricted to free dofs.
    SparseMat k = s.forms.stiffness;
    Eigen::VectorXd w(s.forms.jump.rows());
    for (int c = 0; c < state.z.size(); ++c)
        w.segment<3>(3 * c) = p.kappa * state.z.cell_areas[c] * state.z.values[c] *
                              Eigen::Vector3d(1, 1, 1);
    SparseMat sys =
        k + SparseMat(SparseMat(s.forms.jump.transpose()) * w.asDiagonal() * s.forms.jump);
    zero_rows_cols(sys, s.forms.dirichlet_dofs, true);
    Eigen::VectorXd f = s.loads.force(state.t, s.forms.n_dofs);
    zero_entries(f, s.forms.dirichlet_dofs);
    Eigen::SimplicialLDLT<SparseMat> solver(sys);
    Eigen::VectorXd u_static = solver.solve(f);
    CHECK((state.u - u_static).norm() < 1e-5 * (1.0 + u_static.norm()));
}

TEST_CASE("threshold rule worked examples")
{
    SlabSetup s = make_slab_setup(2, 1, 1, 0.0, 0.0, 1.0);
    ModelParams p;
    p.kappa = 2.0;
    p.a0 = 1.0;
    p.a1 = 1.0;
    SchemeConfig cfg;
    Stepper st(&s.forms, &s.loads, p, cfg);

    AdhesionField z = s.forms.make_adhesion(1.0);
    // |jump|^2 = 3: drop 3 exceeds a0 + a1 = 2, debond.
    std::vector<Eigen::Vector3d> open{{std::sqrt(3.0), 0, 0}};
    CHECK(st.semistable_update(z, open).values[0] == 0.0);
    // |jump|^2 = 2 exactly: tie, keep.
    std::vector<Eigen::Vector3d> tie{{1.0, 1.0, 0}};
    CHECK(st.semistable_update(z, tie).values[0] == 1.0);
    // Already debonded cells stay debonded.
    AdhesionField z0 = s.forms.make_adhesion(0.0);
    CHECK(st.semistable_update(z0, open).values[0] == 0.0);
}

TEST_CASE("b = 0 update matches cellwise enumeration, b > 0 matches exhaustive search")
{
    SlabSetup s = make_slab_setup(2, 4, 2, 0.0, 0.0, 1.0);  // 8 interface cells
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uj(0.0, 2.0);

    for (int inst = 0; inst < 25; ++inst) {
        ModelParams p;
        p.kappa = 2.0;
        p.a0 = 0.6;
        p.a1 = 0.5;
        p.b = (inst % 2 == 0) ? 0.0 : 0.12;
        SchemeConfig cfg;
        Stepper st(&s.forms, &s.loads, p, cfg);

        AdhesionField z = s.forms.make_adhesion(1.0);
        if (inst % 3 == 0) z.values[1] = 0.0;
        std::vector<Eigen::Vector3d> jumps;
        for (int c = 0; c < z.size(); ++c) jumps.push_back({uj(rng), uj(rng) - 1.0, 0.0});

        AdhesionField out = st.semistable_update(z, jumps);

        auto objective = [&](const AdhesionField& zt) {
            return surface_energy(jumps, zt, p) + dissipation_R(z, zt, p.a1).value;
        };
        double best = 1e300;
        AdhesionField zb = z;
        int n = z.size();
        for (int mask = 0; mask < (1 << n); ++mask) {
            AdhesionField zt = z;
            bool ok = true;
            for (int c = 0; c < n; ++c) {
                double val = (mask >> c) & 1;
                if (val > z.values[c]) ok = false;
                zt.values[c] = val;
            }
            if (!ok) continue;
            double e = objective(zt);
            if (e < best - 1e-12) {
                best = e;
                zb = zt;
            }
        }
        CHECK(objective(out) == doctest::Approx(best).epsilon(1e-10));
        if (p.b > 0.0)
            for (int c = 0; c < n; ++c) CHECK(out.values[c] == zb.values[c]);
    }
}

TEST_CASE("debonding run: unidirectional z, admissible, small balance residual")
{
    SlabSetup s = make_slab_setup(4, 4, 2, 0.9, 0.35, 1.5);
    ModelParams p;
    p.kappa = 8.0;
    p.a0 = 0.02;
    p.a1 = 0.02;
    p.nu = 0.0;
    SchemeConfig cfg;
    cfg.dt = 0.02;
    Stepper st(&s.forms, &s.loads, p, cfg);
    SystemState state = st.initial_state();

    double peak = 0.0, max_res = 0.0;
    std::vector<double> z_prev = state.z.values;
    int n_debonded_steps = 0;
    for (int i = 0; i < 100; ++i) {
        st.step(state);
        bool changed = false;
        for (int c = 0; c < state.z.size(); ++c) {
            CHECK(state.z.values[c] <= z_prev[c]);
            CHECK(state.z.values[c] >= 0.0);
            CHECK(state.z.values[c] <= 1.0);
            if (state.z.values[c] != z_prev[c]) changed = true;
        }
        if (changed) ++n_debonded_steps;
        z_prev = state.z.values;
        peak = std::max(peak, std::abs(st.total_energy(state)));
        max_res = std::max(max_res, std::abs(st.balance_residual(state)));
    }
    CHECK(n_debonded_steps > 0);  // the scenario must exercise debonding
    CHECK(max_res <= 1e-3 * peak);

    // Semistability margin after the run.
    CHECK(st.semistability_margin(state, 100, 77) >= -1e-9 * (1.0 + peak));
}

TEST_CASE("balance residual is first order: halving dt roughly halves it")
{
    auto max_residual = [](double dt) {
        SlabSetup s = make_slab_setup(4, 4, 2, 0.9, 0.35, 1.5);
        ModelParams p;
        p.kappa = 8.0;
        p.a0 = 0.02;
        p.a1 = 0.02;
        SchemeConfig cfg;
        cfg.dt = dt;
        Stepper st(&s.forms, &s.loads, p, cfg);
        SystemState state = st.initial_state();
        double worst = 0.0;
        int n = int(std::round(2.0 / dt));
        for (int i = 0; i < n; ++i) {
            st.step(state);
            worst = std::max(worst, std::abs(st.balance_residual(state)));
        }
        return worst;
    };
    double r1 = max_residual(0.02);
    double r2 = max_residual(0.01);
    CHECK(r1 / r2 > 1.2);
    CHECK(r1 / r2 < 4.0);
}

TEST_CASE("trajectory CSV and checkpoint JSON round trips")
{
    std::vector<StepRecord> recs{{0.1, 1, 2, 3, 4, 5, 10, 6, 1e-7},
                                 {0.2, 1.5, 2.5, 3.5, 4.5, 5.5, 11.5, 6.5, -2e-7}};
    std::string path = "traj_roundtrip_test.csv";
    write_trajectory_csv(path, recs);
    auto back = read_trajectory_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[1].E_total == recs[1].E_total);
    CHECK(back[0].balance_residual == recs[0].balance_residual);
    std::remove(path.c_str());

    SystemState s;
    s.t = 0.7;
    s.u = Eigen::VectorXd::Random(5);
    s.v = Eigen::VectorXd::Random(5);
    s.a = Eigen::VectorXd::Random(5);
    s.z = AdhesionField::uniform(2, 2, 0.5, 0.5, 1.0);
    s.z.values[2] = 0.0;
    s.V_cum = 0.3;
    s.R_cum = 0.1;
    s.power_cum = -0.2;
    s.K0 = 0.05;
    s.E0 = -0.4;
    SystemState r = state_from_json(state_to_json(s));
    CHECK(r.t == s.t);
    CHECK((r.u - s.u).norm() == 0.0);
    CHECK(r.z.values == s.z.values);
    CHECK(r.E0 == s.E0);
}
