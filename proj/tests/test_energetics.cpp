#include "doctest.h"
#include "plates/energetics.hpp"
#include "plates/json_io.hpp"

#include <cmath>
#include <random>

using namespace plates;

namespace {
std::mt19937 rng(7);
double urand(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}
}  // namespace

TEST_CASE("tensor JSON round trip and validation")
{
    SymTensor4 t = make_isotropic(1.2, 0.8);
    json j = tensor_to_json(t);
    SymTensor4 back = tensor_from_json(j);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d)
                    CHECK(back(a, b, c, d) == doctest::Approx(t(a, b, c, d)).epsilon(1e-13));

    CHECK_THROWS(tensor_from_json(json{{"nope", 1}}));
    json bad = tensor_to_json(t);
    bad["voigt"][0][1] = bad["voigt"][0][1].get<double>() + 1.0;  // breaks symmetry
    CHECK_THROWS(tensor_from_json(bad));
}

TEST_CASE("ModelParams validation names the field")
{
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.kappa = 0.0;
    CHECK_THROWS_WITH_AS(p.validate(), "kappa must be > 0", std::invalid_argument);
    p = ModelParams{};
    p.n_interface = Eigen::Vector3d(1, 1, 0);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("yosida_pair worked examples")
{
    Eigen::Vector3d n(1, 0, 0);
    auto inside = yosida_pair({3, -1, 2}, n, 0.5);
    CHECK(inside.alpha_hat == 0.0);
    CHECK(inside.alpha.norm() == 0.0);

    auto outside = yosida_pair({-2, 1, 0}, n, 0.5);
    CHECK(outside.alpha_hat == doctest::Approx(8.0));
    CHECK(outside.alpha(0) == doctest::Approx(-8.0));
    CHECK(outside.alpha(1) == 0.0);
    CHECK(outside.alpha(2) == 0.0);
}

TEST_CASE("yosida_pair gradient matches finite differences")
{
    Eigen::Vector3d n = Eigen::Vector3d(0.3, -0.2, 0.5).normalized();
    double lambda = 0.7, h = 1e-6;
    for (int it = 0; it < 100; ++it) {
        Eigen::Vector3d v(urand(-1, 1), urand(-1, 1), urand(-1, 1));
        if (it % 3 == 0) v -= v.dot(n) * n * (1.0 - urand(-1e-3, 1e-3));  // near the cone boundary
        auto p = yosida_pair(v, n, lambda);
        for (int k = 0; k < 3; ++k) {
            Eigen::Vector3d vp = v, vm = v;
            vp(k) += h;
            vm(k) -= h;
            double fd = (yosida_pair(vp, n, lambda).alpha_hat -
                         yosida_pair(vm, n, lambda).alpha_hat) /
                        (2 * h);
            CHECK(p.alpha(k) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("TimeProfile derivatives against finite differences")
{
    TimeProfile g{0.1, -0.4, 0.7, 0.2, 0.5, 3.0, 0.3};
    double h = 1e-5;
    for (double t : {0.0, 0.3, 1.1}) {
        CHECK(g.d1(t) == doctest::Approx((g.value(t + h) - g.value(t - h)) / (2 * h)).epsilon(1e-6));
        CHECK(g.d2(t) == doctest::Approx((g.d1(t + h) - g.d1(t - h)) / (2 * h)).epsilon(1e-6));
        CHECK(g.d3(t) == doctest::Approx((g.d2(t + h) - g.d2(t - h)) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("LoadData: force rate is the time derivative of force")
{
    int n = 4;
    LoadData ld;
    ld.b_f = Eigen::VectorXd::Random(n);
    ld.b_stiff = Eigen::VectorXd::Random(n);
    ld.b_damp = Eigen::VectorXd::Random(n);
    ld.b_mass = Eigen::VectorXd::Random(n);
    ld.g_f = TimeProfile{0, 1, 0.5, 0, 0.2, 2.0, 0};
    ld.g_w = TimeProfile{0, 0, 1, 0.3, 0, 0, 0};
    double h = 1e-6, t = 0.4;
    Eigen::VectorXd fd = (ld.force(t + h, n) - ld.force(t - h, n)) / (2 * h);
    CHECK((ld.force_rate(t, n) - fd).norm() < 1e-7);

    // Accumulated power against direct bulk-energy difference for frozen u.
    Eigen::VectorXd u = Eigen::VectorXd::Random(n);
    SparseMat k(n, n);  // zero stiffness isolates the load term
    double t1 = 0.9;
    int steps = 20000;
    double acc = 0.0, dt = t1 / steps;
    for (int s = 0; s < steps; ++s) acc += dt * power_of_loads((s + 0.5) * dt, u, ld);
    double diff = bulk_energy(k, u, ld.force(t1, n)) - bulk_energy(k, u, ld.force(0.0, n));
    CHECK(acc == doctest::Approx(diff).epsilon(1e-8));
}

TEST_CASE("dissipation_R")
{
    AdhesionField z0 = AdhesionField::uniform(2, 2, 0.5, 0.5, 1.0);
    AdhesionField z1 = z0;
    CHECK(dissipation_R(z0, z1, 2.0).value == 0.0);

    z1.values[0] = 0.0;
    auto d = dissipation_R(z0, z1, 2.0);
    CHECK(d.admissible);
    CHECK(d.value == doctest::Approx(0.5));

    AdhesionField z2 = z0;
    z2.values[3] = 1.0 + 1e-9;
    z0.values[3] = 1.0;
    CHECK(!dissipation_R(z0, z2, 2.0).admissible);
}

TEST_CASE("dissipation_R homogeneity and additivity")
{
    AdhesionField z0 = AdhesionField::uniform(3, 2, 0.4, 0.3, 1.0);
    AdhesionField za = z0, zb = z0, zab = z0;
    za.values[1] = 0.2;
    zb.values[4] = 0.6;
    zab.values[1] = 0.2;
    zab.values[4] = 0.6;
    double va = dissipation_R(z0, za, 1.5).value;
    double vb = dissipation_R(z0, zb, 1.5).value;
    CHECK(dissipation_R(z0, zab, 1.5).value == doctest::Approx(va + vb).epsilon(1e-13));

    AdhesionField zs = z0;
    zs.values[1] = 1.0 - 0.5 * (1.0 - za.values[1]);
    CHECK(dissipation_R(z0, zs, 1.5).value == doctest::Approx(0.5 * va).epsilon(1e-13));
}

TEST_CASE("perimeter on blocks")
{
    AdhesionField z = AdhesionField::uniform(4, 4, 0.25, 0.25, 0.0);
    CHECK(perimeter(z) == 0.0);

    // Single cell of ones: 4 edges of length h, two interior per direction.
    z.values[z.idx(1, 1)] = 1.0;
    CHECK(perimeter(z) == doctest::Approx(4 * 0.25));

    // 2x2 block inside: 8 h.
    AdhesionField zb = AdhesionField::uniform(4, 4, 0.25, 0.25, 0.0);
    for (int ia : {1, 2})
        for (int it : {1, 2}) zb.values[zb.idx(ia, it)] = 1.0;
    CHECK(perimeter(zb) == doctest::Approx(8 * 0.25));

    // Flip invariance.
    AdhesionField zf = zb;
    for (auto& v : zf.values) v = 1.0 - v;
    CHECK(perimeter(zf) == doctest::Approx(perimeter(zb)));
}

TEST_CASE("surface_energy worked example and affinity in z")
{
    ModelParams p;
    p.kappa = 2.0;
    p.a0 = 1.0;
    p.nu = 0.0;
    p.b = 0.0;

    AdhesionField z = AdhesionField::uniform(1, 1, 1.0, 1.0, 1.0);
    std::vector<Eigen::Vector3d> jumps{{1, 1, 1}};
    CHECK(surface_energy(jumps, z, p) == doctest::Approx(2.0));

    // With nu = b = 0 the energy is affine in each cell value.
    AdhesionField zg = AdhesionField::uniform(2, 3, 0.3, 0.2, 1.0);
    std::vector<Eigen::Vector3d> jg;
    for (int i = 0; i < zg.size(); ++i)
        jg.push_back({urand(-1, 1), urand(-1, 1), urand(-1, 1)});
    AdhesionField za = zg, zm = zg;
    za.values[2] = 0.0;
    zm.values[2] = 0.5;
    double e1 = surface_energy(jg, zg, p), e0 = surface_energy(jg, za, p);
    CHECK(surface_energy(jg, zm, p) == doctest::Approx(0.5 * (e0 + e1)).epsilon(1e-12));
}

TEST_CASE("surface_energy: penalty sees only the planar jump, q3 weights the normal part")
{
    ModelParams p;
    p.kappa = 2.0;
    p.a0 = 0.5;
    p.nu = 1.5;
    p.lambda_yosida = 0.25;
    AdhesionField z = AdhesionField::uniform(1, 1, 1.0, 1.0, 1.0);

    std::vector<Eigen::Vector3d> open{{0.3, -0.1, 5.0}};  // positive normal gap
    std::vector<Eigen::Vector3d> open0{{0.3, -0.1, 0.0}};
    double pen_open = surface_energy(open, z, p) - surface_energy(open0, z, p);
    CHECK(pen_open == doctest::Approx(0.5 * p.kappa * 25.0));  // only the kappa term reacts to v3

    std::vector<Eigen::Vector3d> inter{{-0.4, 0.2, 0.0}};
    double expected_pen = p.nu * (0.4 * 0.4) / p.lambda_yosida;
    double base = 0.5 * p.kappa * (0.16 + 0.04) - p.a0;
    CHECK(surface_energy(inter, z, p) == doctest::Approx(base + expected_pen));

    // q3 weight scales the normal-jump contribution of the kappa term.
    double e_w = surface_energy(open, z, p, 0.01);
    double e_0 = surface_energy(open0, z, p, 0.01);
    CHECK(e_w - e_0 == doctest::Approx(0.5 * p.kappa * 0.01 * 25.0));
}

TEST_CASE("surface_energy rejects fractional z when b > 0")
{
    ModelParams p;
    p.b = 0.3;
    AdhesionField z = AdhesionField::uniform(2, 2, 0.5, 0.5, 1.0);
    std::vector<Eigen::Vector3d> jumps(4, Eigen::Vector3d::Zero());
    CHECK_NOTHROW(surface_energy(jumps, z, p));
    z.values[1] = 0.5;
    CHECK_THROWS_AS(surface_energy(jumps, z, p), std::invalid_argument);
}

TEST_CASE("quadratic energy helpers")
{
    int n = 3;
    SparseMat m(n, n);
    std::vector<Eigen::Triplet<double>> tr{{0, 0, 2.0}, {1, 1, 3.0}, {2, 2, 1.0}, {0, 1, 0.5}, {1, 0, 0.5}};
    m.setFromTriplets(tr.begin(), tr.end());
    Eigen::VectorXd v(n);
    v << 1, -1, 2;
    CHECK(kinetic(m, v) == doctest::Approx(0.5 * v.dot(m * v)));
    CHECK(viscous_dissipation(m, v) == kinetic(m, v));
    Eigen::VectorXd f(n);
    f << 1, 0, -1;
    CHECK(bulk_energy(m, v, f) == doctest::Approx(kinetic(m, v) - f.dot(v)));
}
