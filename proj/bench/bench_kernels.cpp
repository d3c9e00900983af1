// Timing comparison of the serial reference assembly/energy kernels against
// the OpenMP paths, plus a bitwise agreement check. Not part of the test
// suite; run by hand when touching the kernels.
#include <chrono>
#include <cstdio>

#include "plates/fem.hpp"

using namespace plates;
using clk = std::chrono::steady_clock;

static double ms(clk::time_point a, clk::time_point b)
{
    return std::chrono::duration<double, std::milli>(b - a).count();
}

int main(int argc, char** argv)
{
    int n = argc > 1 ? std::atoi(argv[1]) : 24;
    int reps = argc > 2 ? std::atoi(argv[2]) : 5;
    SlabMesh mesh = build_slab_mesh(n, n, n / 2);
    SymTensor4 c = make_isotropic(1.0, 1.0);
    Mat24 ke = hex_stiffness(c, 1.0, mesh.hx, mesh.hy, mesh.hz);
    std::printf("slab %dx%dx%d, %d cells, %d reps\n", n, n, n / 2, mesh.n_cells(), reps);

    SparseMat serial, parallel;
    double t_serial = 0.0, t_parallel = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto t0 = clk::now();
        serial = assemble_slab_matrix(mesh, ke, false);
        auto t1 = clk::now();
        parallel = assemble_slab_matrix(mesh, ke, true);
        auto t2 = clk::now();
        t_serial += ms(t0, t1);
        t_parallel += ms(t1, t2);
    }
    double diff = (serial - parallel).norm();
    std::printf("assembly: serial %8.2f ms   parallel %8.2f ms   speedup %.2fx   |diff| %g\n",
                t_serial / reps, t_parallel / reps, t_serial / t_parallel, diff);

    Eigen::VectorXd u = Eigen::VectorXd::Random(3 * mesh.n_nodes());
    double e_serial = 0.0, e_parallel = 0.0;
    t_serial = t_parallel = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto t0 = clk::now();
        e_serial = slab_form_energy(mesh, c, 1.0, u, 2, false);
        auto t1 = clk::now();
        e_parallel = slab_form_energy(mesh, c, 1.0, u, 2, true);
        auto t2 = clk::now();
        t_serial += ms(t0, t1);
        t_parallel += ms(t1, t2);
    }
    std::printf("energy:   serial %8.2f ms   parallel %8.2f ms   speedup %.2fx   |diff| %g\n",
                t_serial / reps, t_parallel / reps, t_serial / t_parallel,
                std::abs(e_serial - e_parallel));
    return diff == 0.0 ? 0 : 1;
}
