#include "plates/mesh.hpp"

#include <stdexcept>

namespace plates {

SlabMesh build_slab_mesh(int nx, int ny, int nz)
{
    if (nx < 2 || nx % 2 != 0) throw std::invalid_argument("nx must be even and >= 2");
    if (ny < 1 || nz < 1) throw std::invalid_argument("ny, nz must be >= 1");

    SlabMesh m;
    m.nx = nx;
    m.ny = ny;
    m.nz = nz;
    m.hx = 2.0 / nx;
    m.hy = 1.0 / ny;
    m.hz = 1.0 / nz;

    const int mx = nx / 2;
    const int nyy = ny + 1, nzz = nz + 1;
    auto base = [&](int ix, int iy, int iz) { return (ix * nyy + iy) * nzz + iz; };
    const int n_base = (nx + 1) * nyy * nzz;
    auto dup = [&](int iy, int iz) { return n_base + iy * nzz + iz; };

    m.coords.resize(n_base + nyy * nzz);
    for (int ix = 0; ix <= nx; ++ix)
        for (int iy = 0; iy <= ny; ++iy)
            for (int iz = 0; iz <= nz; ++iz)
                m.coords[base(ix, iy, iz)] =
                    Eigen::Vector3d(-1.0 + ix * m.hx, iy * m.hy, -0.5 + iz * m.hz);
    for (int iy = 0; iy <= ny; ++iy)
        for (int iz = 0; iz <= nz; ++iz) m.coords[dup(iy, iz)] = m.coords[base(mx, iy, iz)];

    auto node_of = [&](int cx, int ix, int iy, int iz) {
        if (ix == mx && cx >= mx) return dup(iy, iz);
        return base(ix, iy, iz);
    };
    for (int cx = 0; cx < nx; ++cx)
        for (int cy = 0; cy < ny; ++cy)
            for (int cz = 0; cz < nz; ++cz) {
                std::array<int, 8> cell;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        for (int c = 0; c < 2; ++c)
                            cell[a * 4 + b * 2 + c] = node_of(cx, cx + a, cy + b, cz + c);
                m.cells.push_back(cell);
            }

    for (int iy = 0; iy <= ny; ++iy)
        for (int iz = 0; iz <= nz; ++iz) {
            m.dirichlet_nodes.push_back(base(0, iy, iz));
            m.dirichlet_nodes.push_back(base(nx, iy, iz));
        }

    for (int iy = 0; iy < ny; ++iy)
        for (int iz = 0; iz < nz; ++iz) {
            m.iface_minus.push_back({base(mx, iy, iz), base(mx, iy + 1, iz),
                                     base(mx, iy, iz + 1), base(mx, iy + 1, iz + 1)});
            m.iface_plus.push_back(
                {dup(iy, iz), dup(iy + 1, iz), dup(iy, iz + 1), dup(iy + 1, iz + 1)});
        }
    return m;
}

PlateMesh build_plate_mesh(int nx, int ny)
{
    if (nx < 2 || nx % 2 != 0) throw std::invalid_argument("nx must be even and >= 2");
    if (ny < 1) throw std::invalid_argument("ny must be >= 1");

    PlateMesh m;
    m.nx = nx;
    m.ny = ny;
    m.hx = 2.0 / nx;
    m.hy = 1.0 / ny;

    const int mx = nx / 2;
    const int nyy = ny + 1;
    auto base = [&](int ix, int iy) { return ix * nyy + iy; };
    const int n_base = (nx + 1) * nyy;
    auto dup = [&](int iy) { return n_base + iy; };

    m.coords.resize(n_base + nyy);
    for (int ix = 0; ix <= nx; ++ix)
        for (int iy = 0; iy <= ny; ++iy)
            m.coords[base(ix, iy)] = Eigen::Vector2d(-1.0 + ix * m.hx, iy * m.hy);
    for (int iy = 0; iy <= ny; ++iy) m.coords[dup(iy)] = m.coords[base(mx, iy)];

    auto node_of = [&](int cx, int ix, int iy) {
        if (ix == mx && cx >= mx) return dup(iy);
        return base(ix, iy);
    };
    for (int cx = 0; cx < nx; ++cx)
        for (int cy = 0; cy < ny; ++cy)
            m.cells.push_back({node_of(cx, cx, cy), node_of(cx, cx + 1, cy),
                               node_of(cx, cx, cy + 1), node_of(cx, cx + 1, cy + 1)});

    for (int iy = 0; iy <= ny; ++iy) {
        m.dirichlet_nodes.push_back(base(0, iy));
        m.dirichlet_nodes.push_back(base(nx, iy));
    }

    for (int iy = 0; iy < ny; ++iy) {
        m.iface_minus.push_back({base(mx, iy), base(mx, iy + 1)});
        m.iface_plus.push_back({dup(iy), dup(iy + 1)});
    }
    return m;
}

}  // namespace plates
