#ifndef PLATES_MESH_HPP
#define PLATES_MESH_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace plates {

// Structured hexahedral mesh of (-1,1) x (0,1) x (-1/2,1/2) with a doubled
// node sheet on the vertical interface {x1 = 0} and Dirichlet faces at
// x1 = -1 and x1 = 1. Base nodes on the interface plane belong to the minus
// side (x1 < 0); the duplicates belong to the plus side.
struct SlabMesh {
    int nx = 0, ny = 0, nz = 0;
    double hx = 0.0, hy = 0.0, hz = 0.0;

    std::vector<Eigen::Vector3d> coords;          // per node
    std::vector<std::array<int, 8>> cells;        // local order l = a*4 + b*2 + c
    std::vector<int> dirichlet_nodes;

    // Interface cells, (ny x nz) grid, idx = iy * nz + iz; each carries the
    // 4 corner nodes of the minus and plus sheet in matching order.
    std::vector<std::array<int, 4>> iface_minus;
    std::vector<std::array<int, 4>> iface_plus;

    int n_nodes() const { return int(coords.size()); }
    int n_cells() const { return int(cells.size()); }
    int n_iface_cells() const { return ny * nz; }
    double iface_cell_area() const { return hy * hz; }
};

SlabMesh build_slab_mesh(int nx, int ny, int nz);

// Plate mesh over omega = (-1,1) x (0,1) with the interface line {x1 = 0}
// doubled and Dirichlet edges at x1 = +-1. Each node carries 2 in-plane dofs
// (bilinear) and 4 deflection dofs (value, both slopes, twist; bicubic
// Hermite rectangles). Global dof layout: all membrane dofs first, then all
// deflection dofs.
struct PlateMesh {
    int nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;

    std::vector<Eigen::Vector2d> coords;
    std::vector<std::array<int, 4>> cells;  // local corner order (0,0),(1,0),(0,1),(1,1)
    std::vector<int> dirichlet_nodes;

    // Interface edge segments along x1 = 0, one per iy, with the two end
    // nodes of the minus and plus sheet.
    std::vector<std::array<int, 2>> iface_minus;
    std::vector<std::array<int, 2>> iface_plus;

    int n_nodes() const { return int(coords.size()); }
    int membrane_dof(int node, int c) const { return 2 * node + c; }
    int deflection_dof(int node, int k) const { return 2 * n_nodes() + 4 * node + k; }
    int n_dofs() const { return 6 * n_nodes(); }
};

PlateMesh build_plate_mesh(int nx, int ny);

}  // namespace plates

#endif
