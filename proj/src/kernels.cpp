#include "plates/kernels.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace plates {

namespace {

const double kSqrt2 = std::sqrt(2.0);

// Trilinear shape values and gradients at local coordinates s in [0,1]^3,
// node order l = a*4 + b*2 + c.
void trilinear(const Eigen::Vector3d& s, const Eigen::Vector3d& h, double n[8],
               Eigen::Vector3d dn[8])
{
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                int l = a * 4 + b * 2 + c;
                double gx = a ? s(0) : 1.0 - s(0);
                double gy = b ? s(1) : 1.0 - s(1);
                double gz = c ? s(2) : 1.0 - s(2);
                double dgx = a ? 1.0 : -1.0;
                double dgy = b ? 1.0 : -1.0;
                double dgz = c ? 1.0 : -1.0;
                n[l] = gx * gy * gz;
                dn[l] = Eigen::Vector3d(dgx * gy * gz / h(0), gx * dgy * gz / h(1),
                                        gx * gy * dgz / h(2));
            }
}

// Weighted-Voigt strain-displacement matrix with eps rescaling baked in.
Eigen::Matrix<double, 6, 24> strain_matrix(const Eigen::Vector3d dn[8], double eps)
{
    Eigen::Matrix<double, 6, 24> b = Eigen::Matrix<double, 6, 24>::Zero();
    double ie = 1.0 / eps, ie2 = ie * ie, w = 1.0 / kSqrt2;
    for (int i = 0; i < 8; ++i) {
        b(0, 3 * i + 0) = dn[i](0);
        b(1, 3 * i + 1) = dn[i](1);
        b(2, 3 * i + 2) = dn[i](2) * ie2;
        b(3, 3 * i + 1) = w * dn[i](2) * ie;
        b(3, 3 * i + 2) = w * dn[i](1) * ie;
        b(4, 3 * i + 0) = w * dn[i](2) * ie;
        b(4, 3 * i + 2) = w * dn[i](0) * ie;
        b(5, 3 * i + 0) = w * dn[i](1);
        b(5, 3 * i + 1) = w * dn[i](0);
    }
    return b;
}

template <class Body>
void for_quad_3d(const QuadRule& q, const Body& body)
{
    for (std::size_t i = 0; i < q.points.size(); ++i)
        for (std::size_t j = 0; j < q.points.size(); ++j)
            for (std::size_t k = 0; k < q.points.size(); ++k)
                body(Eigen::Vector3d(q.points[i], q.points[j], q.points[k]),
                     q.weights[i] * q.weights[j] * q.weights[k]);
}

}  // namespace

QuadRule gauss_rule(int n)
{
    // Points/weights on [-1,1], mapped to [0,1].
    static const double p2 = 1.0 / std::sqrt(3.0);
    static const double p3 = std::sqrt(3.0 / 5.0);
    static const double p4a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    static const double p4b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    static const double w4a = (18.0 + std::sqrt(30.0)) / 36.0;
    static const double w4b = (18.0 - std::sqrt(30.0)) / 36.0;
    std::vector<double> pts, wts;
    switch (n) {
        case 1: pts = {0.0}; wts = {2.0}; break;
        case 2: pts = {-p2, p2}; wts = {1.0, 1.0}; break;
        case 3: pts = {-p3, 0.0, p3}; wts = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}; break;
        case 4: pts = {-p4b, -p4a, p4a, p4b}; wts = {w4b, w4a, w4a, w4b}; break;
        default: throw std::invalid_argument("gauss_rule: order must be 1..4");
    }
    QuadRule q;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        q.points.push_back(0.5 * (pts[i] + 1.0));
        q.weights.push_back(0.5 * wts[i]);
    }
    return q;
}

Mat24 hex_stiffness(const SymTensor4& c, double eps, double hx, double hy, double hz,
                    int qorder)
{
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    Eigen::Matrix<double, 6, 6> v = c.voigt_matrix();
    Eigen::Vector3d h(hx, hy, hz);
    double vol = hx * hy * hz;
    Mat24 ke = Mat24::Zero();
    for_quad_3d(gauss_rule(qorder), [&](const Eigen::Vector3d& s, double w) {
        double n[8];
        Eigen::Vector3d dn[8];
        trilinear(s, h, n, dn);
        auto b = strain_matrix(dn, eps);
        ke += (w * vol) * b.transpose() * v * b;
    });
    return ke;
}

Mat24 hex_mass(double rho, const Eigen::Vector3d& comp_weights, double hx, double hy,
               double hz)
{
    Eigen::Vector3d h(hx, hy, hz);
    double vol = hx * hy * hz;
    Mat24 me = Mat24::Zero();
    for_quad_3d(gauss_rule(2), [&](const Eigen::Vector3d& s, double w) {
        double n[8];
        Eigen::Vector3d dn[8];
        trilinear(s, h, n, dn);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                for (int c = 0; c < 3; ++c)
                    me(3 * i + c, 3 * j + c) += w * vol * rho * comp_weights(c) * n[i] * n[j];
    });
    return me;
}

Mat24 hex_grad3(double hx, double hy, double hz)
{
    Eigen::Vector3d h(hx, hy, hz);
    double vol = hx * hy * hz;
    Mat24 g = Mat24::Zero();
    for_quad_3d(gauss_rule(2), [&](const Eigen::Vector3d& s, double w) {
        double n[8];
        Eigen::Vector3d dn[8];
        trilinear(s, h, n, dn);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) g(3 * i + 2, 3 * j + 2) += w * vol * dn[i].dot(dn[j]);
    });
    return g;
}

SparseMat assemble_slab_matrix(const SlabMesh& mesh, const Mat24& ke, bool parallel)
{
    const int nc = mesh.n_cells();
    std::vector<Eigen::Triplet<double>> trips(std::size_t(nc) * 24 * 24);
#ifdef _OPENMP
#pragma omp parallel for if (parallel) schedule(static)
#endif
    for (int cell = 0; cell < nc; ++cell) {
        const auto& nodes = mesh.cells[cell];
        std::size_t base = std::size_t(cell) * 24 * 24;
        for (int i = 0; i < 8; ++i)
            for (int ci = 0; ci < 3; ++ci)
                for (int j = 0; j < 8; ++j)
                    for (int cj = 0; cj < 3; ++cj) {
                        int li = 3 * i + ci, lj = 3 * j + cj;
                        trips[base + std::size_t(li) * 24 + lj] = Eigen::Triplet<double>(
                            3 * nodes[i] + ci, 3 * nodes[j] + cj, ke(li, lj));
                    }
    }
    (void)parallel;
    SparseMat m(3 * mesh.n_nodes(), 3 * mesh.n_nodes());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

double slab_form_energy(const SlabMesh& mesh, const SymTensor4& c, double eps,
                        const Eigen::VectorXd& u, int qorder, bool parallel)
{
    Eigen::Matrix<double, 6, 6> v = c.voigt_matrix();
    Eigen::Vector3d h(mesh.hx, mesh.hy, mesh.hz);
    double vol = mesh.hx * mesh.hy * mesh.hz;
    QuadRule q = gauss_rule(qorder);
    const int nc = mesh.n_cells();
    std::vector<double> partial(nc, 0.0);
#ifdef _OPENMP
#pragma omp parallel for if (parallel) schedule(static)
#endif
    for (int cell = 0; cell < nc; ++cell) {
        Eigen::Matrix<double, 24, 1> ue;
        for (int i = 0; i < 8; ++i)
            for (int ci = 0; ci < 3; ++ci) ue(3 * i + ci) = u(3 * mesh.cells[cell][i] + ci);
        double acc = 0.0;
        for_quad_3d(q, [&](const Eigen::Vector3d& s, double w) {
            double n[8];
            Eigen::Vector3d dn[8];
            trilinear(s, h, n, dn);
            Eigen::Matrix<double, 6, 1> e = strain_matrix(dn, eps) * ue;
            acc += 0.5 * w * vol * e.dot(v * e);
        });
        partial[cell] = acc;
    }
    (void)parallel;
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double slab_energy_of_strain(const SlabMesh& mesh, const SymTensor4& c,
                             const std::function<Strain3(const Eigen::Vector3d&)>& strain,
                             int qorder)
{
    Eigen::Vector3d h(mesh.hx, mesh.hy, mesh.hz);
    double vol = mesh.hx * mesh.hy * mesh.hz;
    QuadRule q = gauss_rule(qorder);
    double total = 0.0;
    for (int cell = 0; cell < mesh.n_cells(); ++cell) {
        Eigen::Vector3d x0 = mesh.coords[mesh.cells[cell][0]];
        for_quad_3d(q, [&](const Eigen::Vector3d& s, double w) {
            Eigen::Vector3d x = x0 + s.cwiseProduct(h);
            total += w * vol * quadratic_form(c, strain(x));
        });
    }
    return total;
}

Eigen::VectorXd assemble_slab_load(
    const SlabMesh& mesh, const std::function<Eigen::Vector3d(const Eigen::Vector3d&)>& f,
    int qorder)
{
    Eigen::Vector3d h(mesh.hx, mesh.hy, mesh.hz);
    double vol = mesh.hx * mesh.hy * mesh.hz;
    QuadRule q = gauss_rule(qorder);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(3 * mesh.n_nodes());
    for (int cell = 0; cell < mesh.n_cells(); ++cell) {
        Eigen::Vector3d x0 = mesh.coords[mesh.cells[cell][0]];
        for_quad_3d(q, [&](const Eigen::Vector3d& s, double w) {
            Eigen::Vector3d x = x0 + s.cwiseProduct(h);
            Eigen::Vector3d fx = f(x);
            double n[8];
            Eigen::Vector3d dn[8];
            trilinear(s, h, n, dn);
            for (int i = 0; i < 8; ++i)
                for (int ci = 0; ci < 3; ++ci)
                    out(3 * mesh.cells[cell][i] + ci) += w * vol * n[i] * fx(ci);
        });
    }
    return out;
}

void hermite_basis(double x, double h, double val[2][2], double d1[2][2], double d2[2][2])
{
    double s = x / h, s2 = s * s, s3 = s2 * s;
    val[0][0] = 1.0 - 3.0 * s2 + 2.0 * s3;
    val[0][1] = h * (s - 2.0 * s2 + s3);
    val[1][0] = 3.0 * s2 - 2.0 * s3;
    val[1][1] = h * (-s2 + s3);
    d1[0][0] = (-6.0 * s + 6.0 * s2) / h;
    d1[0][1] = 1.0 - 4.0 * s + 3.0 * s2;
    d1[1][0] = (6.0 * s - 6.0 * s2) / h;
    d1[1][1] = -2.0 * s + 3.0 * s2;
    d2[0][0] = (-6.0 + 12.0 * s) / (h * h);
    d2[0][1] = (-4.0 + 6.0 * s) / h;
    d2[1][0] = (6.0 - 12.0 * s) / (h * h);
    d2[1][1] = (-2.0 + 6.0 * s) / h;
}

Mat8 quad_membrane_stiffness(const ReducedTensor& cr, double hx, double hy)
{
    double area = hx * hy, w2 = 1.0 / kSqrt2;
    QuadRule q = gauss_rule(2);
    Mat8 ke = Mat8::Zero();
    // Corner order (0,0),(1,0),(0,1),(1,1).
    const int ax[4] = {0, 1, 0, 1}, by[4] = {0, 0, 1, 1};
    for (std::size_t qi = 0; qi < q.points.size(); ++qi)
        for (std::size_t qj = 0; qj < q.points.size(); ++qj) {
            double sx = q.points[qi], sy = q.points[qj];
            double w = q.weights[qi] * q.weights[qj] * area;
            Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
            for (int l = 0; l < 4; ++l) {
                double gx = ax[l] ? sx : 1.0 - sx;
                double gy = by[l] ? sy : 1.0 - sy;
                double dgx = (ax[l] ? 1.0 : -1.0) / hx;
                double dgy = (by[l] ? 1.0 : -1.0) / hy;
                double dx = dgx * gy, dy = gx * dgy;
                b(0, 2 * l + 0) = dx;
                b(1, 2 * l + 1) = dy;
                b(2, 2 * l + 0) = w2 * dy;
                b(2, 2 * l + 1) = w2 * dx;
            }
            ke += w * b.transpose() * cr.voigt3 * b;
        }
    return ke;
}

Mat16 bfs_bending_stiffness(const ReducedTensor& cr, double hx, double hy)
{
    double area = hx * hy, w2 = kSqrt2;
    QuadRule q = gauss_rule(4);
    Mat16 ke = Mat16::Zero();
    const int ax[4] = {0, 1, 0, 1}, by[4] = {0, 0, 1, 1};
    for (std::size_t qi = 0; qi < q.points.size(); ++qi)
        for (std::size_t qj = 0; qj < q.points.size(); ++qj) {
            double vx[2][2], d1x[2][2], d2x[2][2], vy[2][2], d1y[2][2], d2y[2][2];
            hermite_basis(q.points[qi] * hx, hx, vx, d1x, d2x);
            hermite_basis(q.points[qj] * hy, hy, vy, d1y, d2y);
            double w = q.weights[qi] * q.weights[qj] * area;
            Eigen::Matrix<double, 3, 16> b;
            for (int l = 0; l < 4; ++l)
                for (int p = 0; p < 2; ++p)
                    for (int pq = 0; pq < 2; ++pq) {
                        int k = 4 * l + p + 2 * pq;  // dof order (w, wx, wy, wxy)
                        b(0, k) = d2x[ax[l]][p] * vy[by[l]][pq];
                        b(1, k) = vx[ax[l]][p] * d2y[by[l]][pq];
                        b(2, k) = w2 * d1x[ax[l]][p] * d1y[by[l]][pq];
                    }
            ke += w * b.transpose() * cr.voigt3 * b;
        }
    return ke / 12.0;
}

Mat16 bfs_mass(double rho, double hx, double hy)
{
    double area = hx * hy;
    QuadRule q = gauss_rule(4);
    Mat16 me = Mat16::Zero();
    const int ax[4] = {0, 1, 0, 1}, by[4] = {0, 0, 1, 1};
    for (std::size_t qi = 0; qi < q.points.size(); ++qi)
        for (std::size_t qj = 0; qj < q.points.size(); ++qj) {
            double vx[2][2], d1x[2][2], d2x[2][2], vy[2][2], d1y[2][2], d2y[2][2];
            hermite_basis(q.points[qi] * hx, hx, vx, d1x, d2x);
            hermite_basis(q.points[qj] * hy, hy, vy, d1y, d2y);
            double w = q.weights[qi] * q.weights[qj] * area;
            Eigen::Matrix<double, 16, 1> n;
            for (int l = 0; l < 4; ++l)
                for (int p = 0; p < 2; ++p)
                    for (int pq = 0; pq < 2; ++pq)
                        n(4 * l + p + 2 * pq) = vx[ax[l]][p] * vy[by[l]][pq];
            me += (w * rho) * n * n.transpose();
        }
    return me;
}

SparseMat assemble_plate_stiffness(const PlateMesh& mesh, const Mat8& membrane,
                                   const Mat16& bending)
{
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(mesh.cells.size() * (64 + 256));
    for (const auto& cell : mesh.cells) {
        for (int i = 0; i < 4; ++i)
            for (int ci = 0; ci < 2; ++ci)
                for (int j = 0; j < 4; ++j)
                    for (int cj = 0; cj < 2; ++cj)
                        trips.emplace_back(mesh.membrane_dof(cell[i], ci),
                                           mesh.membrane_dof(cell[j], cj),
                                           membrane(2 * i + ci, 2 * j + cj));
        for (int i = 0; i < 4; ++i)
            for (int ki = 0; ki < 4; ++ki)
                for (int j = 0; j < 4; ++j)
                    for (int kj = 0; kj < 4; ++kj)
                        trips.emplace_back(mesh.deflection_dof(cell[i], ki),
                                           mesh.deflection_dof(cell[j], kj),
                                           bending(4 * i + ki, 4 * j + kj));
    }
    SparseMat m(mesh.n_dofs(), mesh.n_dofs());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

SparseMat assemble_plate_mass(const PlateMesh& mesh, double rho)
{
    Mat16 me = bfs_mass(rho, mesh.hx, mesh.hy);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(mesh.cells.size() * 256);
    for (const auto& cell : mesh.cells)
        for (int i = 0; i < 4; ++i)
            for (int ki = 0; ki < 4; ++ki)
                for (int j = 0; j < 4; ++j)
                    for (int kj = 0; kj < 4; ++kj)
                        trips.emplace_back(mesh.deflection_dof(cell[i], ki),
                                           mesh.deflection_dof(cell[j], kj),
                                           me(4 * i + ki, 4 * j + kj));
    SparseMat m(mesh.n_dofs(), mesh.n_dofs());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

}  // namespace plates
