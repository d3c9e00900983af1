#include "plates/stepper.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "plates/mincut.hpp"

namespace plates {

Stepper::Stepper(const AssembledForms* forms, const LoadData* loads, const ModelParams& params,
                 const SchemeConfig& cfg)
    : forms_(forms), loads_(loads), params_(params), cfg_(cfg)
{
    params_.validate();
    if (!(cfg_.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(cfg_.solver_tol > 0.0 && cfg_.solver_tol < 1.0))
        throw std::invalid_argument("solver_tol must be in (0,1)");
    mass_bc_ = forms_->mass;
    damp_bc_ = forms_->damping;
    stiff_bc_ = forms_->stiffness;
    zero_rows_cols(mass_bc_, forms_->dirichlet_dofs, false);
    zero_rows_cols(damp_bc_, forms_->dirichlet_dofs, false);
    zero_rows_cols(stiff_bc_, forms_->dirichlet_dofs, false);
    pinned_.assign(forms_->n_dofs, 0);
    for (int d : forms_->dirichlet_dofs) pinned_[d] = 1;
}

SparseMat Stepper::adhesive_matrix(const AdhesionField& z) const
{
    Eigen::VectorXd w(forms_->jump.rows());
    for (int c = 0; c < z.size(); ++c) {
        double base = params_.kappa * z.cell_areas[c] * z.values[c];
        w(3 * c + 0) = base;
        w(3 * c + 1) = base;
        w(3 * c + 2) = base * cfg_.q3;
    }
    return SparseMat(forms_->jump.transpose()) * w.asDiagonal() * forms_->jump;
}

Eigen::VectorXd Stepper::penalty_force(const std::vector<Eigen::Vector3d>& jumps) const
{
    Eigen::VectorXd s = Eigen::VectorXd::Zero(forms_->jump.rows());
    if (params_.nu > 0.0) {
        for (std::size_t c = 0; c < jumps.size(); ++c) {
            Eigen::Vector3d planar(jumps[c](0), jumps[c](1), 0.0);
            auto yp = yosida_pair(planar, params_.n_interface, params_.lambda_yosida);
            s.segment<3>(3 * int(c)) =
                params_.nu * forms_->iface_area[c] * Eigen::Vector3d(yp.alpha(0), yp.alpha(1), 0.0);
        }
    }
    return forms_->jump.transpose() * s;
}

SparseMat Stepper::penalty_jacobian(const std::vector<Eigen::Vector3d>& jumps) const
{
    std::vector<Eigen::Triplet<double>> trips;
    if (params_.nu > 0.0) {
        Eigen::Vector3d n(params_.n_interface(0), params_.n_interface(1), 0.0);
        for (std::size_t c = 0; c < jumps.size(); ++c) {
            Eigen::Vector3d planar(jumps[c](0), jumps[c](1), 0.0);
            if (planar.dot(n) < 0.0) {
                double w = params_.nu * forms_->iface_area[c] * 2.0 / params_.lambda_yosida;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        if (n(i) * n(j) != 0.0)
                            trips.emplace_back(3 * int(c) + i, 3 * int(c) + j, w * n(i) * n(j));
            }
        }
    }
    SparseMat w(forms_->jump.rows(), forms_->jump.rows());
    w.setFromTriplets(trips.begin(), trips.end());
    return SparseMat(forms_->jump.transpose()) * w * forms_->jump;
}

Eigen::VectorXd Stepper::solve_system(const SparseMat& m, const Eigen::VectorXd& rhs,
                                      const std::string& sig)
{
    if (sig != solver_sig_) {
        solver_.compute(m);
        if (solver_.info() != Eigen::Success)
            throw std::runtime_error("momentum solve: factorization failed");
        solver_sig_ = sig;
    }
    return solver_.solve(rhs);
}

AdhesionField Stepper::semistable_update(const AdhesionField& z_prev,
                                         const std::vector<Eigen::Vector3d>& jumps) const
{
    AdhesionField z = z_prev;
    std::vector<double> gain(z.size());
    for (int c = 0; c < z.size(); ++c) {
        const Eigen::Vector3d& j = jumps[c];
        double q = j(0) * j(0) + j(1) * j(1) + cfg_.q3 * j(2) * j(2);
        gain[c] = 0.5 * params_.kappa * q - params_.a0 - params_.a1;
    }
    if (params_.b == 0.0) {
        for (int c = 0; c < z.size(); ++c)
            if (z.values[c] > 0.0 && gain[c] > 0.0) z.values[c] = 0.0;
        return z;
    }
    if (!z_prev.admissible(true))
        throw std::invalid_argument("semistable update: z must be binary when b > 0");
    std::vector<double> cost1(z.size());
    std::vector<int> pin(z.size(), -1);
    for (int c = 0; c < z.size(); ++c) {
        cost1[c] = z.cell_areas[c] * gain[c];
        if (z_prev.values[c] == 0.0) pin[c] = 0;
    }
    std::vector<std::tuple<int, int, double>> edges;
    for (int ia = 0; ia < z.n_along; ++ia)
        for (int it = 0; it < z.n_thick; ++it) {
            int c = z.idx(ia, it);
            if (ia + 1 < z.n_along)
                edges.emplace_back(c, z.idx(ia + 1, it), params_.b * z.h_thick);
            if (it + 1 < z.n_thick)
                edges.emplace_back(c, z.idx(ia, it + 1), params_.b * z.h_along);
        }
    std::vector<int> labels = min_cut_binary(z.size(), cost1, edges, pin, true);
    for (int c = 0; c < z.size(); ++c) z.values[c] = double(labels[c]);
    return z;
}

SystemState Stepper::initial_state(const AdhesionField& z_candidate) const
{
    SystemState s;
    s.t = 0.0;
    s.u = Eigen::VectorXd::Zero(forms_->n_dofs);
    s.v = Eigen::VectorXd::Zero(forms_->n_dofs);
    s.z = semistable_update(z_candidate, forms_->jumps_of(s.u));

    // Initial acceleration from the momentum balance at t = 0, solved with
    // the Newmark system matrix (the mass alone may be singular in the plate
    // limit variants).
    double dt = cfg_.dt;
    SparseMat sys = mass_bc_ + cfg_.gamma * dt * damp_bc_ +
                    cfg_.beta * dt * dt * (stiff_bc_ + adhesive_matrix(s.z));
    std::vector<Eigen::Triplet<double>> diag;
    for (int d : forms_->dirichlet_dofs) diag.emplace_back(d, d, 1.0);
    SparseMat id(forms_->n_dofs, forms_->n_dofs);
    id.setFromTriplets(diag.begin(), diag.end());
    sys += id;
    Eigen::VectorXd rhs = loads_->force(0.0, forms_->n_dofs);
    zero_entries(rhs, forms_->dirichlet_dofs);
    Eigen::SimplicialLDLT<SparseMat> solver(sys);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("initial acceleration: factorization failed");
    s.a = solver.solve(rhs);

    s.K0 = kinetic_energy(s);
    s.E0 = bulk(s) + surface(s);
    return s;
}

SystemState Stepper::initial_state(double z0) const
{
    return initial_state(forms_->make_adhesion(z0));
}

void Stepper::momentum_step(SystemState& s, const AdhesionField& z_new)
{
    const double dt = cfg_.dt, beta = cfg_.beta, gamma = cfg_.gamma;
    const double c0 = 1.0 / (beta * dt * dt);
    const double c2 = 1.0 / (2.0 * beta) - 1.0;
    const double t1 = s.t + dt;
    const int n = forms_->n_dofs;

    SparseMat adh = adhesive_matrix(z_new);
    Eigen::VectorXd f1 = loads_->force(t1, n);
    zero_entries(f1, forms_->dirichlet_dofs);
    double scale = std::max(1.0, f1.norm());

    std::ostringstream zsig;
    for (double zv : z_new.values) zsig << zv << ",";

    Eigen::VectorXd u1 = s.u;
    Eigen::VectorXd a_new, v_new;
    for (int it = 0; it <= cfg_.max_newton; ++it) {
        a_new = c0 * (u1 - s.u - dt * s.v) - c2 * s.a;
        v_new = s.v + dt * ((1.0 - gamma) * s.a + gamma * a_new);
        auto jumps = forms_->jumps_of(u1);
        Eigen::VectorXd res = mass_bc_ * a_new + damp_bc_ * v_new + stiff_bc_ * u1 + adh * u1 +
                              penalty_force(jumps) - f1;
        zero_entries(res, forms_->dirichlet_dofs);
        if (res.norm() <= cfg_.solver_tol * scale) break;
        if (it == cfg_.max_newton)
            throw std::runtime_error("momentum solve: Newton did not converge, residual " +
                                     std::to_string(res.norm()));

        std::string active;
        if (params_.nu > 0.0) {
            Eigen::Vector3d npl(params_.n_interface(0), params_.n_interface(1), 0.0);
            for (const auto& j : jumps)
                active.push_back(Eigen::Vector3d(j(0), j(1), 0.0).dot(npl) < 0.0 ? '1' : '0');
        }
        SparseMat jac = c0 * mass_bc_ + (gamma / (beta * dt)) * damp_bc_ + stiff_bc_ + adh +
                        penalty_jacobian(jumps);
        std::vector<Eigen::Triplet<double>> diag;
        for (int d : forms_->dirichlet_dofs) diag.emplace_back(d, d, 1.0);
        SparseMat id(n, n);
        id.setFromTriplets(diag.begin(), diag.end());
        jac += id;
        u1 -= solve_system(jac, res, "dt=" + std::to_string(dt) + ";z=" + zsig.str() +
                                         ";act=" + active);
    }

    Eigen::VectorXd v_mid = 0.5 * (s.v + v_new);
    s.V_cum += dt * v_mid.dot(damp_bc_ * v_mid);
    Eigen::VectorXd f0 = loads_->force(s.t, n);
    zero_entries(f0, forms_->dirichlet_dofs);
    s.power_cum += -(f1 - f0).dot(0.5 * (s.u + u1));
    s.u = u1;
    s.v = v_new;
    s.a = a_new;
    s.t = t1;
}

void Stepper::step(SystemState& s)
{
    AdhesionField z_new = semistable_update(s.z, forms_->jumps_of(s.u));
    Dissipation d = dissipation_R(s.z, z_new, params_.a1);
    if (!d.admissible) throw std::runtime_error("semistable update increased z");
    s.R_cum += d.value;
    s.z = z_new;
    momentum_step(s, z_new);
}

double Stepper::kinetic_energy(const SystemState& s) const { return kinetic(mass_bc_, s.v); }

double Stepper::bulk(const SystemState& s) const
{
    Eigen::VectorXd f = loads_->force(s.t, forms_->n_dofs);
    zero_entries(f, forms_->dirichlet_dofs);
    return bulk_energy(stiff_bc_, s.u, f);
}

double Stepper::surface(const SystemState& s) const
{
    if (s.z.size() == 0) return 0.0;
    return surface_energy(forms_->jumps_of(s.u), s.z, params_, cfg_.q3);
}

double Stepper::total_energy(const SystemState& s) const
{
    return kinetic_energy(s) + bulk(s) + surface(s);
}

double Stepper::balance_residual(const SystemState& s) const
{
    return (kinetic_energy(s) + s.V_cum + s.R_cum + bulk(s) + surface(s)) -
           (s.K0 + s.E0 + s.power_cum);
}

double Stepper::semistability_margin(const SystemState& s, int n_competitors,
                                     unsigned seed) const
{
    if (s.z.size() == 0) return 0.0;
    auto jumps = forms_->jumps_of(s.u);
    double e_ref = surface_energy(jumps, s.z, params_, cfg_.q3);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_competitors; ++k) {
        double p = u01(rng);
        AdhesionField zt = s.z;
        for (int c = 0; c < zt.size(); ++c)
            if (zt.values[c] > 0.0 && u01(rng) < p) zt.values[c] = 0.0;
        double diss = dissipation_R(s.z, zt, params_.a1).value;
        double trial = surface_energy(jumps, zt, params_, cfg_.q3) - e_ref + diss;
        margin = std::min(margin, trial);
    }
    return margin;
}

StepRecord Stepper::record(const SystemState& s) const
{
    StepRecord r;
    r.t = s.t;
    r.K = kinetic_energy(s);
    r.V_cum = s.V_cum;
    r.R_cum = s.R_cum;
    r.E_bulk = bulk(s);
    r.E_surf = surface(s);
    r.E_total = r.K + r.E_bulk + r.E_surf;
    r.power_cum = s.power_cum;
    r.balance_residual = balance_residual(s);
    return r;
}

void write_trajectory_csv(const std::string& path, const std::vector<StepRecord>& records)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,K,V_cum,R_cum,E_bulk,E_surf,E_total,power_cum,balance_residual\n";
    char line[512];
    for (const auto& r : records) {
        std::snprintf(line, sizeof line,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.K,
                      r.V_cum, r.R_cum, r.E_bulk, r.E_surf, r.E_total, r.power_cum,
                      r.balance_residual);
        out << line;
    }
}

std::vector<StepRecord> read_trajectory_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty trajectory " + path);
    std::vector<StepRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        StepRecord r;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &r.t, &r.K,
                        &r.V_cum, &r.R_cum, &r.E_bulk, &r.E_surf, &r.E_total, &r.power_cum,
                        &r.balance_residual) != 9)
            throw std::runtime_error("malformed trajectory line: " + line);
        out.push_back(r);
    }
    return out;
}

namespace {

json vector_to_json(const Eigen::VectorXd& v)
{
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Eigen::VectorXd vector_from_json(const json& j)
{
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(int(i)) = j.at(i).get<double>();
    return v;
}

}  // namespace

json state_to_json(const SystemState& s)
{
    json j;
    j["t"] = s.t;
    j["u"] = vector_to_json(s.u);
    j["v"] = vector_to_json(s.v);
    j["a"] = vector_to_json(s.a);
    j["z"] = {{"values", s.z.values},
              {"cell_areas", s.z.cell_areas},
              {"n_along", s.z.n_along},
              {"n_thick", s.z.n_thick},
              {"h_along", s.z.h_along},
              {"h_thick", s.z.h_thick}};
    j["V_cum"] = s.V_cum;
    j["R_cum"] = s.R_cum;
    j["power_cum"] = s.power_cum;
    j["K0"] = s.K0;
    j["E0"] = s.E0;
    return j;
}

SystemState state_from_json(const json& j)
{
    SystemState s;
    s.t = j.at("t").get<double>();
    s.u = vector_from_json(j.at("u"));
    s.v = vector_from_json(j.at("v"));
    s.a = vector_from_json(j.at("a"));
    const json& z = j.at("z");
    s.z.values = z.at("values").get<std::vector<double>>();
    s.z.cell_areas = z.at("cell_areas").get<std::vector<double>>();
    s.z.n_along = z.at("n_along").get<int>();
    s.z.n_thick = z.at("n_thick").get<int>();
    s.z.h_along = z.at("h_along").get<double>();
    s.z.h_thick = z.at("h_thick").get<double>();
    s.V_cum = j.at("V_cum").get<double>();
    s.R_cum = j.at("R_cum").get<double>();
    s.power_cum = j.at("power_cum").get<double>();
    s.K0 = j.at("K0").get<double>();
    s.E0 = j.at("E0").get<double>();
    return s;
}

}  // namespace plates
