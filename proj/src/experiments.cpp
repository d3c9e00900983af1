#include "plates/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace plates {

std::string variant_name(ModelVariant v)
{
    switch (v) {
        case ModelVariant::physical3d: return "physical3d";
        case ModelVariant::rescaled3d: return "rescaled3d";
        case ModelVariant::limit_undamped: return "limit_undamped";
        case ModelVariant::limit_damped: return "limit_damped";
    }
    throw std::logic_error("unreachable");
}

ModelVariant variant_from_name(const std::string& name)
{
    if (name == "physical3d") return ModelVariant::physical3d;
    if (name == "rescaled3d") return ModelVariant::rescaled3d;
    if (name == "limit_undamped") return ModelVariant::limit_undamped;
    if (name == "limit_damped") return ModelVariant::limit_damped;
    throw std::invalid_argument("config.model.variant: unknown variant \"" + name + "\"");
}

namespace {

const json& need(const json& j, const char* key, const std::string& ctx)
{
    if (!j.is_object() || !j.contains(key))
        throw std::invalid_argument("config." + ctx + key + " is required");
    return j.at(key);
}

double need_number(const json& j, const char* key, const std::string& ctx)
{
    const json& v = need(j, key, ctx);
    if (!v.is_number())
        throw std::invalid_argument("config." + ctx + key + " must be a number");
    return v.get<double>();
}

double opt_number(const json& j, const char* key, double fallback)
{
    if (!j.is_object() || !j.contains(key)) return fallback;
    return j.at(key).get<double>();
}

int need_int(const json& j, const char* key, const std::string& ctx)
{
    const json& v = need(j, key, ctx);
    if (!v.is_number_integer())
        throw std::invalid_argument("config." + ctx + key + " must be an integer");
    return v.get<int>();
}

SymTensor4 parse_tensor(const json& j, const std::string& ctx)
{
    if (j.is_object() && j.contains("isotropic")) {
        const json& iso = j.at("isotropic");
        if (!iso.is_array() || iso.size() != 2)
            throw std::invalid_argument("config." + ctx +
                                        ".isotropic must be [lambda, mu]");
        return make_isotropic(iso[0].get<double>(), iso[1].get<double>());
    }
    if (j.is_object() && j.contains("voigt")) {
        try {
            return tensor_from_json(j);
        } catch (const std::exception& e) {
            throw std::invalid_argument("config." + ctx + ": " + e.what());
        }
    }
    throw std::invalid_argument("config." + ctx + " must contain isotropic or voigt");
}

TimeProfile parse_profile(const json& j, const std::string& ctx)
{
    TimeProfile p;
    if (!j.is_object() || (!j.contains("poly") && !j.contains("sin")))
        throw std::invalid_argument("config." + ctx + " must contain poly and/or sin");
    if (j.contains("poly")) {
        const json& a = j.at("poly");
        if (!a.is_array() || a.empty() || a.size() > 4)
            throw std::invalid_argument("config." + ctx +
                                        ".poly must list 1 to 4 coefficients");
        double* c[4] = {&p.c0, &p.c1, &p.c2, &p.c3};
        for (std::size_t i = 0; i < a.size(); ++i) *c[i] = a[i].get<double>();
    }
    if (j.contains("sin")) {
        const json& a = j.at("sin");
        if (!a.is_array() || a.size() != 3)
            throw std::invalid_argument("config." + ctx +
                                        ".sin must be [amp, freq, phase]");
        p.amp = a[0].get<double>();
        p.freq = a[1].get<double>();
        p.phase = a[2].get<double>();
    }
    return p;
}

AffineField parse_affine(const json& j, const std::string& ctx)
{
    AffineField f;
    if (j.contains("A")) {
        const json& a = j.at("A");
        if (!a.is_array() || a.size() != 3)
            throw std::invalid_argument("config." + ctx + ".A must be a 3x3 array");
        for (int r = 0; r < 3; ++r) {
            if (!a[r].is_array() || a[r].size() != 3)
                throw std::invalid_argument("config." + ctx + ".A must be a 3x3 array");
            for (int c = 0; c < 3; ++c) f.A(r, c) = a[r][c].get<double>();
        }
    }
    if (j.contains("b")) {
        const json& b = j.at("b");
        if (!b.is_array() || b.size() != 3)
            throw std::invalid_argument("config." + ctx + ".b must have 3 entries");
        for (int r = 0; r < 3; ++r) f.b(r) = b[r].get<double>();
    }
    return f;
}

}  // namespace

RunConfig parse_config(const json& j)
{
    RunConfig cfg;

    const json& model = need(j, "model", "");
    cfg.variant = variant_from_name(need(model, "variant", "model.").get<std::string>());
    cfg.eps = opt_number(model, "eps", 1.0);
    if (cfg.eps <= 0.0) throw std::invalid_argument("config.model.eps must be > 0");
    if (cfg.variant == ModelVariant::physical3d) cfg.eps = 1.0;

    const json& mesh = need(j, "mesh", "");
    cfg.nx = need_int(mesh, "nx", "mesh.");
    cfg.ny = need_int(mesh, "ny", "mesh.");
    cfg.nz = need_int(mesh, "nz", "mesh.");
    cfg.nz_interface = mesh.contains("nz_interface") ? mesh.at("nz_interface").get<int>()
                                                     : cfg.nz;
    if (cfg.nx < 2 || cfg.nx % 2 != 0)
        throw std::invalid_argument("config.mesh.nx must be even and >= 2");
    if (cfg.ny < 1 || cfg.nz < 1 || cfg.nz_interface < 1)
        throw std::invalid_argument("config.mesh.ny, nz, nz_interface must be >= 1");

    const json& mat = need(j, "material", "");
    cfg.C = parse_tensor(need(mat, "C", "material."), "material.C");
    cfg.D = parse_tensor(need(mat, "D", "material."), "material.D");
    cfg.rho = need_number(mat, "rho", "material.");
    if (cfg.rho <= 0.0) throw std::invalid_argument("config.material.rho must be > 0");

    const json& adh = need(j, "adhesion", "");
    cfg.params.kappa = need_number(adh, "kappa", "adhesion.");
    cfg.params.a0 = need_number(adh, "a0", "adhesion.");
    cfg.params.a1 = need_number(adh, "a1", "adhesion.");
    cfg.params.b = opt_number(adh, "b", 0.0);
    cfg.params.nu = opt_number(adh, "nu", 0.0);
    cfg.params.lambda_yosida = opt_number(adh, "yosida_lambda", 1.0);
    cfg.params.rho = cfg.rho;
    cfg.scheme.q3 = opt_number(adh, "q3", 1.0);
    cfg.z0 = opt_number(adh, "z0", 1.0);
    if (cfg.z0 < 0.0 || cfg.z0 > 1.0)
        throw std::invalid_argument("config.adhesion.z0 must lie in [0,1]");
    cfg.params.validate();

    const json& time = need(j, "time", "");
    cfg.scheme.dt = need_number(time, "dt", "time.");
    cfg.scheme.T_final = need_number(time, "T", "time.");
    if (cfg.scheme.dt <= 0.0) throw std::invalid_argument("config.time.dt must be > 0");
    if (cfg.scheme.T_final < cfg.scheme.dt)
        throw std::invalid_argument("config.time.T must be >= dt");

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        cfg.scheme.solver_tol = opt_number(s, "tol", cfg.scheme.solver_tol);
        cfg.scheme.max_newton = int(opt_number(s, "max_newton", cfg.scheme.max_newton));
        cfg.scheme.competitor_count =
            int(opt_number(s, "competitors", cfg.scheme.competitor_count));
    }

    const json& loads = need(j, "loads", "");
    if (loads.contains("force")) {
        cfg.f_spat = parse_affine(loads.at("force"), "loads.force");
        cfg.g_f = parse_profile(need(loads.at("force"), "profile", "loads.force."),
                                "loads.force.profile");
    }
    if (loads.contains("dirichlet")) {
        cfg.w_spat = parse_affine(loads.at("dirichlet"), "loads.dirichlet");
        cfg.g_w = parse_profile(need(loads.at("dirichlet"), "profile", "loads.dirichlet."),
                                "loads.dirichlet.profile");
    }
    if (!loads.contains("force") && !loads.contains("dirichlet"))
        throw std::invalid_argument("config.loads must contain force and/or dirichlet");

    if (j.contains("study")) {
        const json& st = j.at("study");
        if (st.contains("nu_list"))
            for (const auto& v : st.at("nu_list")) cfg.nu_list.push_back(v.get<double>());
        if (st.contains("eps_list"))
            for (const auto& v : st.at("eps_list")) cfg.eps_list.push_back(v.get<double>());
        cfg.delta = opt_number(st, "delta", 1.0);
        if (st.contains("Dstar")) {
            cfg.Dstar = parse_tensor(st.at("Dstar"), "study.Dstar");
            cfg.has_dstar = true;
        }
    }

    if (j.contains("output"))
        cfg.output_every = std::max(1, int(opt_number(j.at("output"), "every", 1)));

    return cfg;
}

RunConfig parse_config_file(const std::string& path)
{
    return parse_config(load_json_file(path));
}

BuiltSystem build_system(const RunConfig& cfg)
{
    BuiltSystem sys;
    if (cfg.variant == ModelVariant::physical3d || cfg.variant == ModelVariant::rescaled3d) {
        bool rescaled = cfg.variant == ModelVariant::rescaled3d;
        sys.slab = build_slab_mesh(cfg.nx, cfg.ny, cfg.nz);
        sys.forms = assemble_slab_forms(sys.slab, cfg.C, cfg.D, cfg.rho, cfg.eps, rescaled);
        sys.loads = build_slab_loads(sys.slab, sys.forms, cfg.f_spat, cfg.w_spat, cfg.g_f,
                                     cfg.g_w);
        sys.is_plate = false;
    } else {
        bool damped = cfg.variant == ModelVariant::limit_damped;
        sys.plate = build_plate_mesh(cfg.nx, cfg.ny);
        sys.forms = assemble_plate_forms(sys.plate, cfg.C, cfg.D, cfg.rho, damped,
                                         cfg.nz_interface);
        sys.loads = build_plate_loads(sys.plate, sys.forms, cfg.f_spat, cfg.w_spat, cfg.g_f,
                                      cfg.g_w);
        sys.is_plate = true;
    }
    return sys;
}

RunResult run_simulation(const RunConfig& cfg, unsigned seed)
{
    BuiltSystem sys = build_system(cfg);
    Stepper st(&sys.forms, &sys.loads, cfg.params, cfg.scheme);
    SystemState s = st.initial_state(cfg.z0);

    RunResult r;
    int n_steps = std::max(1, int(std::round(cfg.scheme.T_final / cfg.scheme.dt)));
    int margin_stride = std::max(1, n_steps / 10);

    auto snapshot = [&]() {
        r.hist_times.push_back(s.t);
        r.u_hist.push_back(s.u);
        r.v_hist.push_back(s.v);
        r.a_hist.push_back(s.a);
        r.z_hist.push_back(s.z.values);
    };
    r.records.push_back(st.record(s));
    snapshot();

    bool binary = cfg.params.b > 0.0;
    std::vector<double> z_prev = s.z.values;
    double max_signed = -1e300;
    for (int i = 0; i < n_steps; ++i) {
        st.step(s);
        StepRecord rec = st.record(s);
        r.records.push_back(rec);
        if ((i + 1) % cfg.output_every == 0 || i + 1 == n_steps) snapshot();

        if (!s.z.admissible(binary)) r.admissible = false;
        for (int c = 0; c < s.z.size(); ++c)
            if (s.z.values[c] > z_prev[c] + 1e-14) r.admissible = false;
        z_prev = s.z.values;

        r.peak_energy = std::max(r.peak_energy, std::abs(rec.E_total));
        r.max_residual = std::max(r.max_residual, std::abs(rec.balance_residual));
        max_signed = std::max(max_signed, rec.balance_residual);

        if ((i + 1) % margin_stride == 0 || i + 1 == n_steps)
            r.min_margin = std::min(
                r.min_margin,
                st.semistability_margin(s, cfg.scheme.competitor_count, seed + unsigned(i)));
    }
    r.final_state = s;

    double scale = std::max(1.0, r.peak_energy);
    bool one_sided = sys.forms.damping.norm() == 0.0;
    r.balance_ok = one_sided ? (max_signed <= 1e-3 * scale)
                             : (r.max_residual <= 1e-3 * scale);
    r.semistab_ok = r.min_margin >= -1e-9 * scale;
    return r;
}

json certification_summary(const RunConfig& cfg, const RunResult& r)
{
    json out;
    out["variant"] = variant_name(cfg.variant);
    out["n_steps"] = int(r.records.size()) - 1;
    out["peak_energy"] = r.peak_energy;
    out["max_balance_residual"] = r.max_residual;
    out["min_semistability_margin"] = r.min_margin;
    out["admissible"] = r.admissible;
    out["balance_ok"] = r.balance_ok;
    out["semistable_ok"] = r.semistab_ok;
    out["passed"] = r.admissible && r.balance_ok && r.semistab_ok;
    return out;
}

void rescale_solution(const SlabMesh& mesh, double eps, Eigen::VectorXd& u,
                      std::vector<double>& z)
{
    if (u.size() != 3 * mesh.n_nodes())
        throw std::invalid_argument("rescale_solution: dof count does not match the mesh");
    for (int n = 0; n < mesh.n_nodes(); ++n) u(3 * n + 2) *= eps;
    (void)z;  // the change of variables only relabels the interface cells
}

namespace {

// sqrt of int over the slab of the squared selected eps-rescaled Voigt strain
// components (weighted packing, so shear rows carry their sqrt(2)).
double strain_sel_norm(const SlabMesh& mesh, const Eigen::VectorXd& u, double eps,
                       std::initializer_list<int> rows)
{
    Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
    for (int r : rows) m(r, r) = 2.0;
    SymTensor4 sel = SymTensor4::from_voigt_matrix(m);
    return std::sqrt(std::max(0.0, slab_form_energy(mesh, sel, eps, u, 2, false)));
}

// Adhesive + cone-penalty interface force at the given state.
Eigen::VectorXd interface_force(const AssembledForms& forms, const ModelParams& p, double q3,
                                const std::vector<double>& z, const Eigen::VectorXd& u)
{
    auto jumps = forms.jumps_of(u);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(forms.jump.rows());
    for (std::size_t c = 0; c < jumps.size(); ++c) {
        double base = p.kappa * forms.iface_area[c] * z[c];
        s(3 * c + 0) = base * jumps[c](0);
        s(3 * c + 1) = base * jumps[c](1);
        s(3 * c + 2) = base * q3 * jumps[c](2);
        if (p.nu > 0.0) {
            Eigen::Vector3d planar(jumps[c](0), jumps[c](1), 0.0);
            auto yp = yosida_pair(planar, p.n_interface, p.lambda_yosida);
            s(3 * c + 0) += p.nu * forms.iface_area[c] * yp.alpha(0);
            s(3 * c + 1) += p.nu * forms.iface_area[c] * yp.alpha(1);
        }
    }
    return forms.jump.transpose() * s;
}

// Max over snapshots of the momentum-balance defect with the damping term
// dropped, relative to the load scale.
double undamped_momentum_residual(const AssembledForms& forms, const LoadData& loads,
                                  const ModelParams& p, double q3, const RunResult& r)
{
    SparseMat m = forms.mass, k = forms.stiffness;
    zero_rows_cols(m, forms.dirichlet_dofs, false);
    zero_rows_cols(k, forms.dirichlet_dofs, false);
    double worst = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < r.hist_times.size(); ++i) {
        Eigen::VectorXd f = loads.force(r.hist_times[i], forms.n_dofs);
        zero_entries(f, forms.dirichlet_dofs);
        scale = std::max(scale, f.norm());
        Eigen::VectorXd res =
            m * r.a_hist[i] + k * r.u_hist[i] +
            interface_force(forms, p, q3, r.z_hist[i], r.u_hist[i]) - f;
        zero_entries(res, forms.dirichlet_dofs);
        worst = std::max(worst, res.norm());
    }
    return worst / scale;
}

json make_table(const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows)
{
    json t;
    t["columns"] = columns;
    t["rows"] = rows;
    return t;
}

bool nonincreasing(const std::vector<double>& v, double slack)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1] * (1.0 + slack) + 1e-14) return false;
    return true;
}

}  // namespace

json study_nu_to_zero(const RunConfig& cfg, unsigned seed)
{
    if (cfg.variant != ModelVariant::physical3d && cfg.variant != ModelVariant::rescaled3d)
        throw std::invalid_argument("vanishing-viscosity study: base model must be a 3d slab");
    if (cfg.nu_list.empty())
        throw std::invalid_argument("vanishing-viscosity study: study.nu_list is required");
    for (std::size_t i = 0; i < cfg.nu_list.size(); ++i) {
        if (cfg.nu_list[i] <= 0.0)
            throw std::invalid_argument(
                "vanishing-viscosity study: nu_list entries must be > 0 (nu = 0 is run "
                "separately)");
        if (i > 0 && cfg.nu_list[i] >= cfg.nu_list[i - 1])
            throw std::invalid_argument(
                "vanishing-viscosity study: nu_list must be strictly decreasing");
    }

    std::vector<std::vector<double>> rows;
    std::vector<double> viscous, mom_res;
    RunConfig rc = cfg;
    rc.output_every = 1;
    for (double nu : cfg.nu_list) {
        rc.D = cfg.D.scaled(nu);
        RunResult r = run_simulation(rc, seed);
        BuiltSystem sys = build_system(rc);
        double res = undamped_momentum_residual(sys.forms, sys.loads, rc.params,
                                                rc.scheme.q3, r);
        viscous.push_back(r.final_state.V_cum);
        mom_res.push_back(res);
        rows.push_back({nu, r.final_state.V_cum, res, r.max_residual, r.min_margin,
                        double(r.admissible && r.balance_ok && r.semistab_ok)});
    }

    // Direct nu = 0 run: viscosity off, balance holds one-sidedly.
    rc.D = cfg.D.scaled(0.0);
    RunResult r0 = run_simulation(rc, seed);
    BuiltSystem sys0 = build_system(rc);
    double res0 =
        undamped_momentum_residual(sys0.forms, sys0.loads, rc.params, rc.scheme.q3, r0);
    rows.push_back({0.0, r0.final_state.V_cum, res0, r0.max_residual, r0.min_margin,
                    double(r0.admissible && r0.balance_ok && r0.semistab_ok)});
    viscous.push_back(r0.final_state.V_cum);
    mom_res.push_back(res0);

    json report;
    report["study"] = "nu_to_zero";
    report["tables"]["family"] = make_table(
        {"nu", "viscous_dissipation", "undamped_momentum_residual", "max_balance_residual",
         "min_semistability_margin", "certified"},
        rows);
    report["viscous_monotone"] = nonincreasing(viscous, 1e-10);
    report["momentum_residual_monotone"] = nonincreasing(mom_res, 1e-10);
    report["limit_certified"] = r0.admissible && r0.balance_ok && r0.semistab_ok;
    report["passed"] = report["viscous_monotone"].get<bool>() &&
                       report["momentum_residual_monotone"].get<bool>() &&
                       report["limit_certified"].get<bool>();
    return report;
}

namespace {

void check_eps_list(const std::vector<double>& eps_list, const char* study)
{
    if (eps_list.empty())
        throw std::invalid_argument(std::string(study) + ": study.eps_list is required");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (eps_list[i] <= 0.0 || eps_list[i] > 1.0)
            throw std::invalid_argument(std::string(study) +
                                        ": eps_list entries must lie in (0,1]");
        if (i > 0 && eps_list[i] >= eps_list[i - 1])
            throw std::invalid_argument(std::string(study) +
                                        ": eps_list must be strictly decreasing");
    }
}

// L2 metric on slab displacements for trajectory distances.
SparseMat slab_l2_metric(const SlabMesh& mesh)
{
    return assemble_slab_matrix(
        mesh, hex_mass(1.0, Eigen::Vector3d::Ones(), mesh.hx, mesh.hy, mesh.hz), false);
}

double traj_distance(const SparseMat& lift, const SparseMat& metric,
                     const std::vector<Eigen::VectorXd>& slab_hist,
                     const std::vector<Eigen::VectorXd>& plate_hist)
{
    std::size_t n = std::min(slab_hist.size(), plate_hist.size());
    double worst = 0.0, ref = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd lifted = lift * plate_hist[i];
        Eigen::VectorXd diff = slab_hist[i] - lifted;
        worst = std::max(worst, std::sqrt(std::max(0.0, diff.dot(metric * diff))));
        ref = std::max(ref, std::sqrt(std::max(0.0, lifted.dot(metric * lifted))));
    }
    return worst / ref;
}

}  // namespace

json study_dimred_undamped(const RunConfig& cfg, unsigned seed)
{
    check_eps_list(cfg.eps_list, "thin-plate study (undamped limit)");
    if (cfg.params.b <= 0.0)
        throw std::invalid_argument(
            "thin-plate study (undamped limit): the perimeter coefficient b must be "
            "positive");
    if (cfg.params.nu != 0.0)
        throw std::invalid_argument(
            "thin-plate study (undamped limit): the cone-penalty weight nu must vanish");
    if (cfg.delta < 0.0 || cfg.delta > 3.0)
        throw std::invalid_argument(
            "thin-plate study (undamped limit): the viscosity exponent delta must lie in "
            "[0,3]");
    const SymTensor4& dstar = cfg.has_dstar ? cfg.Dstar : cfg.D;

    // The limit plate run is eps-independent.
    RunConfig pc = cfg;
    pc.variant = ModelVariant::limit_undamped;
    pc.nz_interface = cfg.nz;
    pc.output_every = 1;
    RunResult plate_run = run_simulation(pc, seed);

    SlabMesh slab = build_slab_mesh(cfg.nx, cfg.ny, cfg.nz);
    PlateMesh plate = build_plate_mesh(cfg.nx, cfg.ny);
    SparseMat lift = kl_lift_matrix(plate, slab);
    SparseMat metric = slab_l2_metric(slab);

    std::vector<std::vector<double>> rows;
    std::vector<double> kl_dists;
    std::vector<std::array<double, 3>> diags;
    RunConfig rc = cfg;
    rc.variant = ModelVariant::rescaled3d;
    rc.output_every = 1;
    for (double eps : cfg.eps_list) {
        rc.eps = eps;
        rc.D = dstar.scaled(std::pow(eps, cfg.delta));
        RunResult r = run_simulation(rc, seed);

        double d33 = 0.0, shear = 0.0, vnorm = 0.0;
        BuiltSystem sys = build_system(rc);
        for (std::size_t i = 0; i < r.u_hist.size(); ++i) {
            d33 = std::max(d33, strain_sel_norm(slab, r.u_hist[i], eps, {2}));
            shear = std::max(shear, strain_sel_norm(slab, r.u_hist[i], eps, {3, 4}));
            vnorm = std::max(vnorm, std::sqrt(std::max(
                                        0.0, 2.0 * kinetic(sys.forms.mass, r.v_hist[i]))));
        }
        double kd = traj_distance(lift, metric, r.u_hist, plate_run.u_hist);
        kl_dists.push_back(kd);
        diags.push_back({d33, shear, vnorm});
        rows.push_back({eps, d33, shear, vnorm, kd, r.max_residual,
                        double(r.admissible && r.balance_ok && r.semistab_ok)});
    }

    bool bounded = true;
    for (const auto& d : diags)
        for (int c = 0; c < 3; ++c)
            if (d[c] > 2.0 * diags.front()[c] + 1e-12) bounded = false;

    json report;
    report["study"] = "dimred_undamped";
    report["delta"] = cfg.delta;
    report["tables"]["family"] = make_table(
        {"eps", "rescaled_e33_norm", "rescaled_shear_norm", "weighted_velocity_norm",
         "kl_distance", "max_balance_residual", "certified"},
        rows);
    report["diagnostics_bounded"] = bounded;
    report["kl_distance_monotone"] = nonincreasing(kl_dists, 0.0);
    report["limit_certified"] =
        plate_run.admissible && plate_run.balance_ok && plate_run.semistab_ok;
    report["passed"] = bounded && report["kl_distance_monotone"].get<bool>() &&
                       report["limit_certified"].get<bool>();
    return report;
}

json study_dimred_damped(const RunConfig& cfg, unsigned seed)
{
    check_eps_list(cfg.eps_list, "thin-plate study (damped limit)");
    const SymTensor4& dstar = cfg.has_dstar ? cfg.Dstar : cfg.D;
    if (!check_planar_condition(cfg.C))
        throw std::invalid_argument(
            "thin-plate study (damped limit): the elasticity tensor must map planar "
            "strains to planar stresses (C_i3kl = 0 for in-plane kl)");
    if (!check_planar_condition(dstar))
        throw std::invalid_argument(
            "thin-plate study (damped limit): the viscosity tensor must map planar "
            "strains to planar stresses (D_i3kl = 0 for in-plane kl)");
    for (int i = 0; i < 3; ++i)
        if (cfg.w_spat.A(i, 2) != 0.0 || cfg.w_spat.A(2, i) != 0.0)
            throw std::invalid_argument(
                "thin-plate study (damped limit): the Dirichlet datum must be an "
                "x3-independent in-plane (Kirchhoff-Love) field");

    RunConfig pc = cfg;
    pc.variant = ModelVariant::limit_damped;
    pc.nz_interface = cfg.nz;
    pc.D = dstar;
    pc.output_every = 1;
    RunResult plate_run = run_simulation(pc, seed);

    SlabMesh slab = build_slab_mesh(cfg.nx, cfg.ny, cfg.nz);
    PlateMesh plate = build_plate_mesh(cfg.nx, cfg.ny);
    SparseMat lift = kl_lift_matrix(plate, slab);
    SparseMat metric = slab_l2_metric(slab);

    std::vector<std::vector<double>> rows;
    std::vector<double> kl_dists;
    RunConfig rc = cfg;
    rc.variant = ModelVariant::rescaled3d;
    rc.output_every = 1;
    for (double eps : cfg.eps_list) {
        rc.eps = eps;
        rc.D = dstar.scaled(1.0 / eps);  // the rescaled viscous form then carries dstar
        RunResult r = run_simulation(rc, seed);
        double kd = traj_distance(lift, metric, r.u_hist, plate_run.u_hist);
        kl_dists.push_back(kd);
        rows.push_back({eps, kd, r.final_state.V_cum, r.max_residual,
                        double(r.admissible && r.balance_ok && r.semistab_ok)});
    }

    double plate_scale = std::max(1.0, plate_run.peak_energy);
    json report;
    report["study"] = "dimred_damped";
    report["tables"]["family"] = make_table(
        {"eps", "kl_distance", "viscous_dissipation", "max_balance_residual", "certified"},
        rows);
    report["kl_distance_monotone"] = nonincreasing(kl_dists, 0.0);
    report["limit_two_sided_balance"] = plate_run.max_residual <= 1e-3 * plate_scale;
    report["limit_certified"] =
        plate_run.admissible && plate_run.balance_ok && plate_run.semistab_ok;
    report["passed"] = report["kl_distance_monotone"].get<bool>() &&
                       report["limit_two_sided_balance"].get<bool>() &&
                       report["limit_certified"].get<bool>();
    return report;
}

double plate_cross_coupling_norm(const RunConfig& cfg, const std::string& z_profile)
{
    RunConfig pc = cfg;
    if (pc.variant != ModelVariant::limit_undamped && pc.variant != ModelVariant::limit_damped)
        pc.variant = ModelVariant::limit_undamped;
    BuiltSystem sys = build_system(pc);
    AdhesionField z = sys.forms.make_adhesion(1.0);
    if (z_profile == "uniform") {
        // keep
    } else if (z_profile == "zero") {
        std::fill(z.values.begin(), z.values.end(), 0.0);
    } else if (z_profile == "top_half") {
        for (int ia = 0; ia < z.n_along; ++ia)
            for (int it = 0; it < z.n_thick; ++it)
                z.values[z.idx(ia, it)] = it >= z.n_thick / 2 ? 1.0 : 0.0;
    } else {
        throw std::invalid_argument("unknown z profile \"" + z_profile + "\"");
    }

    Eigen::VectorXd w(sys.forms.jump.rows());
    for (int c = 0; c < z.size(); ++c) {
        double base = cfg.params.kappa * z.cell_areas[c] * z.values[c];
        w(3 * c + 0) = base;
        w(3 * c + 1) = base;
        w(3 * c + 2) = base * cfg.scheme.q3;
    }
    SparseMat adh =
        SparseMat(sys.forms.jump.transpose()) * w.asDiagonal() * sys.forms.jump;

    int n_membrane = sys.forms.n_dofs / 3;  // 2N of the 6N stacked plate dofs
    double acc = 0.0;
    for (int k = 0; k < adh.outerSize(); ++k)
        for (SparseMat::InnerIterator it(adh, k); it; ++it)
            if (it.row() < n_membrane && it.col() >= n_membrane)
                acc += it.value() * it.value();
    return std::sqrt(acc);
}

void emit_report_csv(const json& report, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    char buf[64];
    for (auto it = report.begin(); it != report.end(); ++it) {
        if (it.key() == "tables") continue;
        out << "# " << it.key() << " = " << it.value().dump() << "\n";
    }
    if (report.contains("tables")) {
        for (auto it = report["tables"].begin(); it != report["tables"].end(); ++it) {
            out << "# table " << it.key() << "\n";
            const json& t = it.value();
            const auto& cols = t.at("columns");
            for (std::size_t c = 0; c < cols.size(); ++c)
                out << (c ? "," : "") << cols[c].get<std::string>();
            out << "\n";
            for (const auto& row : t.at("rows")) {
                for (std::size_t c = 0; c < row.size(); ++c) {
                    std::snprintf(buf, sizeof buf, "%.17g", row[c].get<double>());
                    out << (c ? "," : "") << buf;
                }
                out << "\n";
            }
        }
    }
}

int certify_trajectory(const std::vector<StepRecord>& records, bool undamped,
                       std::string* message)
{
    auto fail = [&](const std::string& m) {
        if (message) *message = m;
        return 1;
    };
    if (records.empty()) return fail("empty trajectory");

    double peak = 0.0;
    for (const auto& r : records) peak = std::max(peak, std::abs(r.E_total));
    double scale = std::max(1.0, peak);

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (std::abs(r.K + r.E_bulk + r.E_surf - r.E_total) > 1e-9 * scale)
            return fail("row " + std::to_string(i) + ": E_total does not sum its parts");
        if (i > 0) {
            const auto& p = records[i - 1];
            if (r.t <= p.t)
                return fail("row " + std::to_string(i) + ": time is not increasing");
            if (r.V_cum < p.V_cum - 1e-12 * scale)
                return fail("row " + std::to_string(i) + ": viscous tally decreased");
            if (r.R_cum < p.R_cum - 1e-12 * scale)
                return fail("row " + std::to_string(i) + ": dissipation tally decreased");
        }
        bool ok = undamped ? r.balance_residual <= 1e-3 * scale
                           : std::abs(r.balance_residual) <= 1e-3 * scale;
        if (!ok)
            return fail("row " + std::to_string(i) + ": balance residual " +
                        std::to_string(r.balance_residual) + " out of tolerance");
    }
    if (message) *message = "ok";
    return 0;
}

}  // namespace plates
