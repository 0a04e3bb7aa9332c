// zitterkit: momentum-space studies of free-particle trembling motion
// across the Dirac, Feshbach-Villars, generalized FV, Dirac-like photon
// and Foldy-Wouthuysen representations.
//
// Exit codes: 0 success, 1 check failure, 2 config error, 3 numerical failure.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <zitterkit/zitterkit.hpp>

using json = nlohmann::ordered_json;
using namespace zitterkit;

namespace {

// ---------------------------------------------------------------------------
// configuration

struct RunConfig {
    std::string rep_kind = "dirac";
    double mass = 1.0;
    double spin = 0.5;
    double gfv_n = 1.0;

    std::array<double, 3> center{0.0, 0.0, 1.0};
    double sigma = 0.1;
    int n_samples = 33;
    int grid_axis = 3;
    bool full_grid = false;

    std::array<double, 2> mix_plus{1.0, 0.0};
    std::array<double, 2> mix_minus{0.0, 0.0};
    std::vector<double> mix_flag; // --mix lp,lm shorthand (real coefficients)

    double t_max = 0.0; // 0 = four trembling periods
    int n_steps = 512;

    int obs_axis = 1;
    std::vector<std::array<int, 2>> entries; // 1-based matrix entries to emit

    double sweep_p_min = 0.0;
    double sweep_p_max = 2.0;
    int sweep_points = 64;

    std::string format = "csv";
    std::string out_path;

    double check_tol = 1e-12;
    int n_momenta = 100;

    unsigned long long seed = 20240901ull;
    bool corrupt_spin = false; // test hook
};

RepSpec rep_from_config(const RunConfig& c) {
    if (c.rep_kind == "dirac")
        return RepSpec::dirac(c.mass);
    if (c.rep_kind == "fv" || c.rep_kind == "feshbach-villars")
        return RepSpec::feshbach_villars(c.mass);
    if (c.rep_kind == "gfv")
        return RepSpec::generalized_fv(c.mass, c.spin, c.gfv_n);
    if (c.rep_kind == "photon")
        return RepSpec::photon();
    if (c.rep_kind == "fw" || c.rep_kind == "foldy-wouthuysen")
        return RepSpec::foldy_wouthuysen(c.mass, c.spin);
    throw std::invalid_argument("unknown representation '" + c.rep_kind +
                                "' (expected dirac|fv|gfv|photon|fw)");
}

Momentum center_of(const RunConfig& c) { return {c.center[0], c.center[1], c.center[2]}; }

/// Canonicalize the rep block so the emitted header reflects the effective
/// values (the photon forces mass 0 and spin 1, Dirac forces spin 1/2, ...).
RunConfig resolve(RunConfig c) {
    if (!c.mix_flag.empty()) {
        if (c.mix_flag.size() != 2)
            throw std::invalid_argument("--mix expects lambda_plus,lambda_minus");
        c.mix_plus = {c.mix_flag[0], 0.0};
        c.mix_minus = {c.mix_flag[1], 0.0};
        c.mix_flag.clear();
    }
    const RepSpec rep = rep_from_config(c);
    c.rep_kind = to_string(rep.kind);
    c.mass = rep.mass;
    c.spin = rep.spin;
    return c;
}

void load_config_file(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }

    const auto get = [](const json& obj, const char* key) -> std::optional<json> {
        if (obj.contains(key))
            return obj.at(key);
        return std::nullopt;
    };

    try {
        if (auto rep = get(j, "rep")) {
            if (auto v = get(*rep, "kind")) c.rep_kind = v->get<std::string>();
            if (auto v = get(*rep, "mass")) c.mass = v->get<double>();
            if (auto v = get(*rep, "spin")) c.spin = v->get<double>();
            if (auto v = get(*rep, "n")) c.gfv_n = v->get<double>();
        }
        if (auto mom = get(j, "momentum")) {
            if (auto v = get(*mom, "center")) c.center = v->get<std::array<double, 3>>();
            if (auto v = get(*mom, "sigma")) c.sigma = v->get<double>();
            if (auto v = get(*mom, "n_samples")) c.n_samples = v->get<int>();
            if (auto v = get(*mom, "axis")) c.grid_axis = v->get<int>();
            if (auto v = get(*mom, "full_grid")) c.full_grid = v->get<bool>();
        }
        if (auto mix = get(j, "mix")) {
            if (auto v = get(*mix, "plus")) c.mix_plus = v->get<std::array<double, 2>>();
            if (auto v = get(*mix, "minus")) c.mix_minus = v->get<std::array<double, 2>>();
        }
        if (auto tm = get(j, "time")) {
            if (auto v = get(*tm, "t_max")) c.t_max = v->get<double>();
            if (auto v = get(*tm, "n_steps")) c.n_steps = v->get<int>();
        }
        if (auto ob = get(j, "observable")) {
            if (auto v = get(*ob, "axis")) c.obs_axis = v->get<int>();
            if (auto v = get(*ob, "entries"))
                c.entries = v->get<std::vector<std::array<int, 2>>>();
        }
        if (auto sw = get(j, "sweep")) {
            if (auto v = get(*sw, "p_min")) c.sweep_p_min = v->get<double>();
            if (auto v = get(*sw, "p_max")) c.sweep_p_max = v->get<double>();
            if (auto v = get(*sw, "n_points")) c.sweep_points = v->get<int>();
        }
        if (auto out = get(j, "output")) {
            if (auto v = get(*out, "format")) c.format = v->get<std::string>();
            if (auto v = get(*out, "path")) c.out_path = v->get<std::string>();
        }
        if (auto tol = get(j, "tolerances")) {
            if (auto v = get(*tol, "check")) c.check_tol = v->get<double>();
            if (auto v = get(*tol, "n_momenta")) c.n_momenta = v->get<int>();
        }
        if (auto v = get(j, "seed"))
            c.seed = v->get<unsigned long long>();
    } catch (const json::exception& e) {
        throw std::invalid_argument("config field error in " + path + ": " + e.what());
    }
}

json resolved_config(const RunConfig& c) {
    json j;
    j["rep"] = {{"kind", c.rep_kind}, {"mass", c.mass}, {"spin", c.spin}, {"n", c.gfv_n}};
    j["momentum"] = {{"center", c.center},
                     {"sigma", c.sigma},
                     {"n_samples", c.n_samples},
                     {"axis", c.grid_axis},
                     {"full_grid", c.full_grid}};
    j["mix"] = {{"plus", c.mix_plus}, {"minus", c.mix_minus}};
    j["time"] = {{"t_max", c.t_max}, {"n_steps", c.n_steps}};
    j["observable"] = {{"axis", c.obs_axis}, {"entries", c.entries}};
    j["sweep"] = {{"p_min", c.sweep_p_min}, {"p_max", c.sweep_p_max},
                  {"n_points", c.sweep_points}};
    // the output path is invocation plumbing, not part of the computation;
    // echoing it would break byte-identity of runs targeting different files
    j["output"] = {{"format", c.format}};
    j["tolerances"] = {{"check", c.check_tol}, {"n_momenta", c.n_momenta}};
    j["seed"] = c.seed;
    return j;
}

// ---------------------------------------------------------------------------
// deterministic emission: 17 significant digits, scientific, fixed row order

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

using Summary = std::vector<std::pair<std::string, double>>;

void write_csv(std::ostream& os, const RunConfig& c, const std::string& command, const Table& t,
               const Summary& summary) {
    os << "# zitterkit " << version_string << "\n";
    os << "# command: " << command << "\n";
    os << "# config: " << resolved_config(c).dump() << "\n";
    os << "# columns: ";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << fmt17(row[i]);
        os << "\n";
    }
    for (const auto& [key, value] : summary)
        os << "# " << key << ": " << fmt17(value) << "\n";
}

void write_json(std::ostream& os, const RunConfig& c, const std::string& command, const Table& t,
                const Summary& summary) {
    os << "{\n  \"meta\": {\"tool\": \"zitterkit\", \"version\": \"" << version_string
       << "\", \"command\": \"" << command << "\", \"config\": " << resolved_config(c).dump()
       << "},\n";
    os << "  \"columns\": [";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? ", " : "") << "\"" << t.columns[i] << "\"";
    os << "],\n  \"rows\": [\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        os << "    [";
        for (std::size_t i = 0; i < t.rows[r].size(); ++i)
            os << (i ? ", " : "") << fmt17(t.rows[r][i]);
        os << "]" << (r + 1 < t.rows.size() ? "," : "") << "\n";
    }
    os << "  ]";
    if (!summary.empty()) {
        os << ",\n  \"summary\": {";
        for (std::size_t i = 0; i < summary.size(); ++i)
            os << (i ? ", " : "") << "\"" << summary[i].first << "\": " << fmt17(summary[i].second);
        os << "}";
    }
    os << "\n}\n";
}

void emit(const RunConfig& c, const std::string& command, const Table& t,
          const Summary& summary = {}) {
    if (c.format != "csv" && c.format != "json")
        throw std::invalid_argument("output format must be csv or json");
    const auto write = (c.format == "csv") ? write_csv : write_json;
    if (c.out_path.empty()) {
        write(std::cout, c, command, t, summary);
        return;
    }
    std::ofstream os(c.out_path, std::ios::binary);
    if (!os)
        throw std::invalid_argument("cannot open output path: " + c.out_path);
    write(os, c, command, t, summary);
}

std::vector<double> time_grid(const RunConfig& c, const RepSpec& rep, const Momentum& p) {
    const std::size_t steps = c.n_steps > 0 ? static_cast<std::size_t>(c.n_steps) : 512;
    if (c.t_max > 0.0) {
        std::vector<double> t(steps);
        for (std::size_t j = 0; j < steps; ++j)
            t[j] = c.t_max * static_cast<double>(j) / static_cast<double>(steps);
        return t;
    }
    return default_time_grid(rep, p, 4.0, steps);
}

// ---------------------------------------------------------------------------
// check-algebra

struct CheckResult {
    std::string name;
    double residual = 0.0;
};

double dispersion_residual(const RepSpec& rep, const Momentum& p) {
    const double eps = energy(rep, p);
    const auto eig = eig_decompose(hamiltonian(rep, p));
    const double cut = 1e-9 * std::max(1.0, eps);
    double res = 0.0;
    for (const cplx& lam : eig.values) {
        res = std::max(res, std::abs(lam.imag()));
        if (std::abs(lam) <= cut)
            continue; // photon longitudinal null modes
        res = std::max(res, std::abs(std::abs(lam.real()) - eps));
    }
    return res;
}

int cmd_check_algebra(const RunConfig& c) {
    std::mt19937_64 rng(c.seed);
    auto uni = [&rng](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    auto rand_p = [&]() -> Momentum {
        for (;;) {
            Momentum p{uni(-2.0, 2.0), uni(-2.0, 2.0), uni(-2.0, 2.0)};
            if (p.norm() >= 0.2)
                return p;
        }
    };

    std::vector<CheckResult> checks;

    { // pauli products: rho_i rho_j = d_ij + i e_ijk rho_k
        double res = 0.0;
        const auto eps3 = [](int i, int j, int k) {
            if (i == j || j == k || i == k)
                return 0.0;
            return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
        };
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                ComplexMatrix want = ComplexMatrix::identity(2) * (i == j ? 1.0 : 0.0);
                for (int k = 0; k < 3; ++k)
                    want += pauli(k + 1) * cplx{0.0, eps3(i, j, k)};
                res = std::max(res, max_abs_diff(pauli(i + 1) * pauli(j + 1), want));
            }
        checks.push_back({"pauli-products", res});
    }

    { // the three-part spin-1 property equation
        std::array<ComplexMatrix, 3> s = {spin1(1), spin1(2), spin1(3)};
        if (c.corrupt_spin)
            s[0](0, 0) += 0.01; // test hook
        const auto rep = check_spin_properties(s, c.check_tol);
        checks.push_back({"spin1-properties", rep.max_residual()});
    }

    { // dirac Clifford algebra
        double res = 0.0;
        const auto d = dirac_matrices();
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j)
                res = std::max(res,
                               max_abs_diff(anticommutator(d.alpha[i], d.alpha[j]),
                                            ComplexMatrix::identity(4) * (i == j ? 2.0 : 0.0)));
            res = std::max(res, anticommutator(d.alpha[i], d.beta).max_abs());
            res = std::max(res, max_abs_diff(d.gamma[i], d.beta * d.alpha[i]));
        }
        res = std::max(res, max_abs_diff(d.beta * d.beta, ComplexMatrix::identity(4)));
        checks.push_back({"dirac-clifford", res});
    }

    { // photon block matrices and Sigma^2 = 2 I
        double res = 0.0;
        res = std::max(res, max_abs_diff(photon_beta() * photon_beta(),
                                         ComplexMatrix::identity(6)));
        for (int i = 1; i <= 3; ++i) {
            res = std::max(res, max_abs_diff(photon_alpha(i), kron(pauli(1), spin1(i))));
            res = std::max(res, anticommutator(photon_alpha(i), photon_beta()).max_abs());
        }
        ComplexMatrix s2(6);
        for (int i = 1; i <= 3; ++i)
            s2 += photon_sigma(i) * photon_sigma(i);
        res = std::max(res, max_abs_diff(s2, ComplexMatrix::identity(6) * 2.0));
        checks.push_back({"photon-blocks", res});
    }

    { // (s.p)^2 = p^2/4 for spin 1/2
        double res = 0.0;
        for (int k = 0; k < c.n_momenta; ++k) {
            const Momentum p = rand_p();
            const ComplexMatrix sp =
                (pauli(1) * p.px + pauli(2) * p.py + pauli(3) * p.pz) * 0.5;
            res = std::max(res, max_abs_diff(sp * sp, ComplexMatrix::identity(2) *
                                                          (p.norm_sq() / 4.0)));
        }
        checks.push_back({"spin-half-helicity-square", res});
    }

    { // [p^2 - (alpha.p)^2] T = [p^2 - (Sigma.p)^2] T = 0
        double res = 0.0;
        for (int k = 0; k < c.n_momenta; ++k) {
            const Momentum p = rand_p();
            const ComplexMatrix ap =
                photon_alpha(1) * p.px + photon_alpha(2) * p.py + photon_alpha(3) * p.pz;
            const ComplexMatrix sp =
                photon_sigma(1) * p.px + photon_sigma(2) * p.py + photon_sigma(3) * p.pz;
            const ComplexMatrix p2 = ComplexMatrix::identity(6) * p.norm_sq();
            const ComplexMatrix proj = photon_transversality_projector(p);
            res = std::max(res, ((p2 - ap * ap) * proj).max_abs());
            res = std::max(res, ((p2 - sp * sp) * proj).max_abs());
        }
        checks.push_back({"photon-transversal-constraint", res});
    }

    { // GFV pseudo-Hermiticity
        double res = 0.0;
        for (int k = 0; k < c.n_momenta; ++k) {
            const double m = uni(0.0, 2.0);
            const double n = uni(0.2, 6.0) * (k % 2 == 0 ? 1.0 : -1.0);
            const double s = 0.5 * static_cast<double>(k % 3);
            const auto rep = RepSpec::generalized_fv(m, s, n);
            const ComplexMatrix h = hamiltonian(rep, rand_p());
            res = std::max(res, max_abs_diff(pseudo_adjoint(h, rep_metric(rep)), h));
        }
        checks.push_back({"gfv-pseudo-hermiticity", res});
    }

    { // pseudounitarity of the catalogued transforms
        double res = 0.0;
        for (int k = 0; k < c.n_momenta; ++k) {
            const Momentum p = rand_p();
            res = std::max(res, fw_massless_dirac(p).pseudounitarity_residual());
            res = std::max(res, fw_photon(p).pseudounitarity_residual());
            res = std::max(res, gfv_to_fw(uni(0.0, 2.0), uni(0.2, 8.0), p,
                                          0.5 * static_cast<double>(k % 3))
                                    .pseudounitarity_residual());
        }
        checks.push_back({"transform-pseudounitarity", res});
    }

    { // dispersion across the catalogue
        double res = 0.0;
        for (int k = 0; k < c.n_momenta; ++k) {
            const Momentum p = rand_p();
            for (double m : {0.0, 0.5, 1.0, 2.0}) {
                res = std::max(res, dispersion_residual(RepSpec::dirac(m), p));
                if (m > 0.0)
                    res = std::max(res, dispersion_residual(RepSpec::feshbach_villars(m), p));
                res = std::max(res,
                               dispersion_residual(RepSpec::generalized_fv(m, 0.5, 1.3), p));
                res = std::max(res, dispersion_residual(RepSpec::foldy_wouthuysen(m, 0.5), p));
            }
            res = std::max(res, dispersion_residual(RepSpec::photon(), p));
        }
        checks.push_back({"dispersion", res});
    }

    { // helicity spectrum: +-s (photon: +-1 and longitudinal 0)
        double res = 0.0;
        for (int k = 0; k < std::max(1, c.n_momenta / 10); ++k) {
            const Momentum p = rand_p();
            const auto hel =
                eig_decompose(helicity_matrix({photon_sigma(1), photon_sigma(2), photon_sigma(3)}, p));
            for (const cplx& lam : hel.values)
                res = std::max(res, std::min({std::abs(lam - cplx{1.0, 0.0}),
                                              std::abs(lam), std::abs(lam + cplx{1.0, 0.0})}));
            const std::array<ComplexMatrix, 3> sh = {dirac_sigma(1) * 0.5, dirac_sigma(2) * 0.5,
                                                     dirac_sigma(3) * 0.5};
            const auto hd = eig_decompose(helicity_matrix(sh, p));
            for (const cplx& lam : hd.values)
                res = std::max(res, std::abs(std::abs(lam.real()) - 0.5));
        }
        checks.push_back({"helicity-spectrum", res});
    }

    bool all_pass = true;
    std::printf("%-32s %-14s %-10s %s\n", "check", "residual", "tol", "status");
    for (const auto& chk : checks) {
        const bool ok = chk.residual <= c.check_tol;
        all_pass = all_pass && ok;
        std::printf("%-32s %-14.3e %-10.1e %s\n", chk.name.c_str(), chk.residual, c.check_tol,
                    ok ? "ok" : "FAIL");
    }
    if (!all_pass) {
        for (const auto& chk : checks)
            if (chk.residual > c.check_tol)
                std::printf("FAILED: %s (residual %.3e > %.1e)\n", chk.name.c_str(), chk.residual,
                            c.check_tol);
        return 1;
    }
    std::printf("all %zu checks passed\n", checks.size());
    return 0;
}

// ---------------------------------------------------------------------------
// spectrum

int cmd_spectrum(const RunConfig& raw) {
    const RunConfig c = resolve(raw);
    const RepSpec rep = rep_from_config(c);
    const int n = std::max(2, c.sweep_points);
    double lo = c.sweep_p_min, hi = c.sweep_p_max;
    if (!(hi > lo))
        throw std::invalid_argument("sweep range must satisfy p_max > p_min");
    if (rep.mass == 0.0 && lo <= 0.0)
        lo = hi / static_cast<double>(n); // massless states need |p| > 0

    Table t;
    t.columns.push_back("p_abs");
    for (std::size_t i = 1; i <= rep.dim(); ++i)
        t.columns.push_back("lam_" + std::to_string(i));

    for (int k = 0; k < n; ++k) {
        const double pa = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
        Momentum p{0.0, 0.0, 0.0};
        p = p.shifted(c.grid_axis, pa);
        std::vector<double> row{pa};
        if (pa == 0.0 && rep.mass == 0.0)
            continue;
        const auto eig = eig_decompose(hamiltonian(rep, p));
        for (const cplx& lam : eig.values)
            row.push_back(lam.real());
        t.rows.push_back(std::move(row));
    }
    emit(c, "spectrum", t);
    return 0;
}

// ---------------------------------------------------------------------------
// evolve-operator

int cmd_evolve_operator(const RunConfig& raw) {
    const RunConfig c = resolve(raw);
    const RepSpec rep = rep_from_config(c);
    const Momentum p = center_of(c);
    const HeisenbergEvolution evo(rep, p, c.obs_axis);

    std::vector<std::array<int, 2>> entries = c.entries;
    if (entries.empty()) {
        // one drift-carrying diagonal entry plus the strongest entry of the
        // oscillation coefficient, so the emitted columns actually move
        const ComplexMatrix amp = evo.amplitude();
        int br = 1, bc = 1 + static_cast<int>(rep.dim()) / 2;
        double best = -1.0;
        for (std::size_t i = 0; i < rep.dim(); ++i)
            for (std::size_t j = 0; j < rep.dim(); ++j)
                if (std::abs(amp(i, j)) > best + 1e-15) {
                    best = std::abs(amp(i, j));
                    br = static_cast<int>(i) + 1;
                    bc = static_cast<int>(j) + 1;
                }
        entries = {{1, 1}, {br, bc}};
    }
    for (const auto& e : entries)
        if (e[0] < 1 || e[1] < 1 || e[0] > static_cast<int>(rep.dim()) ||
            e[1] > static_cast<int>(rep.dim()))
            throw std::invalid_argument("entry index out of range for dim " +
                                        std::to_string(rep.dim()));

    const ComplexMatrix proj = rep.kind == RepKind::DiracLikePhoton
                                   ? photon_transversality_projector(p)
                                   : ComplexMatrix::identity(rep.dim());

    Table t;
    t.columns.push_back("t");
    for (const auto& e : entries) {
        const std::string tag = std::to_string(e[0]) + "_" + std::to_string(e[1]);
        for (const char* base : {"v_re_", "v_im_", "vnum_re_", "vnum_im_", "dr_re_", "dr_im_"})
            t.columns.push_back(base + tag);
    }
    t.columns.push_back("residual");

    for (double time : time_grid(c, rep, p)) {
        const ComplexMatrix v = evo.velocity_closed(time);
        const ComplexMatrix vn = evo.velocity_numeric(time);
        const ComplexMatrix dr = evo.displacement_closed(time);
        std::vector<double> row{time};
        for (const auto& e : entries) {
            const auto r = static_cast<std::size_t>(e[0] - 1);
            const auto col = static_cast<std::size_t>(e[1] - 1);
            row.push_back(v(r, col).real());
            row.push_back(v(r, col).imag());
            row.push_back(vn(r, col).real());
            row.push_back(vn(r, col).imag());
            row.push_back(dr(r, col).real());
            row.push_back(dr(r, col).imag());
        }
        row.push_back((proj * (v - vn) * proj).max_abs());
        t.rows.push_back(std::move(row));
    }
    emit(c, "evolve-operator", t);
    return 0;
}

// ---------------------------------------------------------------------------
// evolve-packet

int cmd_evolve_packet(const RunConfig& raw) {
    const RunConfig c = resolve(raw);
    const RepSpec rep = rep_from_config(c);
    const Momentum center = center_of(c);
    if (c.n_samples < 1)
        throw std::invalid_argument("n_samples must be >= 1");

    PacketOptions opts;
    opts.grid_axis = c.grid_axis;
    opts.full_grid = c.full_grid;
    opts.couple_axis = c.obs_axis;
    const BranchMix mix{cplx{c.mix_plus[0], c.mix_plus[1]},
                        cplx{c.mix_minus[0], c.mix_minus[1]}};
    const PacketState packet = make_gaussian_packet(rep, center, c.sigma, mix,
                                                    static_cast<std::size_t>(c.n_samples), opts);

    const auto times = time_grid(c, rep, center);
    std::array<PacketTrajectory, 3> traj;
    for (int axis = 1; axis <= 3; ++axis)
        traj[static_cast<std::size_t>(axis - 1)] = packet_trajectory(packet, axis, times);

    Table t;
    t.columns = {"t", "re_v1", "re_v2", "re_v3", "re_dr1", "re_dr2", "re_dr3", "signed_norm"};
    for (std::size_t j = 0; j < times.size(); ++j) {
        std::vector<double> row{times[j]};
        for (int axis = 0; axis < 3; ++axis)
            row.push_back(traj[static_cast<std::size_t>(axis)].velocity[j].real());
        for (int axis = 0; axis < 3; ++axis)
            row.push_back(traj[static_cast<std::size_t>(axis)].displacement[j].real());
        row.push_back(packet.signed_norm);
        t.rows.push_back(std::move(row));
    }

    // summary: dominant oscillation of the observed component plus drift fits
    const auto& obs = traj[static_cast<std::size_t>(c.obs_axis - 1)];
    std::vector<double> vre;
    vre.reserve(times.size());
    for (const cplx& v : obs.velocity)
        vre.push_back(v.real());
    const SpectralPeak peak = dominant_frequency(vre, times[1] - times[0]);

    Summary summary;
    summary.emplace_back("frequency", peak.omega);
    summary.emplace_back("frequency_bin_width", peak.bin_width);
    summary.emplace_back("amplitude", peak.amplitude);
    for (int axis = 1; axis <= 3; ++axis) {
        std::vector<double> dre;
        dre.reserve(times.size());
        for (const cplx& d : traj[static_cast<std::size_t>(axis - 1)].displacement)
            dre.push_back(d.real());
        summary.emplace_back("drift_" + std::to_string(axis),
                             linear_fit(times, dre).slope);
    }
    summary.emplace_back("signed_norm", packet.signed_norm);

    emit(c, "evolve-packet", t, summary);
    return 0;
}

// ---------------------------------------------------------------------------
// transform

void print_matrix(const std::string& name, const ComplexMatrix& m) {
    std::printf("%s =\n", name.c_str());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        std::printf("  [");
        for (std::size_t j = 0; j < m.dim(); ++j)
            std::printf(" %+.6e%+.6ei", m(i, j).real(), m(i, j).imag());
        std::printf(" ]\n");
    }
}

double off_block_residual(const ComplexMatrix& m) {
    const std::size_t half = m.dim() / 2;
    double res = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            if ((i < half) != (j < half))
                res = std::max(res, std::abs(m(i, j)));
    return res;
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

int cmd_transform(const RunConfig& raw) {
    const RunConfig c = resolve(raw);
    const RepSpec rep = rep_from_config(c);
    const Momentum p = center_of(c);

    TransformOp t = [&] {
        switch (rep.kind) {
        case RepKind::GeneralizedFV:
            return gfv_to_fw(rep.mass, rep.gfv_n, p, rep.spin);
        case RepKind::DiracLikePhoton:
            return fw_photon(p);
        case RepKind::Dirac:
            if (rep.mass == 0.0)
                return fw_massless_dirac(p);
            throw std::invalid_argument(
                "no exact transform catalogued for the massive Dirac representation");
        default:
            throw std::invalid_argument(std::string("no exact transform catalogued for ") +
                                        to_string(rep.kind));
        }
    }();

    const ComplexMatrix h = hamiltonian(rep, p);
    const ComplexMatrix h_fw = apply_similarity(t, h);
    const auto v = velocity_operator(rep, p);
    std::array<ComplexMatrix, 3> v_fw = {apply_similarity(t, v[0]), apply_similarity(t, v[1]),
                                         apply_similarity(t, v[2])};

    ComplexMatrix h_fw_domain = t.domain * h_fw * t.domain;
    const ComplexMatrix target =
        t.domain * (kron(pauli(3), ComplexMatrix::identity(t.target.spin_block())) *
                    energy(rep, p)) *
        t.domain;
    const double offblock = off_block_residual(h_fw_domain);
    const double h_residual = max_abs_diff(h_fw_domain, target);
    const double pseudo = t.pseudounitarity_residual();

    std::printf("transform: %s -> foldy-wouthuysen at p = (%g, %g, %g), eps = %.12g\n",
                to_string(rep.kind), p.px, p.py, p.pz, energy(rep, p));
    print_matrix("U", t.u);
    print_matrix("U_inverse", t.u_inverse);
    print_matrix("H_source", h);
    print_matrix("H_transformed", h_fw);
    for (int axis = 1; axis <= 3; ++axis)
        print_matrix("v_transformed_" + std::to_string(axis),
                     v_fw[static_cast<std::size_t>(axis - 1)]);
    std::printf("pseudounitarity_residual = %.3e\n", pseudo);
    std::printf("off_block_residual = %.3e\n", offblock);
    std::printf("h_block_residual = %.3e\n", h_residual);

    json out;
    out["meta"] = {{"tool", "zitterkit"},
                   {"version", version_string},
                   {"command", "transform"},
                   {"config", resolved_config(c)}};
    out["u"] = matrix_to_json(t.u);
    out["u_inverse"] = matrix_to_json(t.u_inverse);
    out["h_source"] = matrix_to_json(h);
    out["h_transformed"] = matrix_to_json(h_fw);
    out["pseudounitarity_residual"] = pseudo;
    out["off_block_residual"] = offblock;
    out["h_block_residual"] = h_residual;

    if (rep.kind == RepKind::DiracLikePhoton) {
        // pull the FW states (E,0) and (0,iB) back through the GFV transform
        // and compare with the printed coupling factors (N +- p)/(2 sqrt(pN))
        const double n = c.gfv_n;
        const TransformOp tg = gfv_to_fw(0.0, n, p, 1.0);
        const double pn = p.norm();
        const double fplus = (n + pn) / (2.0 * std::sqrt(pn * n));
        const double fminus = (n - pn) / (2.0 * std::sqrt(pn * n));

        const ComplexMatrix tproj = transversality_projector(p);
        ComplexVector e3 = {cplx{1.0, 0.0}, cplx{0.5, 0.0}, cplx{-0.25, 0.0}};
        e3 = tproj * e3;

        ComplexVector fw_plus(6, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < 3; ++i)
            fw_plus[i] = e3[i];
        const ComplexVector gfv_plus = tg.u_inverse * fw_plus;
        double dev = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            dev = std::max(dev, std::abs(gfv_plus[i] - fplus * e3[i]));
            dev = std::max(dev, std::abs(gfv_plus[i + 3] - fminus * e3[i]));
        }
        std::printf("gfv_wavefunction_factor_plus = %s\n", fmt17(fplus).c_str());
        std::printf("gfv_wavefunction_factor_minus = %s\n", fmt17(fminus).c_str());
        std::printf("gfv_wavefunction_residual = %.3e\n", dev);
        out["gfv_wavefunction_factor_plus"] = fplus;
        out["gfv_wavefunction_factor_minus"] = fminus;
        out["gfv_wavefunction_residual"] = dev;
    }

    if (!c.out_path.empty()) {
        std::ofstream os(c.out_path, std::ios::binary);
        if (!os)
            throw std::invalid_argument("cannot open output path: " + c.out_path);
        os << out.dump(2) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------

void add_common_flags(CLI::App* sub, RunConfig& c, std::string& config_path) {
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
    sub->add_option("--rep", c.rep_kind, "representation: dirac|fv|gfv|photon|fw");
    sub->add_option("--mass", c.mass, "particle mass (natural units)");
    sub->add_option("--spin", c.spin, "spin (half-integer)");
    sub->add_option("--gfv-n", c.gfv_n, "GFV parameter N (nonzero)");
    sub->add_option("--p", c.center, "momentum center px,py,pz")->delimiter(',');
    sub->add_option("--sigma", c.sigma, "momentum-space packet width");
    sub->add_option("--samples", c.n_samples, "momentum grid samples");
    sub->add_option("--axis", c.grid_axis, "grid-spread axis (1..3)");
    sub->add_option("--mix", c.mix_flag,
                    "branch mix lambda_plus,lambda_minus (real; complex via config file)")
        ->delimiter(',')
        ->expected(2);
    sub->add_option("--obs-axis", c.obs_axis, "observed component (1..3)");
    sub->add_option("--tmax", c.t_max, "time horizon (0 = four trembling periods)");
    sub->add_option("--steps", c.n_steps, "time steps");
    sub->add_option("--out", c.out_path, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv|json");
    sub->add_option("--tol", c.check_tol, "check tolerance");
    sub->add_option("--n-momenta", c.n_momenta, "random momenta per check");
    sub->add_flag("--corrupt-spin", c.corrupt_spin, "test hook: corrupt a spin matrix entry")
        ->group("");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"momentum-space trembling-motion toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    if (const char* seed_env = std::getenv("ZITTERKIT_SEED")) {
        try {
            cfg.seed = std::stoull(seed_env);
        } catch (...) {
            std::fprintf(stderr, "config error: ZITTERKIT_SEED must be an integer\n");
            return 2;
        }
    }

    CLI::App* check = app.add_subcommand("check-algebra", "run the matrix identity suite");
    CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues over a momentum sweep");
    CLI::App* evop = app.add_subcommand("evolve-operator",
                                        "closed-form and Heisenberg operator evolution");
    CLI::App* evpk = app.add_subcommand("evolve-packet", "packet expectation trajectories");
    CLI::App* transform = app.add_subcommand("transform", "exact FW transform report");
    for (CLI::App* sub : {check, spectrum, evop, evpk, transform})
        add_common_flags(sub, cfg, config_path);
    spectrum->add_option("--p-min", cfg.sweep_p_min, "sweep start");
    spectrum->add_option("--p-max", cfg.sweep_p_max, "sweep end");
    spectrum->add_option("--points", cfg.sweep_points, "sweep points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        // config file first, then re-apply flag overrides
        if (!config_path.empty()) {
            RunConfig from_file;
            load_config_file(from_file, config_path);
            // the environment seed outranks a seed echoed in a config file
            if (const char* seed_env = std::getenv("ZITTERKIT_SEED"))
                from_file.seed = std::stoull(seed_env);
            // overlay: parse again into the file-loaded config
            CLI::App reapp{""};
            reapp.require_subcommand(1);
            std::string ignored;
            CLI::App* subs[5] = {
                reapp.add_subcommand("check-algebra"), reapp.add_subcommand("spectrum"),
                reapp.add_subcommand("evolve-operator"), reapp.add_subcommand("evolve-packet"),
                reapp.add_subcommand("transform")};
            for (CLI::App* sub : subs)
                add_common_flags(sub, from_file, ignored);
            subs[1]->add_option("--p-min", from_file.sweep_p_min);
            subs[1]->add_option("--p-max", from_file.sweep_p_max);
            subs[1]->add_option("--points", from_file.sweep_points);
            reapp.parse(argc, argv);
            cfg = from_file;
        }

        if (check->parsed())
            return cmd_check_algebra(cfg);
        if (spectrum->parsed())
            return cmd_spectrum(cfg);
        if (evop->parsed())
            return cmd_evolve_operator(cfg);
        if (evpk->parsed())
            return cmd_evolve_packet(cfg);
        if (transform->parsed())
            return cmd_transform(cfg);
        std::fprintf(stderr, "config error: no subcommand\n");
        return 2;
    } catch (const CLI::ParseError&) {
        std::fprintf(stderr, "config error: flag re-parse failed\n");
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}
