// gg: command-line front end for the two-well gradient model laboratory.
// Every subcommand prints CSV or JSON (with the invoking parameters embedded)
// to stdout or --out, and exits 0 on success, 1 on bad input, 2 on a
// numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gradgibbs/duality.hpp"
#include "gradgibbs/enumeration.hpp"
#include "gradgibbs/gaussfield.hpp"
#include "gradgibbs/gibbs.hpp"
#include "gradgibbs/rng.hpp"
#include "gradgibbs/spinwave.hpp"
#include "gradgibbs/torus.hpp"

using json = nlohmann::json;
using namespace gradgibbs;

namespace {

struct OutSink {
    std::string path;  // empty = stdout
    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(path);
        if (!f) throw std::invalid_argument("cannot open output file '" + path + "'");
        f << text;
    }
};

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad number '" + tok + "' in list");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty numeric list '" + s + "'");
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_double_list(s)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) throw std::invalid_argument("expected integers in list");
        out.push_back(i);
    }
    return out;
}

std::vector<Pattern> parse_pattern_list(const std::string& s) {
    if (s == "all") return {all_patterns.begin(), all_patterns.end()};
    std::vector<Pattern> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_pattern(tok));
    if (out.empty()) throw std::invalid_argument("empty pattern list");
    return out;
}

int env_workers() {
    if (const char* w = std::getenv("GRADGIBBS_WORKERS")) {
        const int n = std::atoi(w);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

json params_json(const ModelParams& mp) {
    return {{"p", mp.p}, {"kappa_O", mp.kappa_o}, {"kappa_D", mp.kappa_d}};
}

// ---------------------------------------------------------------------------

struct ModelOpts {
    double p = 0.5;
    double kappa_o = 100.0;
    double kappa_d = 0.01;
    ModelParams params() const {
        ModelParams mp{p, kappa_o, kappa_d};
        mp.validate();
        return mp;
    }
    void attach(CLI::App* cmd) {
        cmd->add_option("-p,--p", p, "a-priori weight of the stiff species")
            ->capture_default_str();
        cmd->add_option("--kappa-o", kappa_o, "stiff coupling")->capture_default_str();
        cmd->add_option("--kappa-d", kappa_d, "soft coupling")->capture_default_str();
    }
};

struct QuadOpts {
    int grid = 512;
    double tol = 1e-7;
    int max_grid = 4096;
    QuadratureSpec spec() const { return {grid, tol, max_grid}; }
    void attach(CLI::App* cmd) {
        cmd->add_option("--grid", grid, "starting quadrature grid (even)")
            ->capture_default_str();
        cmd->add_option("--tol", tol, "grid-doubling stopping tolerance")->capture_default_str();
        cmd->add_option("--max-grid", max_grid, "quadrature grid cap")->capture_default_str();
    }
};

int run_spinwave(const ModelOpts& mo, const QuadOpts& qo, const std::string& patterns,
                 const std::string& l_str, const OutSink& sink) {
    const ModelParams mp = mo.params();
    std::ostringstream os;
    os << "pattern,p,kappa_O,kappa_D,L,value,error_estimate\n";
    for (Pattern a : parse_pattern_list(patterns)) {
        FreeEnergyReport rep;
        if (l_str == "inf") {
            rep = infinite_free_energy(a, mp, qo.spec());
        } else {
            rep = finite_free_energy(a, mp, std::stoi(l_str));
        }
        os << pattern_name(a) << ',' << full_precision(mp.p) << ','
           << full_precision(mp.kappa_o) << ',' << full_precision(mp.kappa_d) << ','
           << (rep.infinite_volume ? std::string("inf") : std::to_string(rep.L)) << ','
           << full_precision(rep.value) << ',' << full_precision(rep.error) << '\n';
    }
    sink.write(os.str());
    return 0;
}

int run_finite_fe(const ModelOpts& mo, const std::string& patterns, int L, const OutSink& sink) {
    const ModelParams mp = mo.params();
    Torus t(L);
    std::ostringstream os;
    os << "pattern,p,kappa_O,kappa_D,L,momentum_value,cholesky_value,abs_diff\n";
    for (Pattern a : parse_pattern_list(patterns)) {
        const double momentum = finite_free_energy(a, mp, L).value;
        const CouplingConfig c = pattern_coupling(a, mp, t);
        PinnedPrecision K(c, t);
        const int n_o = count_ordered(pattern_ordered_mask(a, t));
        const int n_d = t.n_bonds() - n_o;
        const double chol =
            -(n_o * std::log(mp.p) + n_d * std::log(1.0 - mp.p) - 0.5 * K.log_det()) /
            t.n_sites();
        os << pattern_name(a) << ',' << full_precision(mp.p) << ','
           << full_precision(mp.kappa_o) << ',' << full_precision(mp.kappa_d) << ',' << L << ','
           << full_precision(momentum) << ',' << full_precision(chol) << ','
           << full_precision(std::abs(momentum - chol)) << '\n';
    }
    sink.write(os.str());
    return 0;
}

int run_logz(const std::string& in_path, const OutSink& sink) {
    std::ifstream f(in_path);
    if (!f) throw std::invalid_argument("cannot open input file '" + in_path + "'");
    const LoadedConfig lc = load_config(f);
    if (lc.kind != "kappa")
        throw std::invalid_argument("logz needs a coupling file (kind=kappa), got kind=" +
                                    lc.kind);
    Torus t(lc.L);
    CouplingConfig c;
    c.kappa = lc.values;
    json out;
    out["run_config"] = {{"command", "logz"}, {"in", in_path}};
    out["L"] = lc.L;
    out["n_bonds"] = t.n_bonds();
    out["digest"] = coupling_digest(c);
    out["log_z"] = log_partition(c, t);
    out["log_z_star"] = log_partition_star(c, t);
    sink.write(out.dump(2) + "\n");
    return 0;
}

int run_sample(const ModelOpts& mo, int L, long sweeps, long burnin, std::uint64_t seed,
               const std::string& init_str, const std::string& stream, int box_w, int box_h,
               const OutSink& sink) {
    const ModelParams mp = mo.params();
    const Init init = [&] {
        if (init_str == "ordered") return Init::Ordered;
        if (init_str == "disordered") return Init::Disordered;
        throw std::invalid_argument("init must be 'ordered' or 'disordered'");
    }();
    std::optional<Box> box;
    if (box_w > 0 || box_h > 0) {
        if (box_w <= 0 || box_h <= 0)
            throw std::invalid_argument("give both --box-w and --box-h or neither");
        box = centered_box(Torus(L), box_w, box_h);
    }
    const ChainResult r = run_chain(mp, L, init, sweeps, burnin, seed, stream, box);
    std::ostringstream os;
    os << "sweep,r_ord,tilt_x,tilt_y,energy,n_ordered\n";
    for (const auto& rec : r.records)
        os << rec.sweep << ',' << full_precision(rec.r_ord) << ',' << full_precision(rec.tilt_x)
           << ',' << full_precision(rec.tilt_y) << ',' << full_precision(rec.energy) << ','
           << rec.n_ordered << '\n';
    sink.write(os.str());
    return 0;
}

int run_scan(const ModelOpts& mo, const std::string& p_list, int L, long sweeps, long burnin,
             int seeds, std::uint64_t seed, double threshold, const OutSink& sink) {
    ModelParams base = mo.params();
    const std::vector<double> grid = parse_double_list(p_list);
    ScanProtocol proto;
    proto.sweeps = sweeps;
    proto.burnin = burnin;
    proto.n_seeds = seeds;
    proto.threshold = threshold;
    const ScanReport rep = scan_p(base, grid, L, proto, seed, env_workers());

    json out;
    out["run_config"] = {{"command", "scan"},   {"model", params_json(base)},
                         {"L", L},              {"sweeps", sweeps},
                         {"burnin", burnin},    {"seeds", seeds},
                         {"seed", seed},        {"threshold", threshold},
                         {"p_grid", rep.p_grid}};
    out["cells"] = json::array();
    for (const auto& cell : rep.cells)
        out["cells"].push_back({{"p", cell.p},
                                {"init", cell.init == Init::Ordered ? "ordered" : "disordered"},
                                {"rep", cell.rep},
                                {"chi", cell.chi}});
    out["chi_ordered"] = rep.chi_ordered;
    out["chi_disordered"] = rep.chi_disordered;
    out["chi_mean"] = rep.chi_mean;
    out["jump_p"] = rep.jump_p;
    out["jump_size"] = rep.jump_size;
    out["has_hysteresis"] = rep.has_hysteresis;
    out["hysteresis_window"] = {rep.hyst_lo, rep.hyst_hi};
    sink.write(out.dump(2) + "\n");
    return 0;
}

int run_duality_check(const ModelOpts& mo, const std::string& l_list, int count,
                      std::uint64_t seed, const OutSink& sink) {
    const ModelParams mp = mo.params();
    json reports = json::array();
    double worst = 0.0;
    for (int L : parse_int_list(l_list)) {
        Torus t(L);
        CounterRng rng(seed, "cli:duality:L" + std::to_string(L));
        for (int i = 0; i < count; ++i) {
            CouplingConfig c;
            c.kappa.resize(t.n_bonds());
            if (i % 2 == 0) {
                for (auto& k : c.kappa)
                    k = rng.next_uniform() < 0.5 ? mp.kappa_o : mp.kappa_d;
            } else {
                const double lo = std::log(mp.kappa_d), hi = std::log(mp.kappa_o);
                for (auto& k : c.kappa) k = std::exp(lo + (hi - lo) * rng.next_uniform());
            }
            const DualityReport rep = verify_z_rep(c, t);
            worst = std::max(worst, std::abs(rep.residual));
            reports.push_back({{"L", rep.L},
                               {"digest", rep.digest},
                               {"kind", i % 2 == 0 ? "two-state" : "log-uniform"},
                               {"lhs", rep.lhs},
                               {"rhs", rep.rhs},
                               {"residual", rep.residual}});
        }
    }
    json out;
    out["run_config"] = {{"command", "duality-check"}, {"model", params_json(mp)},
                         {"L_list", l_list},           {"count", count},
                         {"seed", seed}};
    out["reports"] = std::move(reports);
    out["max_abs_residual"] = worst;
    sink.write(out.dump(2) + "\n");
    return 0;
}

int run_pt(const ModelOpts& mo, const std::string& p_list, const OutSink& sink) {
    const ModelParams mp = mo.params();
    const std::vector<double> grid = parse_double_list(p_list);
    const OrientationAdjudication adj = adjudicate_orientation(mp, grid);
    json out;
    out["run_config"] = {{"command", "pt"}, {"model", params_json(mp)}, {"p_grid", grid}};
    out["crossing_p"] = crossing_p(mp);
    out["self_dual_A"] = self_dual_p(mp, Orientation::A);
    out["self_dual_B"] = self_dual_p(mp, Orientation::B);
    out["worst_residual_A"] = adj.worst_a;
    out["worst_residual_B"] = adj.worst_b;
    out["winner"] = adj.winner == Orientation::A ? "A" : "B";
    out["p_t"] = adj.winner_self_dual;
    sink.write(out.dump(2) + "\n");
    return 0;
}

int run_exact_enum(const ModelOpts& mo, const OutSink& sink) {
    const ModelParams mp = mo.params();
    const ExactSummary s = enumerate_exact(mp);
    json out;
    out["run_config"] = {{"command", "exact-enum"}, {"model", params_json(mp)}};
    out["log_z"] = s.log_z;
    out["log_z_star"] = s.log_z_star;
    out["ordered_marginal"] = s.ordered_marginal;
    out["chi"] = s.chi;
    out["r_one_minus_r"] = s.r_one_minus_r;
    out["bond_energy"] = s.bond_energy;
    out["mean_energy"] = s.mean_energy;
    json pat = json::object();
    for (std::size_t a = 0; a < all_patterns.size(); ++a)
        pat[pattern_name(all_patterns[a])] = {{"plaquette", s.pattern_plaquette_prob[a]},
                                              {"global", s.pattern_global_prob[a]}};
    out["pattern_prob"] = std::move(pat);
    out["bad_plaquette_prob"] = s.bad_plaquette_prob;
    out["bad_global_prob"] = s.bad_global_prob;
    sink.write(out.dump(2) + "\n");
    return 0;
}

int run_chessboard(const ModelOpts& mo, double tol, const OutSink& sink) {
    const ModelParams mp = mo.params();
    const ChessboardReport rep = chessboard_check(mp, tol);
    json out;
    out["run_config"] = {{"command", "chessboard"}, {"model", params_json(mp)}, {"tol", tol}};
    out["all_hold"] = rep.all_hold;
    out["subadditive_ok"] = rep.subadditive_ok;
    out["z_pattern"] = rep.z_pattern;
    out["z_mixed"] = rep.z_mixed;
    out["sum_z_mixed_singletons"] = rep.sum_z_mixed_singletons;
    out["r_one_minus_r"] = rep.r_one_minus_r;
    out["ratio_to_z_mixed"] = rep.ratio_to_z_mixed;
    out["n_rows"] = rep.rows.size();
    json viol = json::array();
    for (const auto& row : rep.rows)
        if (!row.ok)
            viol.push_back({{"description", row.description}, {"lhs", row.lhs}, {"rhs", row.rhs}});
    out["violations"] = std::move(viol);
    sink.write(out.dump(2) + "\n");
    return 0;
}

int run_gap_check(const ModelOpts& mo, const QuadOpts& qo, const OutSink& sink) {
    const ModelParams mp = mo.params();
    const GapReport rep = gap_check(mp, qo.spec());
    json out;
    out["run_config"] = {{"command", "gap-check"},
                         {"model", params_json(mp)},
                         {"grid", qo.grid},
                         {"tol", qo.tol},
                         {"max_grid", qo.max_grid}};
    json f = json::object();
    for (std::size_t a = 0; a < all_patterns.size(); ++a)
        f[pattern_name(all_patterns[a])] = rep.f[a];
    out["free_energy"] = std::move(f);
    out["lhs"] = rep.lhs;
    out["rhs"] = rep.rhs;
    out["margin"] = rep.margin;
    out["holds"] = rep.holds;
    out["I"] = rep.I;
    out["J"] = rep.J;
    out["grid"] = rep.grid;
    out["error"] = rep.error;
    sink.write(out.dump(2) + "\n");
    return 0;
}

int run_tilt_check(int L, long draws, const std::string& deltas_str, double kappa,
                   std::uint64_t seed, int box_w, int box_h, const OutSink& sink) {
    Torus t(L);
    const std::vector<double> deltas = parse_double_list(deltas_str);
    const Box box = centered_box(t, box_w, box_h);
    const int nb = box_bond_count(t, box);
    CouplingConfig c;
    c.kappa.assign(t.n_bonds(), kappa);
    GradientSampler sampler(c, t);
    CounterRng rng(seed, "cli:tilt");

    std::vector<long> exceed(deltas.size(), 0);
    for (long i = 0; i < draws; ++i) {
        const GradientConfig g = sampler.draw(t, rng);
        auto [tx, ty] = empirical_tilt(g, t, box);
        const double sup = std::max(std::abs(tx), std::abs(ty));
        for (std::size_t d = 0; d < deltas.size(); ++d)
            if (sup >= deltas[d]) ++exceed[d];
    }

    json out;
    out["run_config"] = {{"command", "tilt-check"}, {"L", L},           {"draws", draws},
                         {"kappa", kappa},          {"seed", seed},     {"box_w", box_w},
                         {"box_h", box_h},          {"box_bonds", nb}};
    out["rows"] = json::array();
    bool all_ok = true;
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        const double emp = exceed[d] / static_cast<double>(draws);
        const double bound = tilt_tail_bound(deltas[d], kappa, nb);
        const bool ok = emp <= bound;
        all_ok = all_ok && ok;
        out["rows"].push_back(
            {{"delta", deltas[d]}, {"empirical", emp}, {"bound", bound}, {"ok", ok}});
    }
    out["all_ok"] = all_ok;
    sink.write(out.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the two-well gradient model on the torus"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --config appear after the subcommand name
    app.set_config("--config", "",
                   "file of 'key = value' lines under [subcommand] sections; flags win");

    OutSink sink;
    ModelOpts mo;
    QuadOpts qo;

    auto add_common = [&](CLI::App* cmd, bool model, bool quad) {
        cmd->add_option("-o,--out", sink.path, "output file (default: stdout)");
        if (model) mo.attach(cmd);
        if (quad) qo.attach(cmd);
    };

    // spinwave
    auto* sw = app.add_subcommand("spinwave", "pattern free energies (CSV)");
    std::string sw_patterns = "all", sw_L = "inf";
    sw->add_option("--pattern", sw_patterns, "pattern list or 'all'")->capture_default_str();
    sw->add_option("-L,--L", sw_L, "'inf' or an even torus side")->capture_default_str();
    add_common(sw, true, true);

    // finite-fe
    auto* ffe = app.add_subcommand("finite-fe",
                                   "finite-torus free energy, momentum vs Cholesky (CSV)");
    std::string ffe_patterns = "all";
    int ffe_L = 4;
    ffe->add_option("--pattern", ffe_patterns, "pattern list or 'all'")->capture_default_str();
    ffe->add_option("-L,--L", ffe_L, "even torus side")->capture_default_str();
    add_common(ffe, true, false);

    // logz
    auto* lz = app.add_subcommand("logz", "partition functions of a coupling file (JSON)");
    std::string lz_in;
    lz->add_option("--in", lz_in, "bond file with kind=kappa")->required();
    add_common(lz, false, false);

    // sample
    auto* sm = app.add_subcommand("sample", "one extended-measure chain (CSV)");
    int sm_L = 8, sm_bw = 0, sm_bh = 0;
    long sm_sweeps = 1000, sm_burnin = 100;
    std::uint64_t sm_seed = 1;
    std::string sm_init = "ordered", sm_stream = "cli";
    sm->add_option("-L,--L", sm_L, "even torus side")->capture_default_str();
    sm->add_option("--sweeps", sm_sweeps, "measurement sweeps")->capture_default_str();
    sm->add_option("--burnin", sm_burnin, "discarded sweeps")->capture_default_str();
    sm->add_option("--seed", sm_seed, "rng seed")->capture_default_str();
    sm->add_option("--init", sm_init, "ordered | disordered")->capture_default_str();
    sm->add_option("--stream", sm_stream, "rng stream name")->capture_default_str();
    sm->add_option("--box-w", sm_bw, "tilt box width (default L/2)");
    sm->add_option("--box-h", sm_bh, "tilt box height (default L/2)");
    add_common(sm, true, false);

    // scan
    auto* sc = app.add_subcommand("scan", "two-start p scan with jump/hysteresis summary (JSON)");
    std::string sc_plist = "0.3,0.5,0.7,0.9";
    int sc_L = 16, sc_seeds = 4;
    long sc_sweeps = 10000, sc_burnin = 1000;
    std::uint64_t sc_seed = 1;
    double sc_threshold = 0.5;
    sc->add_option("--p-list", sc_plist, "comma-separated p grid")->capture_default_str();
    sc->add_option("-L,--L", sc_L, "even torus side")->capture_default_str();
    sc->add_option("--sweeps", sc_sweeps, "measurement sweeps per chain")->capture_default_str();
    sc->add_option("--burnin", sc_burnin, "discarded sweeps per chain")->capture_default_str();
    sc->add_option("--seeds", sc_seeds, "independent repeats per (p, init)")
        ->capture_default_str();
    sc->add_option("--seed", sc_seed, "rng seed")->capture_default_str();
    sc->add_option("--threshold", sc_threshold, "hysteresis flag threshold")
        ->capture_default_str();
    add_common(sc, true, false);

    // duality-check
    auto* dc = app.add_subcommand("duality-check",
                                  "fixed-coupling duality residuals on random configs (JSON)");
    std::string dc_llist = "2,4,8";
    int dc_count = 50;
    std::uint64_t dc_seed = 1;
    dc->add_option("--L-list", dc_llist, "comma-separated torus sides")->capture_default_str();
    dc->add_option("--count", dc_count, "configs per side")->capture_default_str();
    dc->add_option("--seed", dc_seed, "rng seed")->capture_default_str();
    add_common(dc, true, false);

    // pt
    auto* pt = app.add_subcommand("pt", "transition point via exact summed duality (JSON)");
    std::string pt_plist = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    pt->add_option("--p-grid", pt_plist, "p grid for the orientation adjudication")
        ->capture_default_str();
    add_common(pt, true, false);

    // exact-enum
    auto* ee = app.add_subcommand("exact-enum", "exact 2x2 mixture summary (JSON)");
    add_common(ee, true, false);

    // chessboard
    auto* cb = app.add_subcommand("chessboard", "exact chessboard bound check at L=2 (JSON)");
    double cb_tol = 1e-12;
    cb->add_option("--tol", cb_tol, "violation tolerance")->capture_default_str();
    add_common(cb, true, false);

    // gap-check
    auto* gc = app.add_subcommand("gap-check", "coexistence-gap certificate (JSON)");
    add_common(gc, true, true);

    // tilt-check
    auto* tc = app.add_subcommand("tilt-check",
                                  "tilt tail vs concentration bound, fixed couplings (JSON)");
    int tc_L = 8, tc_bw = 4, tc_bh = 4;
    long tc_draws = 100000;
    double tc_kappa = 1.0;
    std::string tc_deltas = "0.1,0.2,0.4";
    std::uint64_t tc_seed = 1;
    tc->add_option("-L,--L", tc_L, "even torus side")->capture_default_str();
    tc->add_option("--draws", tc_draws, "number of exact draws")->capture_default_str();
    tc->add_option("--deltas", tc_deltas, "comma-separated thresholds")->capture_default_str();
    tc->add_option("--kappa", tc_kappa, "homogeneous coupling")->capture_default_str();
    tc->add_option("--seed", tc_seed, "rng seed")->capture_default_str();
    tc->add_option("--box-w", tc_bw, "tilt box width")->capture_default_str();
    tc->add_option("--box-h", tc_bh, "tilt box height")->capture_default_str();
    add_common(tc, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the error message
        return code == 0 ? 0 : 1;
    }

    try {
        if (sw->parsed()) return run_spinwave(mo, qo, sw_patterns, sw_L, sink);
        if (ffe->parsed()) return run_finite_fe(mo, ffe_patterns, ffe_L, sink);
        if (lz->parsed()) return run_logz(lz_in, sink);
        if (sm->parsed())
            return run_sample(mo, sm_L, sm_sweeps, sm_burnin, sm_seed, sm_init, sm_stream, sm_bw,
                              sm_bh, sink);
        if (sc->parsed())
            return run_scan(mo, sc_plist, sc_L, sc_sweeps, sc_burnin, sc_seeds, sc_seed,
                            sc_threshold, sink);
        if (dc->parsed()) return run_duality_check(mo, dc_llist, dc_count, dc_seed, sink);
        if (pt->parsed()) return run_pt(mo, pt_plist, sink);
        if (ee->parsed()) return run_exact_enum(mo, sink);
        if (cb->parsed()) return run_chessboard(mo, cb_tol, sink);
        if (gc->parsed()) return run_gap_check(mo, qo, sink);
        if (tc->parsed())
            return run_tilt_check(tc_L, tc_draws, tc_deltas, tc_kappa, tc_seed, tc_bw, tc_bh,
                                  sink);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
