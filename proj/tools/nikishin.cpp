// Command-line driver: runs the computation stages for one configuration and writes
// CSV tables plus a manifest per stage under <out>/<config-hash>/<stage>/.

#include "nikishin/nikishin.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace nikishin;
using json = nlohmann::json;

namespace {

const char* kVersion = "1.0.0";
const std::vector<std::string> kStages = {"polys", "recurrence", "second-kind", "equilibrium",
                                          "asymptotics", "hp", "figures"};

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, data.data(), data.size());
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
std::string fmt_short(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

class StageWriter {
public:
    StageWriter(fs::path dir, std::string stage, const json& base) : dir_(std::move(dir)), stage_(std::move(stage)) {
        fs::create_directories(dir_);
        manifest_ = base;
        manifest_["stage"] = stage_;
        manifest_["files"] = json::array();
    }

    void csv(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<std::string>>& rows) {
        std::string out;
        auto line = [&](const std::vector<std::string>& r) {
            for (size_t i = 0; i < r.size(); ++i) {
                if (i) out += ',';
                out += csv_field(r[i]);
            }
            out += "\r\n";
        };
        line(header);
        for (const auto& r : rows) line(r);
        write(name, out, rows.size());
    }

    void json_file(const std::string& name, const json& j) { write(name, j.dump(2) + "\n", 0); }

    void finish(const std::optional<json>& error) {
        manifest_["status"] = error ? "error" : "ok";
        if (error) manifest_["error"] = *error;
        std::ofstream f(dir_ / "manifest.json", std::ios::binary);
        f << manifest_.dump(2) << "\n";
    }

private:
    void write(const std::string& name, const std::string& content, size_t rows) {
        std::ofstream f(dir_ / name, std::ios::binary);
        f << content;
        json e;
        e["name"] = name;
        e["sha256"] = sha256_hex(content);
        e["bytes"] = content.size();
        if (rows) e["rows"] = rows;
        manifest_["files"].push_back(e);
    }

    fs::path dir_;
    std::string stage_;
    json manifest_;
};

// Lazily computed objects shared by the stages of one run.
class Context {
public:
    explicit Context(RunConfig cfg) : cfg_(std::move(cfg)) {}

    const RunConfig& config() const { return cfg_; }
    int p() const { return cfg_.system.p; }
    int digits() const { return static_cast<int>(digits10_for_bits(cfg_.precision_bits)); }
    std::string num(const real& x) const { return to_string(x, digits()); }

    const MuHierarchy& hierarchy() {
        if (!H_) H_ = std::make_unique<MuHierarchy>(cfg_.system, cfg_.quad_order);
        return *H_;
    }
    // records 0..n_max+1
    std::vector<QnRecord>& records() {
        if (recs_.empty()) recs_ = solve_range(hierarchy(), cfg_.n_max + 1);
        return recs_;
    }
    const RecurrenceSequence& sequence() {
        if (!seq_) seq_ = recurrence_from_records(records());
        return *seq_;
    }
    const SecondKindFamily& family(int n) {
        auto it = fams_.find(n);
        if (it == fams_.end()) it = fams_.emplace(n, std::make_unique<SecondKindFamily>(hierarchy(), records().at(n))).first;
        return *it->second;
    }
    const EquilibriumResult& equilibrium() {
        if (!eq_) {
            std::vector<RealInterval> E;
            for (const auto& I : cfg_.system.intervals) E.push_back({I.a.convert_to<double>(), I.b.convert_to<double>()});
            eq_ = solve_vector_equilibrium(E, cfg_.grid);
        }
        return *eq_;
    }

private:
    RunConfig cfg_;
    std::unique_ptr<MuHierarchy> H_;
    std::vector<QnRecord> recs_;
    std::optional<RecurrenceSequence> seq_;
    std::map<int, std::unique_ptr<SecondKindFamily>> fams_;
    std::optional<EquilibriumResult> eq_;
};

std::vector<int> n_list(const Context& ctx, std::optional<int> single, int lo = 0) {
    if (single) return {*single};
    std::vector<int> v;
    for (int n = lo; n <= ctx.config().n_max; ++n) v.push_back(n);
    return v;
}

void stage_polys(Context& ctx, StageWriter& w, std::optional<int> single) {
    std::vector<std::vector<std::string>> star, seg, coef, norm;
    int p = ctx.p();
    for (int n : n_list(ctx, single)) {
        const QnRecord& r = ctx.records().at(n);
        for (size_t i = 0; i < r.star_zeros.size(); ++i) {
            const complex& z = r.star_zeros[i];
            bool origin = abs(z) == 0;
            star.push_back({std::to_string(n), std::to_string(i), ctx.num(z.re), ctx.num(z.im),
                            origin ? "-1" : std::to_string(ray_index(z, p))});
        }
        for (size_t i = 0; i < r.segment_zeros.size(); ++i)
            seg.push_back({std::to_string(n), std::to_string(i), ctx.num(r.segment_zeros[i])});
        for (int i = 0; i <= r.d; ++i) coef.push_back({std::to_string(n), std::to_string(r.d), std::to_string(i), ctx.num(r.Qd.c[i])});
        norm.push_back({std::to_string(n), std::to_string(r.d), std::to_string(r.ell), to_string(r.pivot_ratio, 6),
                        to_string(r.ortho_residual, 6)});
    }
    w.csv("star_zeros.csv", {"n", "index", "re", "im", "ray"}, star);
    w.csv("segment_zeros.csv", {"n", "index", "tau"}, seg);
    w.csv("reduced_coefficients.csv", {"n", "d", "power", "coefficient"}, coef);
    w.csv("normality.csv", {"n", "d", "ell", "pivot_ratio", "orthogonality_residual"}, norm);
}

void stage_recurrence(Context& ctx, StageWriter& w, std::optional<int> single) {
    int p = ctx.p();
    const auto& seq = ctx.sequence();
    std::vector<std::vector<std::string>> rec, inter, hess;
    for (int n : n_list(ctx, single, p)) {
        if (n < p) continue;
        rec.push_back({std::to_string(n), ctx.num(seq.a.at(n)), to_string(seq.residuals.at(n), 6)});
        if (n >= p + 1 && n + 1 <= ctx.config().n_max + 1) {
            auto rep = interlacing_check(ctx.records()[n], ctx.records()[n + 1]);
            inter.push_back({std::to_string(n), rep.ok ? "1" : "0", std::to_string(rep.rays_checked), rep.detail});
        }
    }
    for (int n : n_list(ctx, single, 1)) {
        if (n < 1) continue;
        auto hr = hessenberg_truncation(p, seq.a, n);
        Poly q = ctx.records()[n].Qn();
        real worst = 0, scale = 0;
        for (const auto& c : q.c) scale = std::max(scale, real(abs(c)));
        for (size_t i = 0; i < q.c.size(); ++i) worst = std::max(worst, real(abs(hr.charpoly.c[i] - q.c[i])));
        hess.push_back({std::to_string(n), to_string(worst / scale, 6)});
    }
    w.csv("recurrence.csv", {"n", "a_n", "residual"}, rec);
    w.csv("interlacing.csv", {"n", "ok", "rays_checked", "detail"}, inter);
    w.csv("hessenberg.csv", {"n", "charpoly_relative_difference"}, hess);
}

void stage_second_kind(Context& ctx, StageWriter& w, std::optional<int> single) {
    int p = ctx.p();
    const auto& seq = ctx.sequence();
    auto pts = secondkind_test_points(ctx.config().system, ctx.config().probes);
    std::vector<std::vector<std::string>> rows, decay, norm;
    for (int n : n_list(ctx, single)) {
        const auto& F = ctx.family(n);
        for (int k = 0; k < p; ++k) {
            auto za = zero_count_audit(F, k);
            auto au = orthogonality_audit(F, k);
            auto L = sign_ledger(F, k);
            std::string rec = "";
            if (n >= p && n + 1 <= ctx.config().n_max + 1)
                rec = to_string(secondkind_recurrence_check(ctx.family(n - p), F, ctx.family(n + 1), k, seq.a.at(n), pts), 6);
            bool h_ok = L.H_empirical == L.H_recursive && L.H_recursive == L.H_closed;
            bool pp_ok = L.PP_empirical == L.PP_general && (k != n % p || L.PP_cases == L.PP_general);
            std::string inter = "";
            if (k >= 1 && n + 1 <= ctx.config().n_max + 1) inter = pnk_interlacing_probe(F, ctx.family(n + 1), k) ? "1" : "0";
            rows.push_back({std::to_string(n), std::to_string(k), std::to_string(za.expected), std::to_string(za.scan_count),
                            fmt_short(za.local_winding), za.elsewhere_checked ? fmt_short(za.elsewhere) : "",
                            za.ok ? "1" : "0", to_string(au.weighted_residual, 6), to_string(au.plain_residual, 6),
                            to_string(au.hierarchy_residual, 6), rec, std::to_string(L.H_empirical),
                            std::to_string(L.H_closed), std::to_string(L.PP_empirical), std::to_string(L.PP_general),
                            std::to_string(L.eps_empirical), std::to_string(L.eps_pred), h_ok && pp_ok ? "1" : "0",
                            to_string(F.orthonormality(k) - 1, 6), inter});
            norm.push_back({std::to_string(n), std::to_string(k), ctx.num(F.K(k)), ctx.num(F.kappa(k)), std::to_string(F.eps(k))});
        }
        if (n >= p)
            for (int k = 1; k <= p; ++k)
                decay.push_back({std::to_string(n), std::to_string(k), std::to_string(decay_order(n, k, p)),
                                 fmt(decay_slope(F, k))});
    }
    w.csv("second_kind.csv",
          {"n", "k", "Z", "scan_count", "winding", "winding_elsewhere", "count_ok", "weighted_residual",
           "plain_residual", "hierarchy_residual", "recurrence_residual", "sign_H", "sign_H_predicted", "sign_PP",
           "sign_PP_predicted", "eps", "eps_predicted", "signs_ok", "orthonormality_defect", "interlacing_probe"},
          rows);
    w.csv("normalization.csv", {"n", "k", "K", "kappa", "eps"}, norm);
    w.csv("decay.csv", {"n", "k", "N", "slope"}, decay);
}

void stage_equilibrium(Context& ctx, StageWriter& w) {
    const auto& eq = ctx.equilibrium();
    json s;
    s["grid"] = ctx.config().grid;
    s["energy"] = eq.energy;
    s["iterations"] = eq.iterations;
    s["constants"] = eq.constants;
    s["spreads"] = eq.spreads;
    json res = json::array();
    for (size_t k = 0; k < eq.measures.size(); ++k) {
        const auto& m = eq.measures[k];
        std::vector<std::vector<std::string>> rows, prof;
        double on_support = 0, below = 0;
        for (size_t i = 0; i < m.cells(); ++i) {
            rows.push_back({std::to_string(i), fmt(m.edges[i]), fmt(m.edges[i + 1]), fmt(m.mid(i)), fmt(m.density(i)),
                            fmt(m.weights[i])});
            double r = eq.residual_profiles[k][i];
            prof.push_back({fmt(m.mid(i)), fmt(r)});
            if (m.weights[i] > m.mass / (2.0 * m.cells())) on_support = std::max(on_support, std::fabs(r));
            below = std::min(below, r);
        }
        w.csv("measure_" + std::to_string(k) + ".csv", {"cell", "lo", "hi", "midpoint", "density", "weight"}, rows);
        w.csv("residual_" + std::to_string(k) + ".csv", {"midpoint", "W_minus_w"}, prof);
        res.push_back({{"k", k}, {"mass", m.total()}, {"max_abs_on_support", on_support}, {"min_on_set", below}});
    }
    s["residuals"] = res;
    w.json_file("summary.json", s);
}

void stage_asymptotics(Context& ctx, StageWriter& w, std::optional<int> single) {
    int p = ctx.p();
    const auto& eq = ctx.equilibrium();
    const auto& seq = ctx.sequence();
    auto pts = secondkind_test_points(ctx.config().system, ctx.config().probes);
    auto spts = star_test_points(ctx.config().system, ctx.config().probes);
    std::vector<std::vector<std::string>> zd, szd, gm, nth, kr;
    for (int n : n_list(ctx, single, 1)) {
        if (n < 1 || z_count(n, 0, p) == 0) continue;
        const auto& F = ctx.family(n);
        for (int k = 0; k < p; ++k)
            if (z_count(n, k, p) > 0) zd.push_back({std::to_string(n), std::to_string(k), fmt(check_zero_distribution(F, k, eq))});
        szd.push_back({std::to_string(n), fmt(check_star_zero_distribution(ctx.records()[n], eq))});
        for (int k = 0; k <= p; ++k) {
            auto a = check_nthroot_psi(F, k, eq, pts);
            auto b = check_nthroot_Psi(F, k, eq, spts);
            nth.push_back({std::to_string(n), std::to_string(k), fmt(a.max_error), fmt(b.max_error)});
        }
        for (const auto& r : check_K_root(F, eq))
            kr.push_back({std::to_string(n), std::to_string(r.k), fmt(r.observed), fmt(r.predicted)});
    }
    for (int k = 0; k < p; ++k)
        for (int m = 1; p * m + k <= ctx.config().n_max; ++m) {
            auto g = check_an_geometric_mean(seq, k, m, eq);
            gm.push_back({std::to_string(k), std::to_string(m), fmt(g.geometric_mean), fmt(g.predicted), fmt(g.rel_error)});
        }
    w.csv("zero_distribution.csv", {"n", "k", "distance"}, zd);
    w.csv("star_zero_distribution.csv", {"n", "distance"}, szd);
    w.csv("geometric_mean.csv", {"k", "m", "geometric_mean", "prediction", "rel_error"}, gm);
    w.csv("nth_root.csv", {"n", "k", "psi_max_error", "Psi_max_error"}, nth);
    w.csv("K_root.csv", {"n", "k", "observed", "prediction"}, kr);
}

void stage_hp(Context& ctx, StageWriter& w, std::optional<int> single) {
    int p = ctx.p();
    const auto& eq = ctx.equilibrium();
    auto spts = star_test_points(ctx.config().system, ctx.config().probes);
    std::vector<std::vector<std::string>> rows, lau;
    for (int n : n_list(ctx, single, 1)) {
        if (n < 1) continue;
        const auto& F = ctx.family(n);
        auto hp = build_hp(ctx.hierarchy(), ctx.records()[n]);
        for (int j = 0; j < p; ++j) {
            lau.push_back({std::to_string(n), std::to_string(j), std::to_string(hp.multiindex[j]),
                           to_string(laurent_order_defect(ctx.hierarchy(), ctx.records()[n], j), 6)});
            for (size_t q = 0; q < spts.size(); ++q) {
                auto r = remainder(F, hp, j, spts[q]);
                double la = log_abs(r.from_phi).convert_to<double>();
                auto z = to_std(spts[q]);
                rows.push_back({std::to_string(n), std::to_string(j), std::to_string(q), fmt(z.real()), fmt(z.imag()),
                                fmt(std::exp(la)), fmt(std::exp(la / n)), fmt(std::exp(hp_log_prediction(eq, z))),
                                to_string(r.path_difference, 6), to_string(r.phi_difference, 6)});
            }
        }
    }
    w.csv("hp.csv", {"n", "j", "probe", "re", "im", "abs_delta", "nth_root", "prediction", "path_difference",
                     "phi_difference"},
          rows);
    w.csv("laurent.csv", {"n", "j", "n_j", "order_defect"}, lau);
}

void stage_figures(Context& ctx, StageWriter& w, std::optional<int> single) {
    std::vector<int> ns;
    if (single) {
        ns = {*single};
    } else {
        for (int n : {29, 30, 45})
            if (n <= ctx.config().n_max) ns.push_back(n);
        if (ns.empty()) ns = {ctx.config().n_max};
    }
    for (int n : ns) {
        const QnRecord& r = ctx.records().at(n);
        std::vector<std::vector<std::string>> rows;
        for (const auto& z : r.star_zeros)
            rows.push_back({fmt(z.re.convert_to<double>()), fmt(z.im.convert_to<double>()), abs(z) == 0 ? "1" : "0"});
        w.csv("zeros_n" + std::to_string(n) + ".csv", {"re", "im", "origin"}, rows);
    }
}

int run_stage(Context& ctx, const std::string& stage, const fs::path& root, const json& base, std::optional<int> single) {
    StageWriter w(root / stage, stage, base);
    try {
        if (stage == "polys") stage_polys(ctx, w, single);
        else if (stage == "recurrence") stage_recurrence(ctx, w, single);
        else if (stage == "second-kind") stage_second_kind(ctx, w, single);
        else if (stage == "equilibrium") stage_equilibrium(ctx, w);
        else if (stage == "asymptotics") stage_asymptotics(ctx, w, single);
        else if (stage == "hp") stage_hp(ctx, w, single);
        else if (stage == "figures") stage_figures(ctx, w, single);
        w.finish(std::nullopt);
        std::cout << stage << ": ok -> " << (root / stage).string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::string type = "error";
        if (dynamic_cast<const normality_error*>(&e)) type = "normality_error";
        else if (dynamic_cast<const structural_error*>(&e)) type = "structural_error";
        else if (dynamic_cast<const pole_proximity_error*>(&e)) type = "pole_proximity_error";
        else if (dynamic_cast<const validation_error*>(&e)) type = "validation_error";
        else if (dynamic_cast<const convergence_error*>(&e)) type = "convergence_error";
        else if (dynamic_cast<const std::runtime_error*>(&e)) type = "runtime_error";
        w.finish(json{{"type", type}, {"message", e.what()}});
        std::cerr << stage << ": " << type << ": " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nikishin systems on star-like sets: multi-orthogonal polynomials, second-kind functions, "
                 "equilibrium and Hermite-Pade checks"};
    std::string config_path, out_dir, stage_opt, command;
    std::optional<int> n_single, n_max, bits, grid;
    app.add_option("command", command, "stage to run: polys, recurrence, second-kind, equilibrium, asymptotics, hp, "
                                       "figures, all");
    app.add_option("--config", config_path, "configuration file (TOML)")->required()->check(CLI::ExistingFile);
    app.add_option("--n", n_single, "restrict per-n stages to this index");
    app.add_option("--n-max", n_max, "override n_max");
    app.add_option("--precision-bits", bits, "override working precision");
    app.add_option("--grid", grid, "override equilibrium grid size M");
    app.add_option("--out", out_dir, "output root directory");
    app.add_option("--stage", stage_opt, "stage to run (alternative to the positional command)");
    CLI11_PARSE(app, argc, argv);

    std::string stage = !stage_opt.empty() ? stage_opt : (command.empty() ? "all" : command);
    if (stage != "all" && std::find(kStages.begin(), kStages.end(), stage) == kStages.end()) {
        std::cerr << "unknown stage '" << stage << "'\n";
        return 1;
    }

    RunConfig cfg;
    try {
        json c = load_config(config_path).canonical;
        if (n_max) c["n_max"] = *n_max;
        if (bits) c["precision_bits"] = *bits;
        if (grid) c["grid"] = *grid;
        if (!out_dir.empty()) c["out"] = out_dir;
        set_precision_bits(c.at("precision_bits").get<unsigned>());
        cfg = config_from_json(c);
        if (n_single && (*n_single < 0 || *n_single > cfg.n_max))
            throw validation_error("--n must lie in [0, n_max]");
    } catch (const std::exception& e) {
        std::cerr << "config: " << e.what() << "\n";
        return 1;
    }

    json hashed = cfg.canonical;
    hashed.erase("out");
    std::string hash = sha256_hex(hashed.dump()).substr(0, 16);
    fs::path root = fs::path(cfg.out) / hash;
    json base;
    base["config_hash"] = hash;
    base["config"] = hashed;
    base["precision_bits"] = cfg.precision_bits;
    if (n_single) base["n"] = *n_single;
    base["versions"] = {{"nikishin", kVersion},
                        {"mpfr", MPFR_VERSION_STRING},
                        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                      std::to_string(EIGEN_MINOR_VERSION)}};

    Context ctx(cfg);
    int status = 0;
    if (stage == "all") {
        for (const auto& s : kStages) status = std::max(status, run_stage(ctx, s, root, base, n_single));
    } else {
        status = run_stage(ctx, stage, root, base, n_single);
    }
    return status;
}
