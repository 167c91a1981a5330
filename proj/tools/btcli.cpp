// Command-line front end: analyze, predict, correct, lpseries, converge, compare, dump.
#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bt/corrector.hpp"
#include "bt/report.hpp"

using namespace bt;

namespace {

struct ModelArgs {
    std::string model = "bt_nf";
    std::vector<double> x0, alpha0;
    BtNfParams nf;
    bool no_polish = false;

    void add(CLI::App* app) {
        app->add_option("--model", model, "builtin (bt_nf, hh) or model file")->capture_default_str();
        app->add_option("--x0", x0, "approximate BT equilibrium")->expected(1, 1 << 20);
        app->add_option("--alpha0", alpha0, "active parameters at the BT point")->expected(2);
        app->add_option("--nf-a", nf.a, "bt_nf: a")->capture_default_str();
        app->add_option("--nf-b", nf.b, "bt_nf: b")->capture_default_str();
        app->add_option("--nf-c1", nf.c1, "bt_nf: c1 (alpha2^3 term)")->capture_default_str();
        app->add_option("--nf-d", nf.d, "bt_nf: d")->capture_default_str();
        app->add_option("--nf-e", nf.e, "bt_nf: e")->capture_default_str();
        app->add_option("--nf-a1", nf.a1, "bt_nf: a1")->capture_default_str();
        app->add_option("--nf-b1", nf.b1, "bt_nf: b1")->capture_default_str();
        app->add_flag("--no-polish", no_polish, "skip the Newton polish of the equilibrium");
    }
};

struct Setup {
    OdeModel model;
    BtPoint pt;
};

Setup load(const ModelArgs& a) {
    Setup s;
    s.model = resolve_model(a.model, a.nf);
    if (a.model == "hh") s.pt = hh_bt_point();
    else {
        s.pt.x0 = Vec::Zero(s.model.dim);
        s.pt.alpha0 = Vec2::Zero();
    }
    if (!a.x0.empty()) {
        if (int(a.x0.size()) != s.model.dim) throw std::invalid_argument("--x0 needs " + std::to_string(s.model.dim) + " values");
        s.pt.x0 = Eigen::Map<const Vec>(a.x0.data(), a.x0.size());
    } else if (a.model != "bt_nf" && a.model != "hh") {
        throw std::invalid_argument("--x0 and --alpha0 are required for model files");
    }
    if (!a.alpha0.empty()) s.pt.alpha0 = Vec2(a.alpha0[0], a.alpha0[1]);
    if (!a.no_polish) s.pt.x0 = polish_equilibrium(s.model, s.pt.x0, s.pt.alpha0);
    return s;
}

std::vector<double> parse_range(const std::string& r) {
    // lo:hi:n, logarithmic
    std::vector<double> out;
    std::stringstream ss(r);
    std::string p[3];
    for (int i = 0; i < 3; ++i)
        if (!std::getline(ss, p[i], ':')) throw std::invalid_argument("range must be lo:hi:n");
    double lo = std::stod(p[0]), hi = std::stod(p[1]);
    int n = std::stoi(p[2]);
    if (!(lo > 0) || !(hi > 0) || n < 1) throw std::invalid_argument("range needs positive ends and n >= 1");
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? hi : hi * std::pow(lo / hi, double(i) / (n - 1)));
    return out;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write " + path);
    f << text;
}

std::string dump(const Json& j) { return j.dump(2, ' ', false, nlohmann::detail::error_handler_t::replace) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homoclinic predictors near Bogdanov-Takens points"};
    app.require_subcommand(1);

    ModelArgs ma;
    std::string out, variant = "orbital", method = "lp", phase = "vzero";
    int order = 3, ntst = 40, ncol = 4, lp_order = 4, threads = 0;
    double eps = 0.1, k = -1, k_ratio = 1e-4, time_shift = 0;
    bool xi_identity = false, wrong_k = false, auto_eps = false;
    std::string methods = "rp,lp", orders = "0,1,2,3", amplitudes = "1e-4:1e-1:10", eps_range = "1e-2:1e-1:5";

    auto* analyze = app.add_subcommand("analyze", "BT data and center-manifold coefficients");
    ma.add(analyze);
    analyze->add_option("--variant", variant, "orbital|smooth|hyper|all")->capture_default_str();
    analyze->add_option("--out", out, "JSON output (default stdout)");

    auto* dumpc = app.add_subcommand("dump", "serialize a CmExpansion");
    ma.add(dumpc);
    bool coeffs = false;
    dumpc->add_flag("--coeffs", coeffs, "dump center-manifold coefficients")->required();
    dumpc->add_option("--variant", variant, "orbital|smooth|hyper")->capture_default_str();
    dumpc->add_option("--out", out, "JSON output");

    auto pred_opts = [&](CLI::App* c) {
        ma.add(c);
        c->add_option("--method", method, "lp|rp")->capture_default_str();
        c->add_option("--variant", variant, "orbital|smooth|hyper")->capture_default_str();
        c->add_option("--phase", phase, "vzero|l2|altgamma")->capture_default_str();
        c->add_option("--order", order, "truncation order 0..3")->capture_default_str();
        c->add_option("--eps", eps, "blow-up amplitude eps")->capture_default_str();
        c->add_option("--k", k, "end-point distance (default eps*1e-4)");
        c->add_option("--ntst", ntst, "mesh intervals")->capture_default_str();
        c->add_option("--ncol", ncol, "collocation points per interval")->capture_default_str();
        c->add_flag("--xi-identity", xi_identity, "LP without the higher-order time transformation");
        c->add_flag("--wrong-k", wrong_k, "drop K11 and K03 (negative control)");
        c->add_option("--time-shift", time_shift, "constant added to t(eta), units of eps^2")->capture_default_str();
        c->add_option("--out", out, "JSON output");
    };
    auto* predict = app.add_subcommand("predict", "sample a homoclinic predictor");
    pred_opts(predict);
    auto* correct = app.add_subcommand("correct", "predict and Newton-correct");
    pred_opts(correct);
    correct->add_flag("--auto-eps", auto_eps, "halve eps on failure (up to 8 tries)");

    auto* lps = app.add_subcommand("lpseries", "exact LP coefficients");
    lps->add_option("--order", lp_order, "number of terms N")->capture_default_str();
    lps->add_option("--out", out, "CSV output; the omega lists go to the same name with .json");

    auto* conv = app.add_subcommand("converge", "convergence study");
    ma.add(conv);
    conv->add_option("--variant", variant, "orbital|smooth|hyper")->capture_default_str();
    conv->add_option("--methods", methods, "comma list of rp, lp, rp-l2, lp-alt, lp-xi")->capture_default_str();
    conv->add_option("--orders", orders, "comma list")->capture_default_str();
    conv->add_option("--amplitudes", amplitudes, "lo:hi:n, logarithmic")->capture_default_str();
    conv->add_option("--ntst", ntst, "mesh intervals")->capture_default_str();
    conv->add_option("--ncol", ncol, "collocation points per interval")->capture_default_str();
    conv->add_option("--k-ratio", k_ratio, "k = ratio * A0")->capture_default_str();
    conv->add_option("--threads", threads, "worker threads (0: all)")->capture_default_str();
    conv->add_option("--out", out, "CSV output");

    auto* cmp = app.add_subcommand("compare", "parameter predictions across variants");
    ma.add(cmp);
    cmp->add_option("--eps-range", eps_range, "lo:hi:n, logarithmic")->capture_default_str();
    cmp->add_option("--out", out, "CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        auto cm_for = [&](const Setup& s, Variant v) {
            MultilinearOracle o(s.model, s.pt.x0, s.pt.alpha0);
            return compute_cm(o, analyze_bt(o), v);
        };
        auto popts = [&]() {
            PredictorOptions o;
            o.method = parse_method(method);
            o.phase = parse_phase(phase);
            o.order = order;
            o.xi_identity = xi_identity;
            o.wrong_k = wrong_k;
            o.time_shift = time_shift;
            return o;
        };

        if (*analyze) {
            Setup s = load(ma);
            MultilinearOracle o(s.model, s.pt.x0, s.pt.alpha0);
            BTData bt = analyze_bt(o);
            Json j;
            j["model"] = s.model.name;
            j["bt"] = to_json(bt);
            double defect = o.step_halving_defect();
            j["fd_step"] = o.h();
            j["fd_step_halving_defect"] = defect;
            if (defect > 1e-5) std::cerr << "warning: multilinear forms change by " << defect << " under step halving\n";
            std::vector<Variant> vs;
            if (variant == "all") vs = {Variant::Orbital, Variant::Smooth, Variant::Hyper};
            else vs = {parse_variant(variant)};
            Json arr = Json::array();
            for (Variant v : vs) arr.push_back(to_json(compute_cm(o, bt, v)));
            j["expansions"] = arr;
            emit(out, dump(j));
        } else if (*dumpc) {
            Setup s = load(ma);
            emit(out, dump(to_json(cm_for(s, parse_variant(variant)))));
        } else if (*predict) {
            Setup s = load(ma);
            CmExpansion cm = cm_for(s, parse_variant(variant));
            double kk = k > 0 ? k : eps * 1e-4;
            HomPredictor p = sample_predictor(cm, popts(), eps, Mesh::uniform(ntst, ncol), kk);
            emit(out, dump(to_json(p)));
        } else if (*correct) {
            Setup s = load(ma);
            CmExpansion cm = cm_for(s, parse_variant(variant));
            AutoCorrectOptions ao;
            ao.eps = eps;
            ao.mesh = Mesh::uniform(ntst, ncol);
            if (k > 0) ao.k_factor = k / eps;
            if (!auto_eps) ao.max_tries = 1;
            HomSolution sol = predict_and_correct(s.model, cm, popts(), ao);
            Json j;
            j["predictor"] = to_json(sol.predictor);
            Json c;
            c["alpha"] = to_json(Vec(bvp_alpha(sol.bvp, sol.newton.z)));
            c["s0"] = to_json(bvp_saddle(sol.bvp, sol.newton.z));
            Json orb = Json::array();
            for (const Vec& x : bvp_orbit(sol.bvp, sol.newton.z)) orb.push_back(to_json(x));
            c["orbit"] = orb;
            c["iterations"] = sol.newton.iterations;
            c["residual"] = sol.newton.residual;
            c["halvings"] = sol.halvings;
            c["delta"] = relative_orbit_error(sol.predictor.orbit, bvp_orbit(sol.bvp, sol.newton.z));
            c["tangent_alpha"] = {sol.tangent[sol.bvp.ialpha()], sol.tangent[sol.bvp.ialpha() + 1]};
            j["corrected"] = c;
            emit(out, dump(j));
        } else if (*lps) {
            if (lp_order < 1) throw std::invalid_argument("--order must be at least 1");
            LpSeries ls = lp_solve_quadratic(lp_order);
            std::ostringstream csv;
            write_lpseries_csv(csv, ls);
            emit(out, csv.str());
            if (!out.empty() && out != "-") {
                std::string js = out;
                auto dot = js.rfind('.');
                if (dot != std::string::npos && js.find('/', dot) == std::string::npos) js = js.substr(0, dot);
                emit(js + ".json", dump(to_json(ls)));
            }
        } else if (*conv) {
            Setup s = load(ma);
            CmExpansion cm = cm_for(s, parse_variant(variant));
            std::vector<StudyCell> cells;
            std::stringstream ms(methods), os;
            std::vector<int> ord;
            {
                std::stringstream o2(orders);
                std::string t;
                while (std::getline(o2, t, ',')) ord.push_back(std::stoi(t));
            }
            std::string m;
            while (std::getline(ms, m, ',')) {
                for (int o : ord) {
                    PredictorOptions po;
                    po.order = o;
                    if (m == "rp") po.method = Method::RP;
                    else if (m == "lp") po.method = Method::LP;
                    else if (m == "rp-l2") {
                        po.method = Method::RP;
                        po.phase = Phase::L2;
                    } else if (m == "lp-alt") {
                        po.method = Method::LP;
                        po.phase = Phase::AltGamma;
                    } else if (m == "lp-xi") {
                        po.method = Method::LP;
                        po.xi_identity = true;
                    } else throw std::invalid_argument("unknown method '" + m + "'");
                    cells.push_back({m, po});
                }
            }
            StudyOptions so;
            so.mesh = Mesh::uniform(ntst, ncol);
            so.k_ratio = k_ratio;
            so.threads = threads;
            auto recs = convergence_study(s.model, cm, cells, parse_range(amplitudes), so);
            std::ostringstream csv;
            csv << "# delta over fine-mesh orbit values of all state components; parameters excluded\n";
            write_convergence_csv(csv, recs);
            emit(out, csv.str());
        } else if (*cmp) {
            Setup s = load(ma);
            MultilinearOracle o(s.model, s.pt.x0, s.pt.alpha0);
            BTData bt = analyze_bt(o);
            std::ostringstream csv;
            csv << "eps,variant,order,predictor,alpha1,alpha2\n";
            for (Variant v : {Variant::Orbital, Variant::Smooth, Variant::Hyper}) {
                CmExpansion cm = compute_cm(o, bt, v);
                for (double e : parse_range(eps_range))
                    for (int ord : {2, 3})
                        for (bool wk : {false, true}) {
                            PredictorOptions po;
                            po.order = ord;
                            po.wrong_k = wk;
                            Vec2 al = lift_parameters(cm, po, e);
                            csv << num17(e) << ',' << variant_name(v) << ',' << ord << ',' << (wk ? "wrong_k" : "full")
                                << ',' << num17(al[0]) << ',' << num17(al[1]) << '\n';
                        }
            }
            emit(out, csv.str());
        }
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
