#include "dioph/report.hpp"
#include "dioph/rat.hpp"
#include "dioph/rng.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>

using namespace dioph;

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitBudget = 3;

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t comma = s.find(',', start);
        std::string piece = comma == std::string::npos ? s.substr(start) : s.substr(start, comma - start);
        if (!piece.empty()) out.push_back(std::stod(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<Poly> parse_curve(const std::string& s) {
    std::vector<Poly> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t comma = s.find(',', start);
        std::string piece = comma == std::string::npos ? s.substr(start) : s.substr(start, comma - start);
        if (!piece.empty()) out.push_back(Poly::parse(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(out_path);
        f << text << "\n";
    }
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "mantissa_bits") cfg.mantissa_bits = std::stol(val);
        else if (key == "threads") cfg.threads = std::stoi(val);
        else if (key == "cf_depth") cfg.cf_depth = std::stoi(val);
        else if (key == "format") cfg.format = val;
        else throw std::invalid_argument("unknown config key: " + key);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale Diophantine exponent laboratory"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, out_path;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--seed", cfg.seed, "sampling seed");
    app.add_option("--mantissa-bits", cfg.mantissa_bits, "default mantissa width");
    app.add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    app.add_option("--format", cfg.format, "json or csv");
    app.add_option("--out", out_path, "write the report to a file");

    auto* est_cmd = app.add_subcommand("estimate", "exponent estimate at a finite height budget");
    std::string est_mode = "omega", est_point;
    std::string est_qmax = "4096";
    int cf_depth_opt = -1;
    est_cmd->add_option("--mode", est_mode, "omega | omegax | sigma")->required();
    est_cmd->add_option("--point", est_point, "comma-separated coordinate specs")->required();
    est_cmd->add_option("--qmax", est_qmax, "height budget (integer, may be large)");
    est_cmd->add_option("--depth", cf_depth_opt, "depth for tau: coordinates");

    auto* con_cmd = app.add_subcommand("construct", "number with a prescribed approximation exponent");
    double con_tau = 2.0;
    int con_depth = 8;
    con_cmd->add_option("--tau", con_tau, "target exponent >= 1")->required();
    con_cmd->add_option("--depth", con_depth, "expansion depth >= 5");

    auto* flow_cmd = app.add_subcommand("flow", "flowed lattice of a point");
    std::string flow_point, flow_t, flow_eps = "1,0.5,0.25,0.125";
    flow_cmd->add_option("--point", flow_point)->required();
    flow_cmd->add_option("--t", flow_t, "comma-separated flow components")->required();
    flow_cmd->add_option("--eps-ladder", flow_eps, "membership thresholds");

    auto* gam_cmd = app.add_subcommand("gamma", "decay rates along admissible integer flows");
    std::string gam_point;
    long gam_tmax = 40;
    std::string gam_qmax = "10000";
    gam_cmd->add_option("--point", gam_point)->required();
    gam_cmd->add_option("--tmax", gam_tmax);
    gam_cmd->add_option("--qmax", gam_qmax, "budget of the direct cross-check");
    gam_cmd->add_option("--depth", cf_depth_opt, "depth for tau: coordinates");

    auto* hyp_cmd = app.add_subcommand("hyperplane", "closed-form exponent prediction");
    std::string hyp_coeffs, hyp_sub;
    bool hyp_verify = false;
    int hyp_samples = 20;
    std::string hyp_qmax = "100000";
    double hyp_lo = -1, hyp_hi = -1;
    hyp_cmd->add_option("--coeffs", hyp_coeffs)->required();
    hyp_cmd->add_flag("--verify", hyp_verify, "sample points and estimate each");
    hyp_cmd->add_option("--samples", hyp_samples);
    hyp_cmd->add_option("--qmax", hyp_qmax);
    hyp_cmd->add_option("--submanifold", hyp_sub, "polynomial components of a map into the parameters");
    hyp_cmd->add_option("--band-lo", hyp_lo, "acceptance band low (default prediction - 0.5)");
    hyp_cmd->add_option("--band-hi", hyp_hi, "acceptance band high (default prediction + 0.5)");
    hyp_cmd->add_option("--depth", cf_depth_opt, "depth for tau: coordinates");

    auto* ext_cmd = app.add_subcommand("exterior-check", "exhaustive stacked-norm floor check");
    int ext_n = 3, ext_j = 2;
    long ext_bound = 2;
    int ext_trials = 100;
    ext_cmd->add_option("--n", ext_n)->required();
    ext_cmd->add_option("--j", ext_j)->required();
    ext_cmd->add_option("--bound", ext_bound)->required();
    ext_cmd->add_option("--trials", ext_trials, "random coefficient vectors to test");

    auto* nd_cmd = app.add_subcommand("nondiv", "measure probes over a polynomial curve");
    std::string nd_curve, nd_eps = "0.25,0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625";
    std::string nd_sublevel;
    long nd_tmax = 8, nd_samples = 2000;
    bool nd_bc = false;
    int nd_k = 1;
    double nd_rate = 0.2;
    nd_cmd->add_option("--curve", nd_curve, "polynomial components, e.g. x,x^2");
    nd_cmd->add_option("--tmax", nd_tmax, "largest flow total");
    nd_cmd->add_option("--eps-ladder", nd_eps);
    nd_cmd->add_option("--samples", nd_samples);
    nd_cmd->add_option("--sublevel", nd_sublevel, "probe a single polynomial's sublevel measure");
    nd_cmd->add_flag("--bc", nd_bc, "tail-sum probe instead of escape fractions");
    nd_cmd->add_option("--k", nd_k, "stratum index for the tail-sum probe");
    nd_cmd->add_option("--rate", nd_rate, "decay rate for the tail-sum probe");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) apply_config_file(config_path, cfg);
        if (cfg.mantissa_bits < 64) throw std::invalid_argument("mantissa_bits must be >= 64");
        Real::set_default_bits(cfg.mantissa_bits);
        if (cfg.format != "json" && cfg.format != "csv")
            throw std::invalid_argument("format must be json or csv");
        int depth = cf_depth_opt > 0 ? cf_depth_opt : cfg.cf_depth;

        if (*est_cmd) {
            Point pt = parse_point(est_point, depth);
            mpz_class qmax(est_qmax);
            EstimateOptions opt;
            opt.threads = cfg.threads;
            ExponentEstimate est;
            if (est_mode == "omega") est = estimate_omega(pt, qmax, opt);
            else if (est_mode == "omegax") est = estimate_omega_times(pt, qmax, opt);
            else if (est_mode == "sigma") est = estimate_sigma(pt, qmax, opt);
            else throw std::invalid_argument("mode must be omega, omegax or sigma");
            emit(estimate_json(est, cfg).dump(2), out_path);
        } else if (*con_cmd) {
            auto num = build_prescribed(con_tau, con_depth);
            emit(prescribed_json(num, cfg).dump(2), out_path);
        } else if (*flow_cmd) {
            Point pt = parse_point(flow_point, depth);
            FlowVec f = make_flow_doubles(parse_doubles(flow_t));
            if (f.t.size() != pt.size())
                throw std::invalid_argument("flow dimension must match the point dimension");
            Json j = config_json(cfg, "flowed_lattice");
            bool exact = point_all_exact(pt);
            j["exact_mode"] = exact;
            Shortest s;
            if (exact) {
                std::vector<mpq_class> yq;
                for (const auto& c : pt) yq.push_back(*c.exact);
                QBasis b = u_of_y(yq);
                j["det"] = rat_str(det_exact(b));
                RBasis fb = apply_flow(b, f);
                j["flow_logdet"] = num_json(log_abs_det(fb).to_double());
                s = shortest_vector(fb);
            } else {
                RBasis b = u_of_y_real(point_values(pt));
                RBasis fb = apply_flow(b, f);
                j["flow_logdet"] = num_json(log_abs_det(fb).to_double());
                s = shortest_vector(fb);
            }
            Json sj;
            Json coeffs = Json::array();
            for (const auto& c : s.coeffs) coeffs.push_back(c.get_str());
            sj["coeffs"] = coeffs;
            sj["length_log"] = num_json(s.length.ln_double());
            j["shortest"] = sj;
            Json ke = Json::array();
            for (double eps : parse_doubles(flow_eps)) {
                Json e;
                e["eps"] = num_json(eps);
                e["inside"] = !(s.length.ln_double() < std::log(eps));
                ke.push_back(e);
            }
            j["K_eps"] = ke;
            emit(j.dump(2), out_path);
        } else if (*gam_cmd) {
            Point pt = parse_point(gam_point, depth);
            GammaOptions gopt;
            gopt.threads = cfg.threads;
            auto table = estimate_gamma(point_values(pt), gam_tmax, gopt);
            double assembled = omega_times_from_gamma(table);
            Json j = gamma_json(table, assembled, cfg);
            EstimateOptions opt;
            opt.threads = cfg.threads;
            auto direct = estimate_omega_times(pt, mpz_class(gam_qmax), opt);
            j["direct_estimate"] = num_json(direct.window_estimate);
            j["direct_qmax"] = gam_qmax;
            bool both_inf = std::isinf(assembled) && std::isinf(direct.window_estimate);
            j["agreement"] = both_inf ? Json(0.0)
                                      : num_json(std::fabs(assembled - direct.window_estimate));
            emit(j.dump(2), out_path);
        } else if (*hyp_cmd) {
            auto spec = make_hyperplane(parse_point(hyp_coeffs, depth));
            auto pred = predict(spec);
            Json j = config_json(cfg, "hyperplane_prediction");
            j["n"] = spec.n;
            j["s"] = spec.s;
            j["sigma"] = num_json(spec.sigma);
            j["sigma_known"] = spec.sigma_known;
            j["omega_times"] = num_json(pred.omega_times);
            j["omega"] = num_json(pred.omega);
            j["degenerate_equality"] = pred.degenerate_equality;
            if (!hyp_verify) {
                emit(j.dump(2), out_path);
            } else {
                double lo = hyp_lo >= 0 ? hyp_lo : pred.omega_times - 0.5;
                double hi = hyp_hi >= 0 ? hyp_hi : pred.omega_times + 0.5;
                std::vector<Poly> sub;
                if (!hyp_sub.empty()) sub = parse_curve(hyp_sub);
                EstimateOptions opt;
                opt.threads = cfg.threads;
                auto rep = verify_by_sampling(spec, hyp_samples, mpz_class(hyp_qmax), cfg.seed, lo,
                                              hi, sub, opt);
                if (cfg.format == "csv") {
                    emit(sample_report_csv(rep), out_path);
                } else {
                    j["verification"] = sample_report_json(rep, cfg);
                    emit(j.dump(2), out_path);
                }
            }
        } else if (*ext_cmd) {
            Json j = config_json(cfg, "stacked_norm_floor");
            j["n"] = ext_n;
            j["j"] = ext_j;
            j["bound"] = static_cast<long long>(ext_bound);
            Rng rng(cfg.seed);
            long violations = 0;
            Json vlist = Json::array();
            for (int trial = 0; trial < ext_trials; ++trial) {
                Rng r = rng.fork(static_cast<uint64_t>(trial));
                std::vector<mpq_class> a;
                for (int i = 0; i < ext_n; ++i) {
                    a.emplace_back(r.range(-50, 50), r.range(1, 12));
                    a.back().canonicalize();
                }
                auto v = rank_bound_violations(ext_n, ext_j, ext_bound, a);
                violations += static_cast<long>(v.size());
                for (const auto& mv : v) vlist.push_back(multivector_json(mv));
            }
            j["trials"] = ext_trials;
            j["violations"] = violations;
            j["violating_multivectors"] = vlist;
            emit(j.dump(2), out_path);
            std::cerr << "violations: " << violations << "\n";
        } else if (*nd_cmd) {
            if (!nd_sublevel.empty()) {
                auto rep = sublevel_fraction(Poly::parse(nd_sublevel), 0.0, 1.0,
                                             parse_doubles(nd_eps), std::max(nd_samples, 10000L),
                                             cfg.seed);
                emit(sublevel_json(rep, cfg).dump(2), out_path);
            } else if (nd_bc) {
                auto curve = parse_curve(nd_curve);
                auto rep = borel_cantelli_probe(curve, nd_k, nd_rate, nd_tmax, nd_samples, cfg.seed);
                emit(borel_cantelli_json(rep, cfg).dump(2), out_path);
            } else {
                auto curve = parse_curve(nd_curve);
                int n = static_cast<int>(curve.size());
                std::vector<std::vector<double>> flows;
                for (long total = 1; total <= nd_tmax; ++total)
                    flows.push_back(std::vector<double>(static_cast<size_t>(n),
                                                        static_cast<double>(total) / n));
                auto rep = escape_table(curve, flows, parse_doubles(nd_eps), nd_samples, cfg.seed,
                                        cfg.threads);
                if (cfg.format == "csv") emit(escape_csv(rep), out_path);
                else emit(escape_json(rep, cfg).dump(2), out_path);
            }
        }
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return 0;
}
