#include "dioph/report.hpp"
#include "dioph/rat.hpp"

#include <cmath>
#include <cstdio>

namespace dioph {

std::string num_str(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Json num_json(double v) {
    if (std::isinf(v) || std::isnan(v)) return num_str(v);
    return Json::parse(num_str(v)); // canonical shortened number
}

Json config_json(const RunConfig& cfg, const std::string& quantity) {
    Json j;
    j["tool"] = "dioph";
    j["version"] = kToolVersion;
    j["quantity"] = quantity;
    j["seed"] = cfg.seed;
    j["mantissa_bits"] = cfg.mantissa_bits;
    j["threads"] = cfg.threads;
    return j;
}

Json multivector_json(const MultiVector& w) {
    Json j;
    j["degree"] = w.degree;
    Json terms = Json::array();
    for (const auto& [mask, c] : w.terms) {
        Json t;
        Json idx = Json::array();
        for (int i = 0; i < 32; ++i)
            if (mask & (1u << i)) idx.push_back(i + 1);
        t["indices"] = idx;
        t["coeff"] = c.get_str();
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

Json witness_json(const Witness& w) {
    Json j;
    Json q = Json::array();
    for (const auto& v : w.q) q.push_back(v.get_str());
    Json p = Json::array();
    for (const auto& v : w.p) p.push_back(v.get_str());
    j["q"] = q;
    j["p"] = p;
    j["height"] = w.height.get_str();
    j["error_log"] = w.error.is_zero() ? Json("-inf") : num_json(w.error.ln_double());
    j["quality"] = num_json(w.quality);
    j["window"] = w.window;
    j["seeded"] = w.seeded;
    return j;
}

Json estimate_json(const ExponentEstimate& est, const RunConfig& cfg) {
    Json j = config_json(cfg, std::string("exponent_estimate/") + mode_name(est.mode));
    j["mode"] = mode_name(est.mode);
    j["q_max"] = est.q_max.get_str();
    j["scanned_to"] = est.scanned_to.get_str();
    j["raw_max"] = num_json(est.raw_max);
    j["window_estimate"] = num_json(est.window_estimate);
    j["exact_hit"] = est.exact_hit;
    Json ws = Json::array();
    for (const auto& w : est.witnesses) ws.push_back(witness_json(w));
    j["witnesses"] = ws;
    return j;
}

Json prescribed_json(const PrescribedNumber& num, const RunConfig& cfg) {
    Json j = config_json(cfg, "prescribed_exponent_number");
    j["tau"] = num_json(num.target_tau);
    j["depth"] = num.depth;
    Json qs = Json::array();
    for (const auto& a : num.cf.quotients) qs.push_back(a.get_str());
    j["quotients"] = qs;
    Json cs = Json::array();
    for (int k = 0; k <= num.depth; ++k) {
        const auto& c = num.cf.convergents[static_cast<size_t>(k)];
        Json e;
        e["p"] = c.p.get_str();
        e["q"] = c.q.get_str();
        mpq_class err = num.convergent_error(k);
        e["error_log"] = err == 0 ? Json("-inf") : num_json(Real::of(err).log().to_double());
        e["quality"] = num_json(num.convergent_quality(k));
        cs.push_back(e);
    }
    j["convergents"] = cs;
    j["measured_sigma"] = num_json(num.measured_sigma());
    j["value_decimal"] = num.value.str(40);
    j["mantissa_bits"] = num.value.bits();
    return j;
}

Json gamma_json(const GammaTable& g, double assembled, const RunConfig& cfg) {
    Json j = config_json(cfg, "flow_decay_rates");
    j["n"] = g.n;
    j["T_max"] = g.T_max;
    j["total_floor"] = g.total_floor;
    Json es = Json::array();
    for (const auto& e : g.entries) {
        Json k;
        k["k"] = e.k;
        k["gamma"] = num_json(e.gamma);
        k["boundary"] = e.boundary;
        k["certified_v"] = num_json(e.certified_v);
        Json t = Json::array();
        for (long v : e.t) t.push_back(v);
        k["witness_t"] = t;
        if (e.vec) {
            Json q = Json::array();
            for (const auto& v : e.vec->q) q.push_back(v.get_str());
            k["witness_q"] = q;
            k["witness_p"] = e.vec->p.get_str();
            k["witness_norm_log"] = e.vec->norm.is_zero() ? Json("-inf")
                                                          : num_json(e.vec->norm.ln_double());
        }
        es.push_back(k);
    }
    j["rates"] = es;
    j["assembled_exponent"] = num_json(assembled);
    return j;
}

Json sample_report_json(const SampleReport& rep, const RunConfig& cfg) {
    Json j = config_json(cfg, "hyperplane_verification");
    j["prediction"] = num_json(rep.prediction);
    j["band_lo"] = num_json(rep.lo);
    j["band_hi"] = num_json(rep.hi);
    j["all_within"] = rep.all_within;
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
        Json e;
        e["sample_index"] = r.index;
        Json xs = Json::array();
        for (double x : r.x) xs.push_back(num_json(x));
        e["x"] = xs;
        e["estimate"] = num_json(r.estimate);
        e["exact_hit"] = r.exact_hit;
        e["within_tolerance"] = r.within;
        rows.push_back(e);
    }
    j["samples"] = rows;
    return j;
}

std::string sample_report_csv(const SampleReport& rep) {
    std::string out = "sample_index,point,omega_times_estimate,prediction,within_tolerance\n";
    for (const auto& r : rep.rows) {
        out += std::to_string(r.index) + ",\"";
        for (size_t i = 0; i < r.x.size(); ++i) {
            if (i) out += ";";
            out += num_str(r.x[i]);
        }
        out += "\"," + num_str(r.estimate) + "," + num_str(rep.prediction) + ",";
        out += r.within ? "1" : "0";
        out += "\n";
    }
    return out;
}

Json sublevel_json(const SublevelReport& rep, const RunConfig& cfg) {
    Json j = config_json(cfg, "sublevel_measure");
    j["polynomial"] = rep.f.str();
    j["box"] = Json::array({num_json(rep.lo), num_json(rep.hi)});
    Json rows = Json::array();
    for (size_t e = 0; e < rep.eps.size(); ++e) {
        Json r;
        r["epsilon"] = num_json(rep.eps[e]);
        r["fraction"] = num_json(rep.fractions[e].fraction);
        r["ci_halfwidth"] = num_json(rep.fractions[e].ci_halfwidth);
        r["samples"] = rep.fractions[e].samples;
        rows.push_back(r);
    }
    j["ladder"] = rows;
    j["fitted_slope"] = num_json(rep.fitted_slope);
    j["fit_points"] = rep.fit_points;
    return j;
}

std::string escape_csv(const EscapeReport& rep) {
    std::string out = "t_total,epsilon,fraction,ci_halfwidth,samples\n";
    for (size_t fi = 0; fi < rep.flows.size(); ++fi) {
        double total = 0;
        for (double v : rep.flows[fi]) total += v;
        for (size_t e = 0; e < rep.eps.size(); ++e) {
            const auto& c = rep.fractions[fi][e];
            out += num_str(total) + "," + num_str(rep.eps[e]) + "," + num_str(c.fraction) + "," +
                   num_str(c.ci_halfwidth) + "," + std::to_string(c.samples) + "\n";
        }
    }
    return out;
}

Json escape_json(const EscapeReport& rep, const RunConfig& cfg) {
    Json j = config_json(cfg, "escape_fractions");
    Json flows = Json::array();
    for (const auto& f : rep.flows) {
        Json t = Json::array();
        for (double v : f) t.push_back(num_json(v));
        flows.push_back(t);
    }
    j["flows"] = flows;
    Json eps = Json::array();
    for (double e : rep.eps) eps.push_back(num_json(e));
    j["eps_ladder"] = eps;
    Json cells = Json::array();
    for (size_t fi = 0; fi < rep.flows.size(); ++fi) {
        Json row = Json::array();
        for (size_t e = 0; e < rep.eps.size(); ++e) {
            Json c;
            c["fraction"] = num_json(rep.fractions[fi][e].fraction);
            c["ci_halfwidth"] = num_json(rep.fractions[fi][e].ci_halfwidth);
            row.push_back(c);
        }
        cells.push_back(row);
    }
    j["fractions"] = cells;
    j["fitted_alpha"] = num_json(rep.fitted_alpha);
    return j;
}

Json borel_cantelli_json(const BorelCantelliReport& rep, const RunConfig& cfg) {
    Json j = config_json(cfg, "tail_sum_probe");
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
        Json e;
        e["total"] = r.total;
        e["admissible_flows"] = r.admissible;
        e["event_measure"] = num_json(r.event_measure);
        e["increment"] = num_json(r.increment);
        e["partial_sum"] = num_json(r.partial_sum);
        rows.push_back(e);
    }
    j["rows"] = rows;
    j["fitted_ratio"] = num_json(rep.fitted_ratio);
    return j;
}

} // namespace dioph
