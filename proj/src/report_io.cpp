#include "mdebif/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

namespace mdebif {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void dump(const Json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            out += pad;
            out += Json(it.key()).dump();
            out += ": ";
            dump(it.value(), out, indent, depth + 1);
            if (i + 1 < j.size()) out += ',';
            out += '\n';
        }
        out += close_pad + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out += pad;
            dump(j[i], out, indent, depth + 1);
            if (i + 1 < j.size()) out += ',';
            out += '\n';
        }
        out += close_pad + "]";
        return;
    }
    case Json::value_t::number_float:
        out += fmt17(j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

void require_keys(const Json& j, const std::set<std::string>& allowed,
                  const std::set<std::string>& required, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError("unknown key '" + it.key() + "' in " + where);
    for (const auto& k : required)
        if (!j.contains(k)) throw ValidationError("missing key '" + k + "' in " + where);
}

double as_number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw ValidationError(where + " must be a number");
    return j.get<double>();
}

Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump(j, out, indent, 0);
    out += '\n';
    return out;
}

ProblemDef problem_from_json(const Json& j) {
    require_keys(j, {"n", "T", "f", "g", "h", "lambda", "omega", "settings", "description"},
                 {"n", "T", "f", "g", "h", "lambda", "omega"}, "problem");
    if (!j["n"].is_number_integer()) throw ValidationError("'n' must be an integer");
    const int n = j["n"].get<int>();
    const double T = as_number(j["T"], "'T'");

    auto parse_components = [n](const Json& arr, const std::string& name) {
        if (!arr.is_array())
            throw ValidationError("'" + name + "' must be an array of expression strings");
        std::vector<ExprPtr> out;
        for (const auto& e : arr) {
            if (!e.is_string())
                throw ValidationError("'" + name + "' entries must be expression strings");
            out.push_back(parse(e.get<std::string>(), n));
        }
        return out;
    };

    const Json& hj = j["h"];
    require_keys(hj, {"density", "jumps", "T"}, {"density", "T"}, "integrator");
    if (!hj["density"].is_string())
        throw ValidationError("integrator density must be an expression string");
    std::vector<Jump> jumps;
    if (hj.contains("jumps")) {
        if (!hj["jumps"].is_array()) throw ValidationError("integrator jumps must be an array");
        for (const auto& jj : hj["jumps"]) {
            require_keys(jj, {"t", "size"}, {"t", "size"}, "jump");
            jumps.push_back({as_number(jj["t"], "jump time"), as_number(jj["size"], "jump size")});
        }
    }
    Integrator h(parse(hj["density"].get<std::string>(), 0), std::move(jumps),
                 as_number(hj["T"], "integrator period"));

    const Json& lj = j["lambda"];
    if (!lj.is_array() || lj.size() != 2)
        throw ValidationError("'lambda' must be an interval [min, max]");
    std::array<double, 2> lambda_interval{as_number(lj[0], "lambda min"),
                                          as_number(lj[1], "lambda max")};

    const Json& oj = j["omega"];
    if (!oj.is_array()) throw ValidationError("'omega' must be an array of bound pairs");
    std::vector<std::array<double, 2>> omega;
    for (const auto& b : oj) {
        if (!b.is_array() || b.size() != 2)
            throw ValidationError("'omega' entries must be pairs [lo, hi]");
        omega.push_back({as_number(b[0], "omega bound"), as_number(b[1], "omega bound")});
    }

    std::string description;
    if (j.contains("description")) {
        if (!j["description"].is_string()) throw ValidationError("'description' must be a string");
        description = j["description"].get<std::string>();
    }

    return ProblemDef(n, T, parse_components(j["f"], "f"), parse_components(j["g"], "g"),
                      std::move(h), lambda_interval, std::move(omega), std::move(description));
}

RunSettings settings_from_json(const Json& j) {
    RunSettings s;
    if (!j.contains("settings")) return s;
    const Json& sj = j["settings"];
    require_keys(sj, {"rk_tol", "bisect_tol", "max_step", "domain_check", "shoot_tol"}, {},
                 "settings");
    if (sj.contains("rk_tol")) s.solve.rk_tol = as_number(sj["rk_tol"], "rk_tol");
    if (sj.contains("max_step")) s.solve.max_step = as_number(sj["max_step"], "max_step");
    if (sj.contains("domain_check")) {
        if (!sj["domain_check"].is_boolean())
            throw ValidationError("domain_check must be a boolean");
        s.solve.domain_check = sj["domain_check"].get<bool>();
    }
    if (sj.contains("bisect_tol")) s.bisect_tol = as_number(sj["bisect_tol"], "bisect_tol");
    if (sj.contains("shoot_tol")) s.shoot_tol = as_number(sj["shoot_tol"], "shoot_tol");
    if (s.solve.rk_tol <= 0.0 || s.bisect_tol <= 0.0 || s.shoot_tol <= 0.0)
        throw ValidationError("tolerances must be positive");
    return s;
}

Json problem_to_json(const ProblemDef& p) {
    Json j;
    j["n"] = p.n;
    j["T"] = p.T;
    Json f = Json::array(), g = Json::array();
    for (const auto& e : p.f) f.push_back(to_string(e));
    for (const auto& e : p.g) g.push_back(to_string(e));
    j["f"] = f;
    j["g"] = g;
    Json h;
    h["density"] = to_string(p.h.density());
    Json jumps = Json::array();
    for (const auto& jm : p.h.jumps()) jumps.push_back(Json{{"t", jm.time}, {"size", jm.size}});
    h["jumps"] = jumps;
    h["T"] = p.h.period();
    j["h"] = h;
    j["lambda"] = Json::array({p.lambda_interval[0], p.lambda_interval[1]});
    Json omega = Json::array();
    for (const auto& b : p.omega_box) omega.push_back(Json::array({b[0], b[1]}));
    j["omega"] = omega;
    if (!p.description.empty()) j["description"] = p.description;
    return j;
}

Json monodromy_to_json(const MonodromyReport& rep) {
    Json j;
    j["lambda"] = rep.lambda;
    j["M"] = matrix_to_json(rep.M);
    j["det_I_minus_M"] = rep.det_I_minus_M;
    Json evs = Json::array();
    for (const auto& ev : rep.eigenvalues)
        evs.push_back(Json{{"re", ev.real()}, {"im", ev.imag()}});
    j["eigenvalues"] = evs;
    Json factors = Json::array();
    for (const auto& [tau, m] : rep.jump_factors)
        factors.push_back(Json{{"t", tau}, {"factor", matrix_to_json(m)}});
    j["jump_factors"] = factors;
    j["degeneracy_threshold"] = rep.degeneracy_threshold();
    return j;
}

Json shoot_to_json(const ShootResult& res) {
    Json j;
    Json x0 = Json::array();
    for (int i = 0; i < res.x0_star.size(); ++i) x0.push_back(res.x0_star[i]);
    j["x0_star"] = x0;
    j["residual"] = res.residual;
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    j["monodromy"] = monodromy_to_json(res.monodromy);
    return j;
}

Json scan_to_json(const ScanReport& rep) {
    Json j;
    Json grid = Json::array();
    for (const auto& pt : rep.grid) {
        Json g;
        g["lambda"] = pt.lambda;
        g["ok"] = pt.ok;
        if (pt.ok) {
            g["det_I_minus_M"] = pt.det_I_minus_M;
            g["index_sign"] = pt.index_sign;
        } else {
            g["error"] = pt.error;
        }
        grid.push_back(g);
    }
    j["grid"] = grid;
    Json intervals = Json::array();
    for (const auto& iv : rep.sign_change_intervals)
        intervals.push_back(Json::array({iv[0], iv[1]}));
    j["sign_change_intervals"] = intervals;
    Json cands = Json::array();
    for (const auto& c : rep.candidates) {
        Json cj;
        cj["lambda0"] = c.lambda0;
        cj["det_at_root"] = c.det_at_root;
        cj["bisect_iterations"] = c.bisect_iterations;
        cj["det_history"] = c.det_history;
        cands.push_back(cj);
    }
    j["candidates"] = cands;
    Json certs = Json::array();
    for (const auto& c : rep.certificates) {
        Json cj;
        cj["kind"] = c.kind == CertifiedRegion::Kind::NonBifurcation
                         ? "non_bifurcation"
                         : "candidate_necessary_condition_met";
        cj["lambda0"] = c.lambda0;
        cj["margin"] = c.margin;
        cj["threshold"] = c.threshold;
        cj["note"] = c.note;
        certs.push_back(cj);
    }
    j["certificates"] = certs;
    j["total_degeneracy"] = rep.total_degeneracy;
    j["unverified_hypotheses"] = rep.unverified_hypotheses;
    return j;
}

Json criterion_to_json(const CriterionVerdict& v) {
    Json j;
    j["Qminus"] = v.Qminus;
    j["Qplus"] = v.Qplus;
    j["lhs_factor"] = v.lhs_factor;
    j["product"] = v.product;
    j["two_over_pi"] = v.two_over_pi;
    j["positivity_ok"] = v.positivity_ok;
    j["lhs_ok"] = v.lhs_ok;
    j["bound_ok"] = v.bound_ok;
    j["verdict"] = v.unique_trivial ? "unique_trivial" : "inconclusive";
    return j;
}

Json fredholm_to_json(const FredholmResult& res) {
    Json j;
    j["classification"] = res.invertible ? "invertible" : "degenerate";
    j["kernel_dim"] = res.kernel_dim;
    if (!res.invertible) j["kernel_basis"] = matrix_to_json(res.kernel_basis);
    j["monodromy"] = monodromy_to_json(res.report);
    return j;
}

void write_path_csv(std::ostream& os, const RegulatedPath& path, int samples) {
    const int n = path.dimension();
    os << "t";
    for (int i = 1; i <= n; ++i) os << ",x" << i;
    os << ",is_jump_left,is_jump_right\n";

    std::vector<double> ts;
    for (int i = 0; i < samples; ++i)
        ts.push_back(path.t_begin() +
                     (path.t_end() - path.t_begin()) * i / (samples - 1));

    auto write_row = [&os, n](double t, const Vec& x, int left, int right) {
        os << fmt17(t);
        for (int i = 0; i < n; ++i) os << ',' << fmt17(x[i]);
        os << ',' << left << ',' << right << '\n';
    };

    std::size_t jnext = 0;
    const auto& jumps = path.jumps();
    for (double t : ts) {
        bool at_jump = false;
        while (jnext < jumps.size() && jumps[jnext].time <= t) {
            write_row(jumps[jnext].time, jumps[jnext].left, 1, 0);
            write_row(jumps[jnext].time, jumps[jnext].right, 0, 1);
            at_jump = jumps[jnext].time == t;
            ++jnext;
        }
        if (!at_jump) write_row(t, path(t), 0, 0);
    }
    while (jnext < jumps.size()) {
        write_row(jumps[jnext].time, jumps[jnext].left, 1, 0);
        write_row(jumps[jnext].time, jumps[jnext].right, 0, 1);
        ++jnext;
    }
}

void write_scan_csv(std::ostream& os, const ScanReport& rep) {
    os << "lambda,det_I_minus_M,index_sign\n";
    for (const auto& pt : rep.grid) {
        if (!pt.ok) continue;
        os << fmt17(pt.lambda) << ',' << fmt17(pt.det_I_minus_M) << ',' << pt.index_sign
           << '\n';
    }
}

} // namespace mdebif
