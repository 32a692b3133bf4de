#include "fano/report.hpp"

#include "fano/critical.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fano {

Tolerances tolerances_from(const RunConfig& cfg) {
    if (!(cfg.tol > 0)) throw Error("--tol must be positive");
    Tolerances t;
    t.equal = cfg.tol;
    t.strict = std::min(1e-9, cfg.tol / 1000.0);
    return t;
}

ToricFanoModel model_from_config(const RunConfig& cfg) {
    if (!cfg.fan_path.empty()) return make_model(load_fan(cfg.fan_path));
    if (cfg.family == "xn") {
        if (cfg.n < 1) throw Error("--n must be at least 1 for family xn");
        return family_xn(cfg.n);
    }
    if (cfg.family == "xnp") {
        if (cfg.n < 3) throw Error("--n must be at least 3 for family xnp");
        return family_xn_prime(cfg.n);
    }
    throw Error("unknown family '" + cfg.family + "' (expected xn or xnp)");
}

QPoint q_from_config(const RunConfig& cfg, const ToricFanoModel& model) {
    if (!(cfg.q1 > 0) || !(cfg.q2 > 0)) throw Error("q1 and q2 must be positive reals");
    const std::size_t r = model.rank();
    if (r < 2 && cfg.q2 != 1.0) throw Error("the model has Picard rank 1; --q2 does not apply");
    std::vector<cplx> q(r, 1.0);
    if (r >= 1) q[0] = cfg.q1;
    if (r >= 2) q[1] = cfg.q2;
    return QPoint::from(q);
}

ModelAnalysis analyze_model(const ToricFanoModel& model, const QPoint& q, const Tolerances& tol,
                            std::uint64_t seed, int terms) {
    ModelAnalysis a;
    a.model = model;
    a.q = q;
    const CLaurent f = superpotential(model, q);
    a.conifold = conifold_point(f);
    CriticalOptions opt;
    opt.seed = seed;
    a.search = critical_points_all(f, static_cast<std::size_t>(model.euler_char), opt);
    if (!a.search.complete())
        throw Error("critical point search found " + std::to_string(a.search.points.size()) + " of " +
                    std::to_string(a.search.expected) + " points");
    std::vector<cplx> values;
    for (const auto& p : a.search.points) values.push_back(p.value);
    const double T_con = a.conifold.value.real();

    bool at_one = true;
    for (const auto& v : q.q) at_one = at_one && v == cplx(1.0);
    if (at_one && terms > 0) {
        PeriodSeries ps = quantum_period_toric(model, terms);
        a.period_fit = t_acon_estimate(ps);
    }
    // For toric models the A-model conifold value is T_con; the fit above is a check.
    a.spectrum = make_report(values, model.fano_index, T_con, T_con, &a.conifold, a.search.points,
                             "critical-values", tol);
    if (model.family == FamilyTag::Xn && model.rank() == 2) {
        auto batyrev = eigenvalues_qr(batyrev_matrix_xn(model.family_n, q.q[0], q.q[1]));
        a.batyrev_distance = matching_distance(values, batyrev);
    }
    return a;
}

ojson to_json(cplx z) { return ojson{{"re", z.real()}, {"im", z.imag()}}; }

ojson to_json(const Flag& f) {
    return ojson{{"value", to_string(f.value)}, {"margin", f.margin}, {"detail", f.detail}};
}

ojson to_json(const SpectrumReport& r) {
    ojson eig = ojson::array();
    for (const auto& c : r.eigenvalues)
        eig.push_back(ojson{{"value", to_json(c.value)}, {"multiplicity", c.multiplicity()}, {"spread", c.spread()}});
    ojson flags;
    flags["property_O1"] = to_json(r.flags.property_O1);
    flags["property_O2"] = to_json(r.flags.property_O2);
    flags["conjecture_O"] = to_string(r.flags.conjecture_O());
    flags["condition_star"] = to_json(r.flags.condition_star);
    flags["property_OA"] = to_json(r.flags.property_OA);
    flags["B_analogue_a"] = to_json(r.flags.B_analogue_a);
    flags["B_analogue_b"] = to_json(r.flags.B_analogue_b);
    return ojson{{"source", r.source},
                 {"eigenvalues", eig},
                 {"rho", r.rho},
                 {"rho_prime", r.rho_prime},
                 {"T_con", r.T_con},
                 {"T_Acon", r.T_Acon},
                 {"fano_index", r.fano_index},
                 {"tolerances", ojson{{"equal", r.tol.equal}, {"strict", r.tol.strict}}},
                 {"flags", flags}};
}

ojson to_json(const RunConfig& c) {
    ojson j;
    j["command"] = c.command;
    if (c.fan_path.empty()) {
        j["family"] = c.family;
        j["n"] = c.n;
    } else {
        j["fan"] = c.fan_path;
    }
    j["q1"] = c.q1;
    j["q2"] = c.q2;
    j["terms"] = c.terms;
    j["digits"] = c.digits;
    j["seed"] = c.seed;
    j["tol"] = c.tol;
    if (c.command == "scan") {
        j["q2_lo"] = c.q2_lo;
        j["q2_hi"] = c.q2_hi;
        j["grid"] = c.grid;
    }
    if (c.command == "tropical") {
        j["lambda"] = c.lambda;
        j["T_lo"] = c.T_lo;
        j["T_hi"] = c.T_hi;
        j["grid"] = c.grid;
    }
    if (c.command == "gamma-limit") j["t_schedule"] = c.t_schedule.empty() ? default_t_schedule() : c.t_schedule;
    return j;
}

ojson to_json(const PrincipalLimit& lim) {
    auto ch = [&](double a) { return a < 0 ? ojson(nullptr) : ojson(a); };
    ojson samples = ojson::array();
    for (const auto& s : lim.samples)
        samples.push_back(ojson{{"t", s.t},
                                {"direction", s.direction},
                                {"angle_to_gamma", s.angle_to_gamma},
                                {"angle_to_gamma_ch", ch(s.angle_to_gamma_ch)},
                                {"degree_cap", s.info.degree_cap},
                                {"terms", s.info.terms},
                                {"cancellation_digits", s.info.cancellation_digits}});
    return ojson{{"n", lim.n},
                 {"q1", lim.q1},
                 {"q2", lim.q2},
                 {"digits", lim.digits},
                 {"basis", "p1^i p2^j at index i + (n+1) j"},
                 {"samples", samples},
                 {"direction", lim.direction},
                 {"extrapolation_error", lim.extrapolation_error},
                 {"angle_to_gamma", lim.angle_to_gamma},
                 {"angle_to_gamma_ch", ch(lim.angle_to_gamma_ch)},
                 {"increments", lim.increments},
                 {"converging", lim.converging}};
}

namespace {

ojson header(const RunConfig& cfg) {
    ojson j;
    j["schema"] = kSchema;
    j["config"] = to_json(cfg);
    return j;
}

ojson model_json(const ToricFanoModel& m) {
    return ojson{{"name", m.fan.name},
                 {"dim", m.fan.dim},
                 {"rays", m.fan.rays.size()},
                 {"max_cones", m.fan.max_cones.size()},
                 {"picard_rank", m.rank()},
                 {"euler_characteristic", m.euler_char},
                 {"fano_index", m.fano_index},
                 {"weight_matrix", m.weight_matrix}};
}

bool any_indeterminate(const Flags& f) {
    for (const Flag* x : {&f.property_O1, &f.property_O2, &f.condition_star, &f.property_OA, &f.B_analogue_a,
                          &f.B_analogue_b})
        if (x->value == Tri::Indeterminate) return true;
    return false;
}

int require_xn(const RunConfig& cfg, const char* what) {
    if (!cfg.fan_path.empty() || cfg.family != "xn") throw Error(std::string(what) + " supports --family xn only");
    if (cfg.n < 1) throw Error("--n must be at least 1");
    return cfg.n;
}

}  // namespace

CommandResult cmd_analyze(const RunConfig& cfg) {
    const auto model = model_from_config(cfg);
    const auto a = analyze_model(model, q_from_config(cfg, model), tolerances_from(cfg), cfg.seed, cfg.terms);
    CommandResult r;
    r.report = header(cfg);
    r.report["model"] = model_json(model);
    r.report["critical_points"] = ojson{{"found", a.search.points.size()},
                                        {"expected", a.search.expected},
                                        {"starts_used", a.search.starts_used},
                                        {"conifold", to_json(a.conifold.value)}};
    r.report["spectrum"] = to_json(a.spectrum);
    if (a.period_fit)
        r.report["period_fit"] = ojson{{"T_estimate", a.period_fit->T},
                                       {"log_degree_exponent", a.period_fit->exponent},
                                       {"residual", a.period_fit->residual},
                                       {"points", a.period_fit->points},
                                       {"terms", cfg.terms}};
    if (a.batyrev_distance >= 0) r.report["batyrev_matching_distance"] = a.batyrev_distance;
    if (any_indeterminate(a.spectrum.flags)) {
        r.exit_code = 2;
        r.message = "some flags are indeterminate at the requested tolerance";
    }
    return r;
}

CommandResult cmd_scan(const RunConfig& cfg) {
    const int n = require_xn(cfg, "scan");
    if (cfg.grid < 2) throw Error("--grid must be at least 2");
    const auto scan = scan_ray(n, cfg.q1, log_grid(cfg.q2_lo, cfg.q2_hi, static_cast<std::size_t>(cfg.grid)));
    CommandResult r;
    r.report = header(cfg);
    std::size_t refined = 0, ambiguous = 0, real_min = SIZE_MAX, real_max = 0;
    for (const auto& p : scan.points) {
        refined += p.refined;
        ambiguous += p.ambiguous;
        real_min = std::min(real_min, p.real_count);
        real_max = std::max(real_max, p.real_count);
    }
    r.report["scan"] = ojson{{"n", scan.n},
                             {"q1", scan.q1},
                             {"points", scan.points.size()},
                             {"refined_points", refined},
                             {"ambiguous_points", ambiguous},
                             {"real_values_min", real_min},
                             {"real_values_max", real_max},
                             {"census_ok", scan.census_ok},
                             {"min_separation", scan.min_separation},
                             {"min_separation_q2", scan.min_separation_q2}};
    r.csv = scan_csv(scan);
    return r;
}

CommandResult cmd_tropical(const RunConfig& cfg) {
    const int n = require_xn(cfg, "tropical");
    if (cfg.grid < 3) throw Error("--grid must be at least 3");
    const auto fit =
        tropical_exponents(n, cfg.lambda, log_grid(cfg.T_lo, cfg.T_hi, static_cast<std::size_t>(cfg.grid)));
    auto groups = [](const std::vector<BranchGroup>& g) {
        ojson a = ojson::array();
        for (const auto& x : g) a.push_back(ojson{{"slope", x.slope}, {"count", x.count}});
        return a;
    };
    CommandResult r;
    r.report = header(cfg);
    r.report["tropical"] = ojson{{"n", fit.n},
                                 {"lambda", fit.lambda},
                                 {"slopes", fit.slopes},
                                 {"residuals", fit.residuals},
                                 {"groups", groups(fit.groups)},
                                 {"predicted", groups(fit.predicted)},
                                 {"worst_relative_error", fit.worst_relative_error},
                                 {"matches_2_percent", fit.matches(0.02)}};
    return r;
}

CommandResult cmd_period(const RunConfig& cfg) {
    const auto model = model_from_config(cfg);
    if (cfg.terms < 1) throw Error("--terms must be positive");
    const auto ps = quantum_period_toric(model, cfg.terms);
    const double T_con = conifold_point(superpotential(model, QPoint::ones(model.rank()))).value.real();
    CommandResult r;
    r.report = header(cfg);
    r.report["model"] = model_json(model);
    ojson head = ojson::array();
    for (std::size_t k = 0; k < std::min<std::size_t>(ps.size(), 16); ++k) head.push_back(ps.a[k].str());
    ojson period{{"source", ps.source}, {"terms", ps.size()}, {"r", ps.r}, {"first_coefficients", head},
                 {"T_con", T_con}};
    try {
        const auto fit = t_acon_estimate(ps);
        period["T_estimate"] = fit.T;
        period["T_relative_error"] = std::abs(fit.T - T_con) / T_con;
        const auto l = lclt_check(ps, T_con, model.fan.dim);
        period["lclt"] = ojson{{"loglog_slope", l.loglog_slope},
                               {"expected_slope", l.expected_slope},
                               {"constant", l.constant},
                               {"trend_slope", l.trend_slope},
                               {"mismatch", l.mismatch}};
    } catch (const Error& e) {
        period["fit_error"] = e.what();
        r.exit_code = 2;
        r.message = e.what();
    }
    r.report["period"] = period;
    r.csv = series_csv(ps);
    return r;
}

CommandResult cmd_gamma_limit(const RunConfig& cfg) {
    const int n = require_xn(cfg, "gamma-limit");
    if (cfg.digits < 50) throw Error("--digits must be at least 50");
    if (!(cfg.q1 > 0) || !(cfg.q2 > 0)) throw Error("q1 and q2 must be positive reals");
    const auto model = family_xn(n);
    const auto q = q_from_config(cfg, model);
    const double T_con = conifold_point(superpotential(model, q)).value.real();
    const auto spectrum = make_report(eigenvalues_qr(batyrev_matrix_xn(n, cfg.q1, cfg.q2)), model.fano_index, T_con,
                                  T_con, nullptr, {}, "batyrev", tolerances_from(cfg));
    CommandResult r;
    r.report = header(cfg);
    r.report["condition_star"] = to_json(spectrum.flags.condition_star);
    if (spectrum.flags.condition_star.value != Tri::True) {
        r.exit_code = 1;
        r.message =
            "refusing gamma-limit: condition (*) is " + std::string(to_string(spectrum.flags.condition_star.value)) +
            " at this q (" + spectrum.flags.condition_star.detail +
            "). Without a simple rightmost eigenvalue the J-direction can oscillate and has no limit.";
        r.report["refused"] = r.message;
        return r;
    }
    const auto sched = cfg.t_schedule.empty() ? default_t_schedule() : cfg.t_schedule;
    const auto lim = principal_class_limit(n, cfg.q1, cfg.q2, sched, cfg.digits);
    r.report["gamma_limit"] = to_json(lim);
    if (!lim.converging) {
        r.exit_code = 2;
        r.message = "the J-direction did not settle along the t schedule";
    }
    return r;
}

CommandResult cmd_validate_fan(const RunConfig& cfg) {
    if (cfg.fan_path.empty()) throw Error("validate-fan needs --fan");
    const auto model = make_model(load_fan(cfg.fan_path));
    CommandResult r;
    r.report = header(cfg);
    r.report["valid"] = true;
    r.report["model"] = model_json(model);
    return r;
}

CommandResult run_command(const RunConfig& cfg) {
    try {
        if (cfg.command == "analyze") return cmd_analyze(cfg);
        if (cfg.command == "scan") return cmd_scan(cfg);
        if (cfg.command == "tropical") return cmd_tropical(cfg);
        if (cfg.command == "period") return cmd_period(cfg);
        if (cfg.command == "gamma-limit") return cmd_gamma_limit(cfg);
        if (cfg.command == "validate-fan") return cmd_validate_fan(cfg);
        throw Error("unknown command '" + cfg.command + "'");
    } catch (const std::exception& e) {
        CommandResult r;
        r.report = header(cfg);
        r.report["error"] = e.what();
        if (cfg.command == "validate-fan") r.report["valid"] = false;
        r.message = e.what();
        r.exit_code = 1;
        return r;
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out << content;
        if (!out) throw Error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("cannot rename " + tmp + " to " + path);
    }
}

}  // namespace fano
