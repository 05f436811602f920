#include "fannowave/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace fannowave {

std::string format_num(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string escape_json(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

}  // namespace

void JsonWriter::indent(size_t depth) {
    for (size_t i = 0; i < depth; ++i) os_ << "  ";
}

void JsonWriter::item_prefix() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (levels_.empty()) return;  // root value
    if (levels_.back().count > 0) os_ << ',';
    os_ << '\n';
    indent(levels_.size());
    ++levels_.back().count;
}

JsonWriter& JsonWriter::begin_object() {
    item_prefix();
    os_ << '{';
    levels_.push_back({true, 0});
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    const bool empty = levels_.back().count == 0;
    levels_.pop_back();
    if (!empty) {
        os_ << '\n';
        indent(levels_.size());
    }
    os_ << '}';
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    item_prefix();
    os_ << '[';
    levels_.push_back({false, 0});
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    const bool empty = levels_.back().count == 0;
    levels_.pop_back();
    if (!empty) {
        os_ << '\n';
        indent(levels_.size());
    }
    os_ << ']';
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    item_prefix();
    os_ << '"' << escape_json(k) << "\": ";
    after_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    item_prefix();
    if (std::isfinite(v))
        os_ << format_num(v);
    else
        os_ << '"' << (std::isnan(v) ? "nan" : v > 0 ? "inf" : "-inf") << '"';
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    item_prefix();
    os_ << '"' << escape_json(v) << '"';
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    item_prefix();
    os_ << (v ? "true" : "false");
    return *this;
}

JsonWriter& JsonWriter::value(long long v) {
    item_prefix();
    os_ << v;
    return *this;
}

void JsonWriter::finish() {
    if (!levels_.empty()) throw UsageError("json writer: unbalanced containers at finish");
    os_ << '\n';
}

namespace {

void write_config(JsonWriter& w, const SimConfig& cfg) {
    w.key("config").begin_object();
    for (const auto& [k, v] : config_echo(cfg)) w.key(k).value(v);
    w.end_object();
}

void write_certificate(JsonWriter& w, const CflCertificate& cert) {
    w.key("certificate").begin_object();
    w.key("dt").value(cert.dt);
    w.key("dx").value(cert.dx);
    w.key("cfl_target").value(cert.cfl_target);
    w.key("speed_budget").value(cert.speed_budget);
    w.key("max_speed_observed").value(cert.max_speed_observed);
    w.key("cfl_observed").value(cert.cfl_observed);
    w.key("steps").value(cert.steps);
    w.end_object();
}

void write_windows(JsonWriter& w, const std::vector<WindowDistance>& ws) {
    w.key("windows").begin_array();
    for (const WindowDistance& wd : ws) {
        w.begin_object();
        w.key("N").value(wd.N);
        w.key("d_N").value(wd.d);
        w.end_object();
    }
    w.end_array();
}

void write_fit(JsonWriter& w, const DecayFit& fit) {
    w.key("xi_hat").value(fit.xi_hat);
    w.key("fit_residual").value(fit.fit_residual);
    w.key("log_rmse").value(fit.log_rmse);
    w.key("n_fit_windows").value(fit.n_used);
    w.key("degenerate_fit").value(fit.degenerate);
}

void write_xv_body(JsonWriter& w, const CrossValidation& cv) {
    w.key("T0").value(cv.T0);
    w.key("t_final").value(cv.t_final);
    w.key("distance").value(cv.distance);
    w.key("floor").value(cv.floor);
    w.key("pass").value(cv.pass);
    write_certificate(w, cv.cert);
}

}  // namespace

void write_profile_csv(std::ostream& os, const SteadyProfile& p) {
    os << "x,u,c,S,r1,r3,lam1,lam2,lam3\n";
    for (int k = 0; k < p.n(); ++k) {
        os << format_num(p.x[k]) << ',' << format_num(p.u[k]) << ',' << format_num(p.c[k]) << ','
           << format_num(p.S) << ',' << format_num(p.r1[k]) << ',' << format_num(p.r3[k]) << ','
           << format_num(p.lam1[k]) << ',' << format_num(p.lam2[k]) << ',' << format_num(p.lam3[k])
           << '\n';
    }
}

void write_field_csv(std::ostream& os, const PeriodicField& f) {
    os << "t,x,phi1,phi2,phi3\n";
    for (int j = 0; j < f.grid.n_t; ++j) {
        const double t = f.grid.t_node(j);
        for (int k = 0; k < f.grid.n_x; ++k) {
            os << format_num(t) << ',' << format_num(f.grid.x_node(k)) << ',' << format_num(f.f1(j, k))
               << ',' << format_num(f.f2(j, k)) << ',' << format_num(f.f3(j, k)) << '\n';
        }
    }
}

void write_traj_csv(std::ostream& os, const WindowField& traj, const SteadyProfile& profile) {
    if (traj.n_x() != profile.n())
        throw UsageError("traj csv: trajectory grid differs from the profile");
    os << "t,x,phi1,phi2,phi3,rho,u,S\n";
    for (int s = 0; s < traj.n_saved(); ++s) {
        for (int k = 0; k < traj.n_x(); ++k) {
            const Riemann<double> r{traj.f1(s, k) + profile.r1[k], traj.f2(s, k) + profile.S,
                                    traj.f3(s, k) + profile.r3[k]};
            const Primitive<double> w = from_riemann(profile.gas, r);
            os << format_num(traj.times[s]) << ',' << format_num(traj.x[k]) << ','
               << format_num(traj.f1(s, k)) << ',' << format_num(traj.f2(s, k)) << ','
               << format_num(traj.f3(s, k)) << ',' << format_num(w.rho) << ',' << format_num(w.u)
               << ',' << format_num(w.S) << '\n';
        }
    }
}

void write_error_json(std::ostream& os, const std::string& type, const std::string& message) {
    JsonWriter w(os);
    w.begin_object();
    w.key("error").begin_object();
    w.key("type").value(type);
    w.key("message").value(message);
    w.end_object();
    w.end_object();
    w.finish();
}

void write_steady_json(std::ostream& os, const SimConfig& cfg, const SteadyProfile& p) {
    JsonWriter w(os);
    w.begin_object();
    write_config(w, cfg);
    w.key("n_x").value(p.n());
    w.key("L").value(p.L);
    w.key("u_min").value(p.u.minCoeff());
    w.key("u_max").value(p.u.maxCoeff());
    w.key("c_min").value(p.c.minCoeff());
    w.key("c_max").value(p.c.maxCoeff());
    w.end_object();
    w.finish();
}

void write_lmax_json(std::ostream& os, const SimConfig& cfg, double lmax) {
    JsonWriter w(os);
    w.begin_object();
    write_config(w, cfg);
    w.key("lmax").value(lmax);  // +inf serializes as "inf", the no-choking sentinel
    w.end_object();
    w.finish();
}

void write_build_report_json(std::ostream& os, const SimConfig& cfg, const BuildReport& rep) {
    JsonWriter w(os);
    w.begin_object();
    write_config(w, cfg);
    w.key("converged").value(rep.converged);
    w.key("iterations").value(rep.iterations);
    w.key("final_residual").value(rep.final_residual);
    w.key("sup_diffs").begin_array();
    for (double d : rep.sup_diffs) w.value(d);
    w.end_array();
    w.key("ratios").begin_array();
    for (double r : rep.ratios) w.value(r);
    w.end_array();
    w.key("guard_margin").value(rep.guard_margin);
    w.key("k_steady").value(rep.k_steady);
    w.key("m_bound").value(rep.m_bound);
    w.key("f1_max").value(rep.f1_max);
    w.key("f3_max").value(rep.f3_max);
    w.end_object();
    w.finish();
}

void write_simulate_json(std::ostream& os, const SimConfig& cfg, const CflCertificate& cert,
                         double t_final) {
    JsonWriter w(os);
    w.begin_object();
    write_config(w, cfg);
    w.key("t_final").value(t_final);
    write_certificate(w, cert);
    w.end_object();
    w.finish();
}

void write_stability_json(std::ostream& os, const SimConfig& cfg, const StabilityReport& rep) {
    JsonWriter w(os);
    w.begin_object();
    write_config(w, cfg);
    w.key("T0").value(rep.T0);
    write_windows(w, rep.windows_c0);
    write_fit(w, rep.fit_c0);
    w.key("xi_bound").value(rep.xi_bound);
    w.key("floor").value(rep.floor_c0);
    w.key("c1").begin_object();
    write_windows(w, rep.windows_c1);
    write_fit(w, rep.fit_c1);
    w.key("floor").value(rep.floor_c1);
    w.end_object();
    write_certificate(w, rep.cert);
    w.end_object();
    w.finish();
}

void write_xvalidate_json(std::ostream& os, const SimConfig& cfg, const CrossValidation& coarse,
                          const CrossValidation* refined, int refine_factor) {
    JsonWriter w(os);
    w.begin_object();
    write_config(w, cfg);
    write_xv_body(w, coarse);
    if (refined) {
        w.key("refined").begin_object();
        w.key("factor").value(refine_factor);
        write_xv_body(w, *refined);
        w.key("distance_ratio").value(coarse.distance > 0.0 ? refined->distance / coarse.distance
                                                            : 0.0);
        w.end_object();
    }
    w.end_object();
    w.finish();
}

}  // namespace fannowave
