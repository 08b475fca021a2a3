#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "heatcalc/ibp_reduce.hpp"
#include "svg.hpp"

namespace heatcalc::cli
{

using nlohmann::json;

namespace
{

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(path + ": cannot open file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content)) {
        throw InputError(path + ": cannot write file");
    }
}

json parse_json(std::string_view text, const std::string &source)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        // e.byte is one past the offending character.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
    }
}

[[noreturn]] void field_error(const std::string &source, const std::string &field, const std::string &msg)
{
    throw InputError(source + ": field '" + field + "': " + msg);
}

double get_number(const json &obj, const std::string &key, const std::string &path, const std::string &source)
{
    if (!obj.contains(key)) {
        field_error(source, path + key, "missing");
    }
    const json &v = obj.at(key);
    if (!v.is_number()) {
        field_error(source, path + key, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        field_error(source, path + key, "must be finite");
    }
    return d;
}

long get_integer(const json &v, const std::string &field, const std::string &source)
{
    if (!v.is_number_integer()) {
        field_error(source, field, "expected an integer");
    }
    return v.get<long>();
}

void reject_unknown(const json &obj, std::initializer_list<const char *> allowed, const std::string &path,
                    const std::string &source)
{
    for (const auto &[key, value] : obj.items()) {
        (void)value;
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; })) {
            field_error(source, path + key, "unknown field");
        }
    }
}

Rational get_rational(const json &v, const std::string &field, const std::string &source)
{
    if (v.is_number_integer()) {
        return Rational(v.get<long>());
    }
    if (!v.is_string()) {
        field_error(source, field, "expected an integer or a \"p/q\" string");
    }
    try {
        return Rational::parse(v.get<std::string>());
    } catch (const std::invalid_argument &e) {
        field_error(source, field, e.what());
    }
}

std::string signed_str(int s) { return s > 0 ? "+1" : "-1"; }

std::string linear_form_str(const SquareForm &s)
{
    std::string out;
    for (const auto &[m, c] : s.coeffs) {
        const bool neg = c.sign() < 0;
        const Rational mag = abs(c);
        if (out.empty()) {
            out += neg ? "-" : "";
        } else {
            out += neg ? " - " : " + ";
        }
        if (mag != Rational(1)) {
            out += mag.str() + " ";
        }
        out += square_entry_str(m);
    }
    return out.empty() ? "0" : out;
}

void print_certificate(std::ostream &out, const Certificate &cert)
{
    out << "order " << cert.order << ", sign " << signed_str(cert.sign) << '\n';
    for (std::size_t i = 0; i < cert.squares.size(); ++i) {
        out << "square " << i + 1 << ": f (" << linear_form_str(cert.squares[i]) << ")^2\n";
    }
    out << "remainder: " << cert.remainder.str() << '\n';
}

int report_check(std::ostream &out, const CertificateCheck &chk)
{
    if (chk.verified) {
        out << "VERIFIED (exact)\n";
        return 0;
    }
    out << "NOT VERIFIED\n";
    if (!chk.defect.empty()) {
        out << "defect: " << chk.defect << '\n';
    }
    out << "residual: " << chk.residual.str() << '\n';
    return 2;
}

int cmd_derive(int order, bool lines, std::ostream &out)
{
    const Combination c = entropy_derivative(order);
    out << (lines ? c.serialize() : c.str() + "\n");
    return 0;
}

int cmd_identities(std::ostream &out)
{
    const auto rows = verify_ibp_identities();
    int failed = 0;
    for (const auto &row : rows) {
        out << row.label << "  " << (row.passed ? "pass" : "FAIL") << "  " << row.lhs.str() << " = "
            << row.expected.str();
        if (!row.passed) {
            ++failed;
            out << "  (residual " << row.residual.str() << ")";
        }
        out << '\n';
    }
    out << rows.size() - failed << "/" << rows.size() << " identities verified\n";
    return failed == 0 ? 0 : 2;
}

struct CertifyArgs
{
    int order = 0;
    bool search = false;
    std::string cert_path;
    std::string out_path;
    int starts = 64;
    std::uint64_t seed = 1;
    bool no_seed = false;
};

int cmd_certify(const CertifyArgs &a, std::ostream &out, std::ostream &err)
{
    if (a.search) {
        if (a.order < 2) {
            err << "certify --search needs --order n with n >= 2\n";
            return 1;
        }
        SearchConfig cfg;
        cfg.starts = a.starts;
        cfg.seed = a.seed;
        cfg.seed_known = !a.no_seed;
        cfg.threads = threads_from_env();
        const SearchResult res = search_certificate(a.order, cfg);
        out << "starts run: " << res.starts_run << '\n';
        out << "best residual norm: " << res.residual_norm << '\n';
        out << "best candidate:\n";
        for (std::size_t i = 0; i < res.best_squares.size(); ++i) {
            out << "  square " << i + 1 << ":";
            for (double v : res.best_squares[i]) {
                out << ' ' << v;
            }
            out << '\n';
        }
        if (!res.certificate) {
            out << "no certificate found (report only)\n";
            return 0;
        }
        out << "certificate from start " << res.winning_start << ":\n";
        print_certificate(out, *res.certificate);
        if (!a.out_path.empty()) {
            write_file(a.out_path, certificate_to_json(*res.certificate));
        }
        return report_check(out, verify_certificate(*res.certificate));
    }

    Certificate cert;
    if (!a.cert_path.empty()) {
        cert = certificate_from_json(read_file(a.cert_path), a.cert_path);
        if (a.order != 0 && a.order != cert.order) {
            err << a.cert_path << ": certificate is for order " << cert.order << ", not " << a.order << '\n';
            return 1;
        }
    } else {
        if (a.order < 1) {
            err << "certify needs --order n or --cert file.json\n";
            return 1;
        }
        auto known = known_certificate(a.order);
        if (!known) {
            err << "no built-in certificate for order " << a.order << "; use --search or --cert\n";
            return 1;
        }
        cert = *known;
    }
    print_certificate(out, cert);
    if (!a.out_path.empty()) {
        write_file(a.out_path, certificate_to_json(cert));
    }
    return report_check(out, verify_certificate(cert));
}

struct ScanArgs
{
    std::string config;
    std::string out_prefix;
    bool svg = false;
};

void write_scan_svgs(const std::string &prefix, const ScanResult &res, bool log_x)
{
    std::vector<double> t, h, J, invJ, logJ, logJ_dd, invJ_dd, e2h_dd;
    for (const auto &r : res.rows) {
        t.push_back(r.t);
        h.push_back(r.h.value);
        J.push_back(r.J.value);
        invJ.push_back(1.0 / r.J.value);
        logJ.push_back(std::log(r.J.value));
        logJ_dd.push_back(r.logJ_dd.value);
        invJ_dd.push_back(r.invJ_dd.value);
        e2h_dd.push_back(r.e2h_dd.value);
    }
    const std::pair<const char *, const std::vector<double> *> series[] = {
        {"h", &h},         {"J", &J},             {"invJ", &invJ},          {"logJ", &logJ},
        {"logJ_dd", &logJ_dd}, {"invJ_dd", &invJ_dd}, {"e2h_dd", &e2h_dd}};
    for (const auto &[name, ys] : series) {
        write_file(prefix + "_" + name + ".svg", line_chart(name, t, *ys, log_x));
    }
}

int cmd_scan(const ScanArgs &a, std::ostream &out, std::ostream &err)
{
    const ExperimentConfig cfg = load_config(a.config);
    const GaussianMixture mix(cfg.mixture);
    ScanOptions opts;
    opts.threads = threads_from_env();
    if (cfg.tolerances.quad_tol) {
        opts.quad_tol = *cfg.tolerances.quad_tol;
    }
    if (cfg.tolerances.sign_factor) {
        opts.sign_factor = *cfg.tolerances.sign_factor;
    }
    const ScanResult res = scan_conjectures(mix, cfg.t_grid.values(), cfg.max_order, opts);

    const std::string prefix = a.out_prefix.empty() ? cfg.output : a.out_prefix;
    std::ostream *report = &out;
    if (prefix.empty()) {
        if (a.svg) {
            err << "--svg needs --out or an \"output\" prefix in the config\n";
            return 1;
        }
        write_scan_csv(out, res);
        report = &err;
    } else {
        std::ostringstream csv;
        write_scan_csv(csv, res);
        write_file(prefix + ".csv", csv.str());
        if (a.svg) {
            write_scan_svgs(prefix, res, cfg.t_grid.spacing == Spacing::log);
        }
    }

    std::ostream &rep = *report;
    for (int n = 1; n <= cfg.max_order; ++n) {
        const int fails = res.count_sign_failures(n);
        const int inconclusive = res.count_inconclusive(n);
        const int total = static_cast<int>(res.rows.size());
        rep << "sign of d" << n << " h: " << total - fails - inconclusive << " pass, " << fails << " fail, "
            << inconclusive << " inconclusive" << (n > opts.asserted_order ? " (report only)" : "") << '\n';
    }
    int costa_fail = 0, inv_pos = 0, inv_neg = 0, log_pass = 0, log_fail = 0, log_inc = 0;
    for (const auto &r : res.rows) {
        costa_fail += r.costa_ok ? 0 : 1;
        inv_pos += r.invJ_dd.value > 0.0 ? 1 : 0;
        inv_neg += r.invJ_dd.value < 0.0 ? 1 : 0;
        log_pass += r.logJ_convex == Verdict::pass ? 1 : 0;
        log_fail += r.logJ_convex == Verdict::fail ? 1 : 0;
        log_inc += r.logJ_convex == Verdict::inconclusive ? 1 : 0;
    }
    rep << "-J' - J^2 >= 0: " << (costa_fail == 0 ? "holds" : "violated") << " (" << costa_fail
        << " failing points)\n";
    rep << "invJ_dd: " << inv_pos << " positive, " << inv_neg << " negative\n";
    rep << "logJ_dd >= 0 (report only): " << log_pass << " pass, " << log_fail << " fail, " << log_inc
        << " inconclusive\n";
    const bool ok = res.asserted_checks_pass(opts.asserted_order);
    rep << "asserted checks: " << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 2;
}

int cmd_wt_scan(const ScanArgs &a, std::ostream &out, std::ostream &err)
{
    const ExperimentConfig cfg = load_config(a.config);
    const GaussianMixture mix(cfg.mixture);
    WtOptions opts;
    opts.threads = threads_from_env();
    if (cfg.tolerances.quad_tol) {
        opts.quad_tol = *cfg.tolerances.quad_tol;
    }
    if (cfg.tolerances.sign_factor) {
        opts.error_factor = *cfg.tolerances.sign_factor;
    }
    if (cfg.tolerances.concave_tol) {
        opts.concave_tol = *cfg.tolerances.concave_tol;
    }
    const WtReport rep_data = wt_checks(mix, cfg.t_grid.values(), opts);

    const std::string prefix = a.out_prefix.empty() ? cfg.output : a.out_prefix;
    std::ostream *report = &out;
    if (prefix.empty()) {
        if (a.svg) {
            err << "--svg needs --out or an \"output\" prefix in the config\n";
            return 1;
        }
        write_wt_csv(out, rep_data);
        report = &err;
    } else {
        std::ostringstream csv;
        write_wt_csv(csv, rep_data);
        write_file(prefix + "_wt.csv", csv.str());
        if (a.svg) {
            std::vector<double> t, hW, JW, JW_dd;
            for (const auto &r : rep_data.rows) {
                t.push_back(r.t);
                hW.push_back(r.hW.value);
                JW.push_back(r.JW.value);
                JW_dd.push_back(r.JW_dd.value);
            }
            write_file(prefix + "_hW.svg", line_chart("h(W_t)", t, hW, false));
            write_file(prefix + "_JW.svg", line_chart("J(W_t)", t, JW, false));
            write_file(prefix + "_JW_dd.svg", line_chart("J(W_t) second difference", t, JW_dd, false));
        }
    }
    std::ostream &rep = *report;
    rep << "h(W_t) concave: " << (rep_data.concave_ok ? "holds" : "violated") << '\n';
    rep << "-J' + t^2 >= 2tJ: " << (rep_data.txz_ok ? "holds" : "violated") << '\n';
    rep << "J(W_t) second differences: " << rep_data.jw_dd_positive << " positive, " << rep_data.jw_dd_negative
        << " negative (both signs: " << (rep_data.jw_both_signs() ? "yes" : "no") << ")\n";
    const bool ok = rep_data.concave_ok && rep_data.txz_ok;
    rep << "asserted checks: " << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 2;
}

} // namespace

ExperimentConfig parse_config(std::string_view text, const std::string &source)
{
    const json root = parse_json(text, source);
    if (!root.is_object()) {
        throw InputError(source + ": top level must be an object");
    }
    reject_unknown(root, {"mixture", "t_grid", "max_order", "tolerances", "output"}, "", source);

    ExperimentConfig cfg;
    if (!root.contains("mixture") || !root["mixture"].is_array() || root["mixture"].empty()) {
        field_error(source, "mixture", "expected a non-empty array of {w, mu, var}");
    }
    for (std::size_t i = 0; i < root["mixture"].size(); ++i) {
        const json &c = root["mixture"][i];
        const std::string path = "mixture[" + std::to_string(i) + "].";
        if (!c.is_object()) {
            field_error(source, path.substr(0, path.size() - 1), "expected an object");
        }
        reject_unknown(c, {"w", "mu", "var"}, path, source);
        Component comp{get_number(c, "w", path, source), get_number(c, "mu", path, source),
                       get_number(c, "var", path, source)};
        if (!(comp.weight > 0.0)) {
            field_error(source, path + "w", "must be positive");
        }
        if (!(comp.variance > 0.0)) {
            field_error(source, path + "var", "must be positive");
        }
        cfg.mixture.push_back(comp);
    }
    try {
        GaussianMixture check(cfg.mixture);
    } catch (const std::invalid_argument &e) {
        field_error(source, "mixture", e.what());
    }

    if (!root.contains("t_grid") || !root["t_grid"].is_object()) {
        field_error(source, "t_grid", "expected an object {start, stop, points, spacing}");
    }
    const json &g = root["t_grid"];
    reject_unknown(g, {"start", "stop", "points", "spacing"}, "t_grid.", source);
    cfg.t_grid.start = get_number(g, "start", "t_grid.", source);
    cfg.t_grid.stop = get_number(g, "stop", "t_grid.", source);
    if (!g.contains("points")) {
        field_error(source, "t_grid.points", "missing");
    }
    const long points = get_integer(g["points"], "t_grid.points", source);
    if (points < 3 || points > 1000000) {
        field_error(source, "t_grid.points", "must be between 3 and 1000000");
    }
    cfg.t_grid.points = static_cast<int>(points);
    if (!(cfg.t_grid.start > 0.0)) {
        field_error(source, "t_grid.start", "must be positive");
    }
    if (!(cfg.t_grid.stop > cfg.t_grid.start)) {
        field_error(source, "t_grid.stop", "must exceed start");
    }
    if (g.contains("spacing")) {
        const json &s = g["spacing"];
        if (s == "linear") {
            cfg.t_grid.spacing = Spacing::linear;
        } else if (s == "log") {
            cfg.t_grid.spacing = Spacing::log;
        } else {
            field_error(source, "t_grid.spacing", "expected \"linear\" or \"log\"");
        }
    }

    if (root.contains("max_order")) {
        const long n = get_integer(root["max_order"], "max_order", source);
        if (n < 1 || n > 6) {
            field_error(source, "max_order", "must be between 1 and 6");
        }
        cfg.max_order = static_cast<int>(n);
    }
    if (root.contains("tolerances")) {
        const json &t = root["tolerances"];
        if (!t.is_object()) {
            field_error(source, "tolerances", "expected an object");
        }
        reject_unknown(t, {"quad_tol", "sign_factor", "concave_tol"}, "tolerances.", source);
        auto opt = [&](const char *key, std::optional<double> &dst) {
            if (t.contains(key)) {
                const double v = get_number(t, key, "tolerances.", source);
                if (!(v > 0.0)) {
                    field_error(source, std::string("tolerances.") + key, "must be positive");
                }
                dst = v;
            }
        };
        opt("quad_tol", cfg.tolerances.quad_tol);
        opt("sign_factor", cfg.tolerances.sign_factor);
        opt("concave_tol", cfg.tolerances.concave_tol);
    }
    if (root.contains("output")) {
        if (!root["output"].is_string()) {
            field_error(source, "output", "expected a string path prefix");
        }
        cfg.output = root["output"].get<std::string>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::string &path) { return parse_config(read_file(path), path); }

std::string square_entry_str(const DerivMonomial &m)
{
    std::string s = m.str();
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        s.erase(slash);
    }
    return s + "/f^" + std::to_string(m.degree());
}

DerivMonomial parse_square_entry(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        throw std::invalid_argument("square entry '" + std::string(text) + "' needs a /f^r denominator");
    }
    const DerivMonomial m = DerivMonomial::parse(text.substr(0, slash));
    std::string_view den = text.substr(slash + 1);
    while (!den.empty() && den.front() == ' ') {
        den.remove_prefix(1);
    }
    const std::string expected = "f^" + std::to_string(m.degree());
    if (den != expected && !(m.degree() == 1 && den == "f")) {
        throw std::invalid_argument("square entry '" + std::string(text) + "' should end in /" + expected);
    }
    return m;
}

std::string certificate_to_json(const Certificate &cert)
{
    auto pair = [](const std::string &m, const Rational &c) { return json::array({m, c.str()}).dump(); };
    std::ostringstream os;
    os << "{\n  \"order\": " << cert.order << ",\n  \"sign\": " << cert.sign << ",\n  \"squares\": [";
    for (std::size_t i = 0; i < cert.squares.size(); ++i) {
        os << (i ? ",\n    [" : "\n    [");
        bool first = true;
        for (const auto &[m, c] : cert.squares[i].coeffs) {
            os << (first ? "\n      " : ",\n      ") << pair(square_entry_str(m), c);
            first = false;
        }
        os << "\n    ]";
    }
    os << (cert.squares.empty() ? "],\n" : "\n  ],\n") << "  \"remainder\": [";
    bool first = true;
    for (const auto &[m, c] : cert.remainder.terms()) {
        os << (first ? "\n    " : ",\n    ") << pair(m.str(), c);
        first = false;
    }
    os << (first ? "]\n}\n" : "\n  ]\n}\n");
    return os.str();
}

Certificate certificate_from_json(std::string_view text, const std::string &source)
{
    const json root = parse_json(text, source);
    if (!root.is_object()) {
        throw InputError(source + ": top level must be an object");
    }
    reject_unknown(root, {"order", "sign", "squares", "remainder"}, "", source);
    Certificate cert;
    for (const char *key : {"order", "sign", "squares", "remainder"}) {
        if (!root.contains(key)) {
            field_error(source, key, "missing");
        }
    }
    const long order = get_integer(root["order"], "order", source);
    if (order < 1 || order > 12) {
        field_error(source, "order", "must be between 1 and 12");
    }
    cert.order = static_cast<int>(order);
    const long sign = get_integer(root["sign"], "sign", source);
    if (sign != 1 && sign != -1) {
        field_error(source, "sign", "must be 1 or -1");
    }
    cert.sign = static_cast<int>(sign);

    auto pair_of = [&](const json &p, const std::string &field) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string()) {
            field_error(source, field, "expected [\"monomial\", coefficient]");
        }
        return std::pair<std::string, Rational>(p[0].get<std::string>(), get_rational(p[1], field + "[1]", source));
    };

    if (!root["squares"].is_array()) {
        field_error(source, "squares", "expected an array");
    }
    for (std::size_t i = 0; i < root["squares"].size(); ++i) {
        const json &sq = root["squares"][i];
        const std::string path = "squares[" + std::to_string(i) + "]";
        if (!sq.is_array()) {
            field_error(source, path, "expected an array of [monomial, coefficient] pairs");
        }
        SquareForm form;
        for (std::size_t k = 0; k < sq.size(); ++k) {
            const std::string field = path + "[" + std::to_string(k) + "]";
            auto [text_m, c] = pair_of(sq[k], field);
            DerivMonomial m;
            try {
                m = parse_square_entry(text_m);
            } catch (const std::invalid_argument &e) {
                field_error(source, field + "[0]", e.what());
            }
            if (m.weight() != cert.order) {
                field_error(source, field + "[0]", "basis monomial must have weight " + std::to_string(cert.order));
            }
            if (form.coeffs.count(m)) {
                field_error(source, field + "[0]", "duplicate basis monomial");
            }
            if (!c.is_zero()) {
                form.coeffs.emplace(m, c);
            }
        }
        cert.squares.push_back(std::move(form));
    }
    if (!root["remainder"].is_array()) {
        field_error(source, "remainder", "expected an array");
    }
    for (std::size_t i = 0; i < root["remainder"].size(); ++i) {
        const std::string field = "remainder[" + std::to_string(i) + "]";
        auto [text_m, c] = pair_of(root["remainder"][i], field);
        try {
            cert.remainder.add(DerivMonomial::parse(text_m), c);
        } catch (const std::invalid_argument &e) {
            field_error(source, field + "[0]", e.what());
        }
    }
    return cert;
}

unsigned threads_from_env()
{
    const char *v = std::getenv("HEATCALC_THREADS");
    if (v == nullptr || *v == '\0') {
        return 0;
    }
    char *end = nullptr;
    const unsigned long n = std::strtoul(v, &end, 10);
    if (*end != '\0' || n > 4096) {
        return 0;
    }
    return static_cast<unsigned>(n);
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Canonical forms of entropy derivatives along the heat flow, sign certificates and "
                 "Gaussian-mixture checks."};
    app.name("heatcalc");
    app.require_subcommand(1);

    int derive_order = 0;
    bool derive_lines = false;
    auto *derive = app.add_subcommand("derive", "Print the canonical integrand of 2 d^n h/dt^n");
    derive->add_option("--order,-n", derive_order, "Derivative order n")->required()->check(CLI::Range(1, 12));
    derive->add_flag("--lines", derive_lines, "One \"coeff monomial\" term per line");

    auto *identities = app.add_subcommand("verify-identities", "Check the weight-6 and weight-8 IBP identities");

    CertifyArgs cert_args;
    auto *certify = app.add_subcommand("certify", "Verify or search for a sum-of-squares sign certificate");
    certify->add_option("--order,-n", cert_args.order, "Derivative order n")->check(CLI::Range(1, 12));
    certify->add_flag("--search", cert_args.search, "Run the numeric certificate search");
    certify->add_option("--cert", cert_args.cert_path, "Certificate JSON to verify");
    certify->add_option("--out", cert_args.out_path, "Write the certificate as JSON");
    certify->add_option("--starts", cert_args.starts, "Search starts")->check(CLI::Range(1, 100000));
    certify->add_option("--seed", cert_args.seed, "Search RNG seed");
    certify->add_flag("--no-known-seed", cert_args.no_seed, "Do not seed the search with the built-in certificate");

    ScanArgs scan_args;
    auto *scan = app.add_subcommand("scan", "Heat-flow scan of entropy derivatives for a Gaussian mixture");
    scan->add_option("--config", scan_args.config, "Experiment JSON")->required();
    scan->add_option("--out", scan_args.out_prefix, "Output path prefix (overrides the config)");
    scan->add_flag("--svg", scan_args.svg, "Also write SVG line plots");

    ScanArgs wt_args;
    auto *wt = app.add_subcommand("wt-scan", "Checks along W_t = sqrt(t) X + sqrt(1-t) Z");
    wt->add_option("--config", wt_args.config, "Experiment JSON (grid inside (0, 1))")->required();
    wt->add_option("--out", wt_args.out_prefix, "Output path prefix (overrides the config)");
    wt->add_flag("--svg", wt_args.svg, "Also write SVG line plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help(std::string(), CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "heatcalc: " << e.what() << '\n';
        err << "run 'heatcalc --help' for usage\n";
        return 1;
    }

    try {
        if (*derive) {
            return cmd_derive(derive_order, derive_lines, out);
        }
        if (*identities) {
            return cmd_identities(out);
        }
        if (*certify) {
            return cmd_certify(cert_args, out, err);
        }
        if (*scan) {
            return cmd_scan(scan_args, out, err);
        }
        if (*wt) {
            return cmd_wt_scan(wt_args, out, err);
        }
    } catch (const InputError &e) {
        err << "heatcalc: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument &e) {
        err << "heatcalc: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        err << "heatcalc: internal error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace heatcalc::cli
