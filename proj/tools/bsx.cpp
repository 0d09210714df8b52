#include "bsx/approximants.hpp"
#include "bsx/errors.hpp"
#include "bsx/integral_oracle.hpp"
#include "bsx/odd_variants.hpp"
#include "bsx/subordination.hpp"
#include "bsx/verification.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using namespace bsx;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kConstraint = 3, kNumeric = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// JSON-lines output keeps the %.17g text, so CSV and JSON carry the same digits.
std::string json_num(double v) {
    if (!std::isfinite(v)) return "null";
    return num(v);
}

double default_tol() {
    if (const char* s = std::getenv("BSX_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(s, &end);
        if (end == s || *end != '\0' || !(v > 0) || !std::isfinite(v))
            throw UsageError(std::string("BSX_TOL must be a positive number, got '") + s + "'");
        return v;
    }
    return kApproxTol;
}

enum class Family { Base, Measure, Odd };

struct KindSel {
    Kind kind = Kind::TwoSided;
    Family family = Family::Base;
};

KindSel parse_kind(const std::string& s) {
    static const std::vector<std::pair<std::string, KindSel>> table = {
        {"K", {Kind::TwoSided, Family::Base}},
        {"L", {Kind::Minorant, Family::Base}},
        {"M", {Kind::Majorant, Family::Base}},
        {"two-sided", {Kind::TwoSided, Family::Base}},
        {"minorant", {Kind::Minorant, Family::Base}},
        {"majorant", {Kind::Majorant, Family::Base}},
        {"Knu", {Kind::TwoSided, Family::Measure}},
        {"Lnu", {Kind::Minorant, Family::Measure}},
        {"Mnu", {Kind::Majorant, Family::Measure}},
        {"Kodd", {Kind::TwoSided, Family::Odd}},
        {"Lodd", {Kind::Minorant, Family::Odd}},
        {"Modd", {Kind::Majorant, Family::Odd}},
    };
    for (const auto& [name, sel] : table)
        if (name == s) return sel;
    throw UsageError("unknown kind '" + s + "' (K, L, M, two-sided, minorant, majorant, Knu, Lnu, Mnu, Kodd, Lodd, Modd)");
}

const char* short_name(Kind k) { return k == Kind::TwoSided ? "K" : k == Kind::Minorant ? "L" : "M"; }

// Shared construction flags.
struct Setup {
    std::string kind = "K";
    double lambda = 1.0;
    std::string c = "auto";
    double delta = 1.0;
    std::string measure;
    double tol = 0.0;  // 0: BSX_TOL or the library default

    void add_to(CLI::App* app) {
        app->add_option("--kind", kind, "K|L|M|two-sided|minorant|majorant|Knu|Lnu|Mnu|Kodd|Lodd|Modd");
        app->add_option("--lambda", lambda, "exponential rate (0 selects the step function)");
        app->add_option("--delta", delta, "type scale; the approximant has type k*pi*delta");
        add_common(app);
    }
    void add_common(CLI::App* app) {
        app->add_option("--c", c, "vertical shift, a number or 'auto' = exp(-lambda/delta)");
        app->add_option("--measure", measure, "power:alpha=<a> | atoms:<l>:<w>[,...] | table:<file.csv>");
        app->add_option("--tol", tol, "evaluation tolerance (default BSX_TOL or 1e-11)");
    }
    double eval_tol() const { return tol > 0 ? tol : default_tol(); }
};

double resolve_c(const std::string& s, double lambda, double delta) {
    if (s == "auto") return auto_shift(lambda, delta);
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("--c must be a number or 'auto', got '" + s + "'");
    }
}

struct Problem {
    KindSel sel;
    std::shared_ptr<const Approximant> approx;
    std::shared_ptr<const Target> target;
    std::shared_ptr<const Measure> measure;
    BaseParams params;
    bool step = false;
    Json echo;
};

Problem build(const Setup& s, KindSel sel) {
    Problem p;
    p.sel = sel;
    const double tol = s.eval_tol();
    p.echo["kind"] = kind_name(sel.kind);
    p.echo["delta"] = s.delta;
    if (!(s.delta > 0) || !std::isfinite(s.delta)) throw ConstraintViolation("delta must be positive, got " + num(s.delta));
    if (sel.family == Family::Measure || (sel.family == Family::Odd && !s.measure.empty())) {
        if (s.measure.empty()) throw UsageError("kind needs --measure");
        p.measure = std::make_shared<const Measure>(Measure::parse(s.measure));
        p.echo["family"] = sel.family == Family::Odd ? "odd-measure" : "measure";
        p.echo["measure"] = s.measure;
        if (sel.family == Family::Odd) {
            p.approx = std::make_shared<const OddApproximant>(make_odd(sel.kind, p.measure, s.delta, tol));
            p.target = std::make_shared<const OddTarget>(std::make_shared<const MeasureTarget>(p.measure));
        } else {
            p.approx = std::make_shared<const SubordinatedApproximant>(sel.kind, p.measure, s.delta, tol);
            p.target = std::make_shared<const MeasureTarget>(p.measure);
        }
        p.echo["tol"] = tol;
        return p;
    }
    if (!s.measure.empty()) throw UsageError("--measure needs a measure kind (Knu, Lnu, Mnu, Kodd, Lodd, Modd)");
    if (s.lambda == 0.0) {
        if (sel.family == Family::Odd) throw UsageError("odd kinds need lambda > 0");
        p.step = true;
        p.echo["family"] = "step";
        p.approx = std::make_shared<const StepApproximant>(sel.kind, s.delta, tol);
        p.target = std::make_shared<const StepTarget>();
        p.echo["tol"] = tol;
        return p;
    }
    p.params.lambda = s.lambda;
    p.params.delta = s.delta;
    p.params.c = resolve_c(s.c, s.lambda, s.delta);
    p.echo["family"] = sel.family == Family::Odd ? "odd" : "base";
    p.echo["lambda"] = s.lambda;
    p.echo["c"] = p.params.c;
    p.echo["tol"] = tol;
    if (sel.family == Family::Odd) {
        p.approx = std::make_shared<const OddApproximant>(make_odd(sel.kind, p.params, tol));
        p.target = std::make_shared<const OddTarget>(std::make_shared<const BaseTarget>(p.params));
    } else {
        p.approx = std::make_shared<const BaseApproximant>(sel.kind, p.params, tol);
        p.target = std::make_shared<const BaseTarget>(p.params);
    }
    return p;
}

// Closed-form L1 error, when one is known.
bool closed_form(const Problem& p, double& out) {
    if (p.sel.family == Family::Odd) return false;
    if (p.step) {
        // E_0 - 1/2 is odd, so the minorant and majorant errors are equal and add up to 1/delta
        out = 0.5 / p.approx->delta();
        return true;
    }
    if (p.measure) {
        out = closed_form_error_nu(p.sel.kind, *p.measure, p.approx->delta());
        return true;
    }
    out = closed_form_error(p.sel.kind, p.params);
    return true;
}

double margin_at(const Problem& p, double x, double target, double approx) {
    switch (p.sel.kind) {
        case Kind::TwoSided: return sin_pi(p.approx->delta() * x) * (target - approx);
        case Kind::Minorant: return target - approx;
        case Kind::Majorant: return approx - target;
    }
    return 0.0;
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

// ---- eval ----

struct EvalOpts {
    Setup setup;
    std::string grid = "-5:5:101";
    std::string format = "jsonl";
    std::string out;
};

int run_eval(const EvalOpts& o) {
    if (o.format != "jsonl" && o.format != "csv") throw UsageError("--format must be jsonl or csv");
    Problem p = build(o.setup, parse_kind(o.setup.kind));
    const auto xs = make_grid(GridSpec::parse(o.grid), p.approx->delta());
    std::vector<double> tv(xs.size()), av(xs.size());
    std::vector<char> ok(xs.size(), 1);
    long skipped = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        try {
            tv[i] = p.target->value(xs[i]);
        } catch (const DomainError&) {
            ok[i] = 0;  // unbounded target at 0
            ++skipped;
            continue;
        }
        av[i] = p.approx->at(xs[i]);
    }
    std::ostringstream s;
    if (o.format == "csv") s << "x,target,approx,margin\n";
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!ok[i]) continue;
        const double m = margin_at(p, xs[i], tv[i], av[i]);
        if (o.format == "csv")
            s << num(xs[i]) << ',' << num(tv[i]) << ',' << num(av[i]) << ',' << num(m) << '\n';
        else
            s << "{\"x\":" << json_num(xs[i]) << ",\"target\":" << json_num(tv[i]) << ",\"approx\":"
              << json_num(av[i]) << ",\"margin\":" << json_num(m) << "}\n";
    }
    write_out(o.out, s.str());
    if (skipped) std::cerr << "bsx: skipped " << skipped << " point(s) where the target is unbounded\n";
    return kPass;
}

// ---- errors ----

struct ErrorsOpts {
    Setup setup;
    std::vector<double> lambdas;
    std::vector<double> deltas;
    bool all_kinds = false;
    bool check = false;
    std::string format = "csv";
};

int run_errors(ErrorsOpts o) {
    if (o.format != "jsonl" && o.format != "csv") throw UsageError("--format must be jsonl or csv");
    if (o.lambdas.empty()) o.lambdas.push_back(o.setup.lambda);
    if (o.deltas.empty()) o.deltas.push_back(o.setup.delta);
    const bool measure = !o.setup.measure.empty();
    std::vector<Kind> kinds;
    if (o.all_kinds) {
        kinds = {Kind::TwoSided, Kind::Minorant, Kind::Majorant};
    } else {
        const KindSel sel = parse_kind(o.setup.kind);
        if (sel.family == Family::Odd) throw UsageError("no closed-form errors for the odd kinds");
        kinds = {sel.kind};
    }
    std::ostringstream s;
    if (o.format == "csv") {
        s << (measure ? "measure" : "lambda") << ",delta,c,kind,closed_form";
        if (o.check) s << ",numeric,rel_mismatch";
        s << '\n';
    }
    if (measure) o.lambdas = {0.0};
    for (double lam : o.lambdas) {
        for (double d : o.deltas) {
            for (Kind k : kinds) {
                Setup st = o.setup;
                st.lambda = lam;
                st.delta = d;
                Problem p = build(st, {k, measure ? Family::Measure : Family::Base});
                double cf = 0.0;
                closed_form(p, cf);
                double numeric = 0.0, mismatch = 0.0;
                if (o.check) {
                    numeric = numeric_l1_error(*p.approx, *p.target).value;
                    mismatch = std::abs(numeric - cf) / std::abs(cf);
                }
                const double c = (measure || p.step) ? 0.0 : p.params.c;
                if (o.format == "csv") {
                    s << (measure ? st.measure : num(lam)) << ',' << num(d) << ',' << num(c) << ',' << short_name(k)
                      << ',' << num(cf);
                    if (o.check) s << ',' << num(numeric) << ',' << num(mismatch);
                    s << '\n';
                } else {
                    s << '{' << (measure ? "\"measure\":\"" + st.measure + "\"" : "\"lambda\":" + json_num(lam))
                      << ",\"delta\":" << json_num(d) << ",\"c\":" << json_num(c) << ",\"kind\":\"" << short_name(k)
                      << "\",\"closed_form\":" << json_num(cf);
                    if (o.check) s << ",\"numeric\":" << json_num(numeric) << ",\"rel_mismatch\":" << json_num(mismatch);
                    s << "}\n";
                }
            }
        }
    }
    std::cout << s.str();
    return kPass;
}

// ---- verify ----

struct VerifyOpts {
    Setup setup;
    std::string grid;
    std::string range = "-20:20";
    bool derivatives = false;
    int k = 0;
    double ymax = 20.0;
    double rel_tol = 1e-6;
    std::string xs = "-7.3,-1.5,-0.5,-0.25,0.25,0.5,1.5,7.3";
    double oracle_tol = 1e-8;
    std::string out;
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            v.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw UsageError("bad number '" + item + "' in list '" + s + "'");
        }
    }
    if (v.empty()) throw UsageError("empty list");
    return v;
}

int finish(const Certificate& c, const std::string& out) {
    write_out(out, c.to_json().dump(2) + "\n");
    std::cerr << "bsx: " << claim_name(c.claim) << (c.passed ? " passed" : " FAILED") << ", worst margin "
              << num(c.worst_margin) << " at " << num(c.worst_location) << '\n';
    return c.passed ? kPass : kFail;
}

KindSel kind_for(const VerifyOpts& o, const std::string& what, Kind fallback) {
    KindSel sel = o.setup.kind.empty() ? KindSel{fallback, Family::Base} : parse_kind(o.setup.kind);
    if (o.setup.kind.empty() && !o.setup.measure.empty()) sel.family = Family::Measure;
    if ((what == "sign" && sel.kind != Kind::TwoSided) || (what == "minorant" && sel.kind != Kind::Minorant) ||
        (what == "majorant" && sel.kind != Kind::Majorant))
        throw UsageError("verify " + what + " does not apply to kind " + kind_name(sel.kind));
    return sel;
}

int run_verify(const std::string& what, const VerifyOpts& o) {
    if (what == "oracle") {
        const KindSel sel = o.setup.kind.empty() ? KindSel{} : parse_kind(o.setup.kind);
        if (sel.family != Family::Base || sel.kind == Kind::Minorant)
            throw UsageError("verify oracle covers K and M with c = 0, delta = 1");
        BaseParams bp{o.setup.lambda, 0.0, 1.0, 1.0};
        BaseApproximant a(sel.kind, bp, o.setup.eval_tol());
        Certificate c;
        c.claim = Claim::Identity;
        c.params_echo = {{"identity", sel.kind == Kind::TwoSided ? "K-E oracle" : "M-E oracle"},
                         {"lambda", bp.lambda}};
        c.tol_used = o.oracle_tol;
        c.worst_margin = 0.0;
        Json rows = Json::array();
        for (double x : parse_list(o.xs)) {
            const double series = a.at(x) - eval_T(bp, x);
            const double oracle =
                sel.kind == Kind::TwoSided ? oracle_K_diff(bp.lambda, x) : oracle_M_diff(bp.lambda, x);
            const double m = -std::abs(series - oracle);
            rows.push_back({{"x", x}, {"series", series}, {"oracle", oracle}});
            if (m < c.worst_margin || rows.size() == 1) {
                c.worst_margin = m;
                c.worst_location = x;
            }
        }
        c.details["points"] = rows;
        c.grid_spec = Json::object();
        c.passed = c.worst_margin >= -o.oracle_tol;
        return finish(c, o.out);
    }

    const Kind fallback = what == "minorant" ? Kind::Minorant : what == "majorant" ? Kind::Majorant : Kind::TwoSided;
    const KindSel sel = kind_for(o, what, fallback);
    Problem p = build(o.setup, sel);
    Certificate c;
    if (what == "sign" || what == "minorant" || what == "majorant") {
        const std::string g = o.grid.empty() ? "-20:20:100000:refined" : o.grid;
        const GridSpec spec = GridSpec::parse(g);
        c = what == "sign" ? verify_sign_two_sided(*p.approx, *p.target, spec)
                           : verify_one_sided(*p.approx, *p.target, sel.kind, spec);
    } else if (what == "nodes") {
        const auto colon = o.range.find(':');
        if (colon == std::string::npos) throw UsageError("--range must be lo:hi");
        const auto r = parse_list(o.range.substr(0, colon) + "," + o.range.substr(colon + 1));
        if (r.size() != 2 || r[0] != std::floor(r[0]) || r[1] != std::floor(r[1]) || r[0] > r[1])
            throw UsageError("--range must be lo:hi with integers lo <= hi");
        c = verify_nodes(*p.approx, *p.target, static_cast<long>(r[0]), static_cast<long>(r[1]), o.derivatives);
    } else if (what == "type") {
        const int k = o.k > 0 ? o.k : type_multiplier(sel.kind);
        c = estimate_exponential_type(*p.approx, k, o.ymax);
    } else if (what == "l1") {
        double expected = 0.0;
        if (!closed_form(p, expected)) throw UsageError("no closed-form error for the odd kinds");
        c = verify_l1_match(*p.approx, *p.target, expected, o.rel_tol);
    } else {
        throw UsageError("unknown verification '" + what + "'");
    }
    for (const auto& [k, v] : p.echo.items()) c.params_echo[k] = v;
    return finish(c, o.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bsx: extremal entire functions for truncated exponentials and their subordinated families"};
    app.require_subcommand(1);

    EvalOpts eo;
    auto* eval = app.add_subcommand("eval", "evaluate target and approximant on a grid");
    eo.setup.add_to(eval);
    eval->add_option("--grid", eo.grid, "min:max:count[:uniform|log|chebyshev|refined], pieces joined by '+'");
    eval->add_option("--format", eo.format, "jsonl or csv");
    eval->add_option("--out", eo.out, "output file (default stdout)");

    ErrorsOpts er;
    auto* errors = app.add_subcommand("errors", "closed-form L1 errors over lambda x delta x kind");
    er.setup.add_common(errors);
    errors->add_option("--lambda", er.lambdas, "one or more lambda values")->delimiter(',');
    errors->add_option("--delta", er.deltas, "one or more delta values")->delimiter(',');
    errors->add_option("--kind", er.setup.kind, "kind (ignored with --all-kinds)");
    errors->add_flag("--all-kinds", er.all_kinds, "two-sided, minorant and majorant");
    errors->add_flag("--check", er.check, "add numeric L1 error and relative mismatch");
    errors->add_option("--format", er.format, "csv or jsonl");

    VerifyOpts vo;
    vo.setup.kind.clear();
    auto* verify = app.add_subcommand("verify", "run a verification and write a JSON certificate");
    std::string what;
    verify->add_option("check", what, "sign | minorant | majorant | nodes | type | l1 | oracle")
        ->required()
        ->check(CLI::IsMember({"sign", "minorant", "majorant", "nodes", "type", "l1", "oracle"}));
    vo.setup.add_to(verify);
    verify->add_option("--grid", vo.grid, "grid for sign/minorant/majorant (default -20:20:100000:refined)");
    verify->add_option("--range", vo.range, "node range lo:hi");
    verify->add_flag("--derivatives", vo.derivatives, "also check derivatives at the nodes");
    verify->add_option("--k", vo.k, "expected type multiplier (default from kind)");
    verify->add_option("--ymax", vo.ymax, "largest imaginary abscissa for the type fit");
    verify->add_option("--rel-tol", vo.rel_tol, "relative tolerance for l1");
    verify->add_option("--x", vo.xs, "comma-separated abscissae for oracle");
    verify->add_option("--oracle-tol", vo.oracle_tol, "absolute tolerance for oracle");
    verify->add_option("--out", vo.out, "certificate file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    }

    try {
        if (*eval) return run_eval(eo);
        if (*errors) return run_errors(er);
        if (*verify) return run_verify(what, vo);
    } catch (const UsageError& e) {
        std::cerr << "bsx: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "bsx: " << e.what() << '\n';
        return kUsage;
    } catch (const ConstraintViolation& e) {
        std::cerr << "bsx: constraint violated: " << e.what() << '\n';
        return kConstraint;
    } catch (const NonConvergence& e) {
        std::cerr << "bsx: numerical failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const Overflow& e) {
        std::cerr << "bsx: numerical failure: " << e.what() << '\n';
        return kNumeric;
    }
    return kUsage;
}
