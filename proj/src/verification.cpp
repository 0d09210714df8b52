#include "bsx/verification.hpp"

#include "bsx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

namespace bsx {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

unsigned thread_count(std::size_t work) {
    unsigned n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("BSX_THREADS")) n = static_cast<unsigned>(std::max(1, std::atoi(env)));
    n = std::max(1u, std::min(n, 32u));
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, work / 64)));
}

// out[i] = fn(i), chunked over threads; rethrows the first failure by chunk order.
template <class F>
void parallel_fill(std::vector<double>& out, const F& fn) {
    const std::size_t n = out.size();
    const unsigned t = thread_count(n);
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return;
    }
    std::vector<std::exception_ptr> errs(t);
    std::vector<std::thread> pool;
    for (unsigned c = 0; c < t; ++c) {
        pool.emplace_back([&, c] {
            const std::size_t lo = n * c / t, hi = n * (c + 1) / t;
            try {
                for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
            } catch (...) {
                errs[c] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

// first index of the minimum, so ties resolve the same way for any thread count
std::size_t argmin(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[best] || (std::isnan(v[i]) && !std::isnan(v[best]))) best = i;
    return best;
}

Spacing parse_spacing(const std::string& s) {
    if (s == "uniform") return Spacing::Uniform;
    if (s == "log") return Spacing::Log;
    if (s == "chebyshev") return Spacing::Chebyshev;
    if (s == "refined") return Spacing::Refined;
    throw DomainError("unknown grid spacing '" + s + "' (uniform, log, chebyshev, refined)");
}

const char* spacing_name(Spacing s) {
    switch (s) {
        case Spacing::Uniform: return "uniform";
        case Spacing::Log: return "log";
        case Spacing::Chebyshev: return "chebyshev";
        case Spacing::Refined: return "refined";
    }
    return "";
}

double parse_number(const std::string& s, const std::string& whole) {
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DomainError("grid '" + whole + "': cannot parse number '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw DomainError("grid '" + whole + "': bad number '" + s + "'");
    return v;
}

// points of [0,1] clustered at both ends
double lobatto(long i, long n) { return n == 1 ? 0.5 : 0.5 * (1.0 - std::cos(kPi * i / (n - 1))); }

Json echo(const Approximant& a, const Target& t) {
    Json j;
    j["approximant"] = a.describe();
    j["target"] = t.describe();
    return j;
}

double slack(Kind side, double target, double approx) {
    return side == Kind::Minorant ? target - approx : approx - target;
}

}  // namespace

std::string claim_name(Claim c) {
    switch (c) {
        case Claim::SignTwoSided: return "SignTwoSided";
        case Claim::Minorant: return "Minorant";
        case Claim::Majorant: return "Majorant";
        case Claim::NodeInterp: return "NodeInterp";
        case Claim::L1Match: return "L1Match";
        case Claim::TypeBound: return "TypeBound";
        case Claim::Identity: return "Identity";
    }
    return "";
}

GridSpec GridSpec::parse(const std::string& text) {
    GridSpec g;
    std::stringstream all(text);
    std::string piece;
    while (std::getline(all, piece, '+')) {
        std::vector<std::string> f;
        std::stringstream ps(piece);
        std::string tok;
        while (std::getline(ps, tok, ':')) f.push_back(tok);
        if (f.size() < 3 || f.size() > 4)
            throw DomainError("grid '" + text + "': expected min:max:count[:spacing]");
        GridPiece p;
        p.min = parse_number(f[0], text);
        p.max = parse_number(f[1], text);
        const double cnt = parse_number(f[2], text);
        if (!(cnt >= 1) || cnt != std::floor(cnt) || cnt > 1e8)
            throw DomainError("grid '" + text + "': count must be a positive integer");
        p.count = static_cast<long>(cnt);
        if (f.size() == 4) p.spacing = parse_spacing(f[3]);
        if (!(p.min <= p.max)) throw DomainError("grid '" + text + "': min must not exceed max");
        if (p.spacing == Spacing::Log && !(p.min * p.max > 0))
            throw DomainError("grid '" + text + "': log spacing needs min and max of the same sign, both nonzero");
        g.pieces.push_back(p);
    }
    if (g.pieces.empty()) throw DomainError("empty grid specification");
    return g;
}

std::string GridSpec::text() const {
    std::string s;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        if (i) s += "+";
        s += fmt(p.min) + ":" + fmt(p.max) + ":" + std::to_string(p.count) + ":" + spacing_name(p.spacing);
    }
    return s;
}

Json GridSpec::to_json() const {
    Json j;
    j["text"] = text();
    Json arr = Json::array();
    for (const auto& p : pieces) {
        Json q;
        q["min"] = p.min;
        q["max"] = p.max;
        q["count"] = p.count;
        q["spacing"] = spacing_name(p.spacing);
        arr.push_back(q);
    }
    j["pieces"] = arr;
    return j;
}

std::vector<double> make_grid(const GridSpec& g, double delta) {
    if (!(delta > 0)) throw DomainError("grid: delta must be positive");
    std::vector<double> x;
    for (const auto& p : g.pieces) {
        const long n = p.count;
        switch (p.spacing) {
            case Spacing::Uniform:
                for (long i = 0; i < n; ++i) x.push_back(n == 1 ? p.min : p.min + (p.max - p.min) * i / (n - 1));
                break;
            case Spacing::Chebyshev:
                for (long i = 0; i < n; ++i) x.push_back(p.min + (p.max - p.min) * lobatto(i, n));
                break;
            case Spacing::Log: {
                const double s = p.min > 0 ? 1.0 : -1.0;
                const double a = std::log(std::abs(p.min)), b = std::log(std::abs(p.max));
                for (long i = 0; i < n; ++i) x.push_back(s * std::exp(n == 1 ? a : a + (b - a) * i / (n - 1)));
                break;
            }
            case Spacing::Refined: {
                // Lobatto points inside every node interval [m/delta, (m+1)/delta] meeting [min, max]
                const long m0 = static_cast<long>(std::floor(p.min * delta));
                const long m1 = static_cast<long>(std::ceil(p.max * delta));
                const long cells = std::max(1L, m1 - m0);
                const long per = std::max(3L, n / cells + 1);
                for (long m = m0; m < m1 || m == m0; ++m) {
                    const double lo = m / delta, hi = (m + 1) / delta;
                    for (long i = 0; i < per; ++i) {
                        const double v = lo + (hi - lo) * lobatto(i, per);
                        if (v >= p.min && v <= p.max) x.push_back(v);
                    }
                }
                x.push_back(p.min);
                x.push_back(p.max);
                break;
            }
        }
    }
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    return x;
}

Json Certificate::to_json() const {
    Json j;
    j["schema"] = "bsx-cert/1";
    j["claim"] = claim_name(claim);
    j["params_echo"] = params_echo;
    j["worst_margin"] = worst_margin;
    j["worst_location"] = worst_location;
    j["grid_spec"] = grid_spec;
    j["passed"] = passed;
    j["tol_used"] = tol_used;
    j["details"] = details.is_null() ? Json::object() : details;
    return j;
}

double certificate_tol(const Approximant& a) { return std::max(1e-9, 10.0 * a.tol()); }

Certificate verify_sign_two_sided(const Approximant& approx, const Target& target, const GridSpec& grid) {
    const double d = approx.delta();
    const auto xs = make_grid(grid, d);
    std::vector<double> margin(xs.size());
    parallel_fill(margin, [&](std::size_t i) {
        const double x = xs[i];
        const double u = d * x;
        if (std::abs(u - std::nearbyint(u)) < 1e-12) return HUGE_VAL;  // exact zero at the nodes
        return sin_pi(u) * (target.value(x) - approx.at(x));
    });
    Certificate c;
    c.claim = Claim::SignTwoSided;
    c.params_echo = echo(approx, target);
    c.grid_spec = grid.to_json();
    c.tol_used = certificate_tol(approx);
    const std::size_t w = argmin(margin);
    long checked = 0;
    for (double m : margin) checked += m != HUGE_VAL;
    c.worst_margin = checked ? margin[w] : 0.0;
    c.worst_location = checked ? xs[w] : 0.0;
    c.passed = c.worst_margin >= -c.tol_used;
    c.details["points"] = static_cast<long>(xs.size());
    c.details["points_checked"] = checked;
    return c;
}

Certificate verify_one_sided(const Approximant& approx, const Target& target, Kind side, const GridSpec& grid) {
    if (side == Kind::TwoSided) throw DomainError("verify_one_sided: side must be minorant or majorant");
    const auto xs = make_grid(grid, approx.delta());
    std::vector<double> margin(xs.size());
    parallel_fill(margin, [&](std::size_t i) {
        const double x = xs[i];
        const double a = approx.at(x);
        if (x == 0) {
            // compare with the adverse one-sided limit of the jump
            const auto lim = target.limits(0.0);
            const double t = side == Kind::Minorant ? std::min(lim.first, lim.second) : std::max(lim.first, lim.second);
            return slack(side, t, a);
        }
        return slack(side, target.value(x), a);
    });
    Certificate c;
    c.claim = side == Kind::Minorant ? Claim::Minorant : Claim::Majorant;
    c.params_echo = echo(approx, target);
    c.params_echo["side"] = kind_name(side);
    c.grid_spec = grid.to_json();
    c.tol_used = certificate_tol(approx);
    const std::size_t w = argmin(margin);
    c.worst_margin = margin[w];
    c.worst_location = xs[w];
    c.passed = c.worst_margin >= -c.tol_used;
    c.details["points"] = static_cast<long>(xs.size());
    const auto lim = target.limits(0.0);
    c.details["jump_checked"] = std::binary_search(xs.begin(), xs.end(), 0.0);
    c.details["approx_at_0"] = approx.at(0.0);
    c.details["target_limits_at_0"] = Json::array({lim.first, lim.second});
    return c;
}

Certificate verify_nodes(const Approximant& approx, const Target& target, long n_lo, long n_hi,
                         bool with_derivatives) {
    if (n_lo > n_hi) throw DomainError("verify_nodes: empty node range");
    if (with_derivatives && approx.kind() == Kind::TwoSided)
        throw DomainError("verify_nodes: derivative interpolation applies to one-sided kinds only");
    const double d = approx.delta();
    const double tol_v = certificate_tol(approx);
    const double tol_d = std::max(1e-7, tol_v);
    const double h = 1e-5;
    std::vector<long> nodes;
    for (long n = n_lo; n <= n_hi; ++n)
        if (n != 0) nodes.push_back(n);
    std::vector<double> rv(nodes.size()), rd(nodes.size(), 0.0);
    parallel_fill(rv, [&](std::size_t i) {
        const double x = nodes[i] / d;
        return std::abs(approx.at(x) - target.value(x));
    });
    if (with_derivatives) {
        parallel_fill(rd, [&](std::size_t i) {
            const double x = nodes[i] / d;
            const double fd =
                (-approx.at(x + 2 * h) + 8 * approx.at(x + h) - 8 * approx.at(x - h) + approx.at(x - 2 * h)) / (12 * h);
            return std::abs(fd - target.derivative(x));
        });
    }
    Certificate c;
    c.claim = Claim::NodeInterp;
    c.params_echo = echo(approx, target);
    c.params_echo["n_range"] = Json::array({n_lo, n_hi});
    c.params_echo["with_derivatives"] = with_derivatives;
    c.grid_spec["nodes"] = static_cast<long>(nodes.size());
    c.tol_used = tol_v;
    // derivative residuals enter the margin rescaled to the value tolerance
    std::vector<double> margin(nodes.size());
    double max_v = 0, max_d = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        margin[i] = std::min(-rv[i], -rd[i] * tol_v / tol_d);
        max_v = std::max(max_v, rv[i]);
        max_d = std::max(max_d, rd[i]);
    }
    if (nodes.empty()) {
        c.worst_margin = 0;
        c.worst_location = 0;
    } else {
        const std::size_t w = argmin(margin);
        c.worst_margin = margin[w];
        c.worst_location = nodes[w] / d;
    }
    c.passed = c.worst_margin >= -c.tol_used;
    c.details["max_value_residual"] = max_v;
    c.details["max_derivative_residual"] = max_d;
    c.details["tol_values"] = tol_v;
    c.details["tol_derivatives"] = tol_d;
    c.details["fd_step"] = h;
    return c;
}

QuadResult numeric_l1_error(const Approximant& approx, const Target& target, double tol) {
    if (!(tol > 0)) throw DomainError("numeric_l1_error: tolerance must be positive");
    const double d = approx.delta();
    const Kind kind = approx.kind();
    auto f = [&](double u) {
        const double x = u / d;
        const double t = target.value(x), a = approx.at(x);
        const double v = kind == Kind::TwoSided ? std::abs(t - a) : slack(kind, t, a);
        return v / d;
    };
    const double ptol = tol * 1e-3;
    long evals = 0;
    // contribution of the node interval [n, n+1] (node variable)
    auto cell = [&](long n) {
        if (n == -1 || n == 0) return integrate_tanh_sinh(f, n, n + 1.0, ptol).value;
        return integrate_gk(f, n, n + 1.0, ptol).value;
    };
    // S(N) over [-N, N], N = N0 2^j. The cell contributions are smooth in n beyond the first few cells,
    // so S(N) = S - sum_k a_k N^{-k}; Richardson in 1/N.
    const long n0 = 16;
    const int max_level = 10;
    const int max_order = 5;
    std::vector<std::vector<double>> R;
    CompensatedSum<double> total;
    long done = 0;
    double err = HUGE_VAL, best = 0;
    for (int j = 0; j <= max_level; ++j) {
        const long N = n0 << j;
        std::vector<long> idx;
        for (long n = done; n < N; ++n) {
            idx.push_back(n);
            idx.push_back(-n - 1);
        }
        std::vector<double> part(idx.size());
        parallel_fill(part, [&](std::size_t i) { return cell(idx[i]); });
        for (double p : part) total.add(p);
        evals += static_cast<long>(idx.size()) * 15;
        done = N;
        std::vector<double> row{total.value()};
        for (int m = 1; m <= j && m <= max_order; ++m) {
            const double s = std::ldexp(1.0, m);
            row.push_back((s * row[m - 1] - R[j - 1][m - 1]) / (s - 1.0));
        }
        R.push_back(row);
        if (j >= 2) {
            const int m = std::min(j - 1, max_order);
            // the last two orders on the newest row also have to agree
            err = std::max(std::abs(R[j][m] - R[j - 1][m]), std::abs(R[j][m] - R[j][m - 1]));
            best = R[j].back();
            if (j >= 4 && err <= tol * std::max(1.0, std::abs(best))) return {best, err, evals};
        }
    }
    throw NonConvergence("numeric_l1_error: extrapolated value did not settle (last change " + fmt(err) + ")");
}

Certificate verify_l1_match(const Approximant& approx, const Target& target, double expected, double rel_tol,
                            double tol) {
    const auto r = numeric_l1_error(approx, target, tol);
    Certificate c;
    c.claim = Claim::L1Match;
    c.params_echo = echo(approx, target);
    c.params_echo["expected"] = expected;
    c.params_echo["rel_tol"] = rel_tol;
    c.tol_used = rel_tol;
    const double rel = std::abs(r.value - expected) / std::max(std::abs(expected), 1e-300);
    c.worst_margin = -rel;
    c.worst_location = 0.0;
    c.passed = c.worst_margin >= -c.tol_used;
    c.grid_spec = Json::object();
    c.details["numeric"] = r.value;
    c.details["numeric_err_estimate"] = r.abs_err;
    c.details["relative_mismatch"] = rel;
    return c;
}

Certificate verify_identity(const std::string& name, double lhs, double rhs, double tol, Json params) {
    Certificate c;
    c.claim = Claim::Identity;
    c.params_echo = std::move(params);
    c.params_echo["identity"] = name;
    c.tol_used = tol;
    c.worst_margin = -std::abs(lhs - rhs);
    c.worst_location = 0.0;
    c.grid_spec = Json::object();
    c.passed = c.worst_margin >= -tol;
    c.details["lhs"] = lhs;
    c.details["rhs"] = rhs;
    return c;
}

Certificate estimate_exponential_type(const Approximant& approx, int k_expected, double y_max) {
    if (k_expected != 1 && k_expected != 2) throw DomainError("k must be 1 or 2");
    if (!(y_max >= 2)) throw DomainError("y_max must be at least 2");
    const double rate = k_expected * kPi * approx.delta();
    // |approx(iy)| is about e^{rate y}; keep well inside binary64
    if (rate * y_max > 650.0)
        throw Overflow("y_max = " + fmt(y_max) + " overflows binary64 at type " + fmt(rate) + "; need y_max <= " +
                       fmt(650.0 / rate));
    const int m = 41;
    std::vector<double> ys(m), logs(m);
    for (int i = 0; i < m; ++i) ys[i] = 0.5 * y_max + 0.5 * y_max * i / (m - 1);
    parallel_fill(logs, [&](std::size_t i) { return std::log(std::abs(approx(cplx(0.0, ys[i])))); });
    // least squares for log|F(iy)| = c0 + slope*y + p*log(y); the log term absorbs the polynomial prefactor
    double A[3][3] = {}, rhs[3] = {};
    for (int i = 0; i < m; ++i) {
        if (!std::isfinite(logs[i])) throw Overflow("approximant not finite on the imaginary axis");
        const double b[3] = {1.0, ys[i], std::log(ys[i])};
        for (int r = 0; r < 3; ++r) {
            rhs[r] += b[r] * logs[i];
            for (int q = 0; q < 3; ++q) A[r][q] += b[r] * b[q];
        }
    }
    for (int c0 = 0; c0 < 3; ++c0) {
        int piv = c0;
        for (int r = c0 + 1; r < 3; ++r)
            if (std::abs(A[r][c0]) > std::abs(A[piv][c0])) piv = r;
        std::swap(A[c0], A[piv]);
        std::swap(rhs[c0], rhs[piv]);
        for (int r = c0 + 1; r < 3; ++r) {
            const double f = A[r][c0] / A[c0][c0];
            for (int q = c0; q < 3; ++q) A[r][q] -= f * A[c0][q];
            rhs[r] -= f * rhs[c0];
        }
    }
    double coef[3];
    for (int r = 2; r >= 0; --r) {
        double v = rhs[r];
        for (int q = r + 1; q < 3; ++q) v -= A[r][q] * coef[q];
        coef[r] = v / A[r][r];
    }
    const double slope = coef[1];
    // envelope constant sup_y log|F(iy)| - log(1+y) - rate*y over [1, y_max]
    const int me = 60;
    std::vector<double> env(me);
    parallel_fill(env, [&](std::size_t i) {
        const double y = 1.0 + (y_max - 1.0) * i / (me - 1);
        return std::log(std::abs(approx(cplx(0.0, y)))) - std::log1p(y) - rate * y;
    });
    Certificate c;
    c.claim = Claim::TypeBound;
    c.params_echo["approximant"] = approx.describe();
    c.params_echo["k_expected"] = k_expected;
    c.params_echo["y_max"] = y_max;
    c.grid_spec["y_fit"] = Json::array({0.5 * y_max, y_max});
    c.grid_spec["samples"] = m;
    c.tol_used = certificate_tol(approx);
    c.worst_margin = 1.05 * rate - slope;
    c.worst_location = y_max;
    c.passed = c.worst_margin >= -c.tol_used;
    c.details["fitted_slope"] = slope;
    c.details["expected_slope"] = rate;
    c.details["relative_deviation"] = slope / rate - 1.0;
    c.details["log_power"] = coef[2];
    c.details["envelope_constant"] = *std::max_element(env.begin(), env.end());
    return c;
}

}  // namespace bsx
