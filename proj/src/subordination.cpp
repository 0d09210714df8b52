#include "bsx/subordination.hpp"

#include "bsx/errors.hpp"
#include "bsx/node_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace bsx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_number(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DomainError("cannot parse " + what + " from '" + s + "'");
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct Binomial {
    double c[kTailDerivs][kTailDerivs] = {};
    double fact[kTailDerivs + 1] = {};
    Binomial() {
        for (int n = 0; n < kTailDerivs; ++n) {
            c[n][0] = c[n][n] = 1.0;
            for (int k = 1; k < n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
        }
        fact[0] = 1.0;
        for (int n = 1; n <= kTailDerivs; ++n) fact[n] = fact[n - 1] * n;
    }
};
const Binomial& binom() {
    static const Binomial b;
    return b;
}

cplx expm1c(cplx x) {
    if (std::abs(x) < 1e-3) return x * (1.0 + x * (0.5 + x * (1.0 / 6 + x / 24.0)));
    return std::exp(x) - 1.0;
}

// 1/mu - 1/(e^mu - 1)
double q_plus_half(double mu) {
    if (mu <= 1) return q_function(mu) + 0.5;
    return 1.0 / mu - 1.0 / std::expm1(mu);
}

// tanh(mu/2)/mu - 1/2
double two_sided_core(double mu) {
    if (mu < 1e-2) {
        const double m2 = mu * mu;
        return -m2 / 24 + m2 * m2 / 240 - 17 * m2 * m2 * m2 / 40320;
    }
    return std::tanh(0.5 * mu) / mu - 0.5;
}

}  // namespace

Measure Measure::atoms(std::vector<Atom> list) {
    if (list.empty()) throw DomainError("atom list must not be empty");
    for (const auto& at : list) {
        if (!(at.lambda > 0) || !std::isfinite(at.lambda)) throw DomainError("atom positions must be positive");
        if (!(at.weight >= 0) || !std::isfinite(at.weight)) throw DomainError("atom weights must be nonnegative");
    }
    Measure m;
    m.type_ = Type::Atoms;
    m.atoms_ = std::move(list);
    std::ostringstream os;
    os.precision(17);
    os << "atoms:";
    for (size_t i = 0; i < m.atoms_.size(); ++i) os << (i ? "," : "") << m.atoms_[i].lambda << ":" << m.atoms_[i].weight;
    m.spec_ = os.str();
    m.finish();
    return m;
}

Measure Measure::power(double alpha) {
    if (!(alpha > 0 && alpha < 2)) throw ConstraintViolation("power density requires 0 < alpha < 2");
    Measure m;
    m.type_ = Type::Power;
    m.alpha_ = alpha;
    std::ostringstream os;
    os.precision(17);
    os << "power:alpha=" << alpha;
    m.spec_ = os.str();
    m.finish();
    return m;
}

Measure Measure::table(std::vector<double> lambda, std::vector<double> density) {
    if (lambda.size() < 2 || lambda.size() != density.size())
        throw DomainError("density table needs at least two rows of (lambda, density)");
    for (size_t i = 0; i < lambda.size(); ++i) {
        if (!(lambda[i] >= 0) || !std::isfinite(lambda[i])) throw DomainError("table lambda must be >= 0");
        if (!(density[i] >= 0) || !std::isfinite(density[i])) throw DomainError("table density must be >= 0");
        if (i && !(lambda[i] > lambda[i - 1])) throw DomainError("table lambda must be strictly increasing");
    }
    Measure m;
    m.type_ = Type::Table;
    m.grid_ = std::move(lambda);
    m.dens_ = std::move(density);
    m.spec_ = "table";
    m.finish();
    return m;
}

Measure Measure::load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open density table '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DomainError("density table '" + path + "' is empty");
    std::string header = trim(line);
    std::transform(header.begin(), header.end(), header.begin(), ::tolower);
    if (header.find("lambda") == std::string::npos || header.find("density") == std::string::npos)
        throw DomainError("density table header must name the columns lambda,density");
    std::vector<double> l, d;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DomainError("density table row without comma: " + line);
        l.push_back(parse_number(trim(line.substr(0, comma)), "lambda"));
        d.push_back(parse_number(trim(line.substr(comma + 1)), "density"));
    }
    Measure m = table(std::move(l), std::move(d));
    m.spec_ = "table:" + path;
    return m;
}

Measure Measure::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw DomainError("measure spec '" + spec + "' has no type prefix");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (kind == "power") {
        if (rest.rfind("alpha=", 0) != 0) throw DomainError("power measure expects power:alpha=<value>");
        return power(parse_number(rest.substr(6), "alpha"));
    }
    if (kind == "atoms") {
        std::vector<Atom> list;
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto c2 = item.find(':');
            if (c2 == std::string::npos) throw DomainError("atom '" + item + "' must be <lambda>:<weight>");
            list.push_back({parse_number(item.substr(0, c2), "atom position"),
                            parse_number(item.substr(c2 + 1), "atom weight")});
        }
        return atoms(std::move(list));
    }
    if (kind == "table") return load_table(rest);
    throw DomainError("unknown measure type '" + kind + "' (expected power, atoms or table)");
}

void Measure::finish() {
    switch (type_) {
        case Type::Atoms: {
            double mn = 0, mj = 0;
            for (const auto& at : atoms_) {
                mn += at.weight * at.lambda / (1 + at.lambda * at.lambda);
                mj += at.weight * at.lambda / (1 + at.lambda);
            }
            min_ = {true, mn};
            maj_ = {true, mj};
            break;
        }
        case Type::Power:
            // integral of lambda^{s-1}/(1+lambda^2) and lambda^{s-1}/(1+lambda), s = 2 - alpha
            min_ = {true, 0.5 * kPi / std::sin(0.5 * kPi * (2 - alpha_))};
            if (alpha_ > 1)
                maj_ = {true, kPi / std::sin(kPi * (2 - alpha_))};
            else
                maj_ = {false, kInf};
            break;
        case Type::Table:
            min_ = {true, table_integral([](double l) { return l / (1 + l * l); }, 1e-13)};
            maj_ = {true, table_integral([](double l) { return l / (1 + l); }, 1e-13)};
            break;
    }
}

double Measure::table_integral(const std::function<double(double)>& g, double tol) const {
    const size_t cells = grid_.size() - 1;
    double acc = 0.0;
    for (size_t i = 0; i < cells; ++i) {
        const double l0 = grid_[i], l1 = grid_[i + 1], d0 = dens_[i], d1 = dens_[i + 1];
        if (d0 == 0 && d1 == 0) continue;
        auto h = [&](double l) { return g(l) * (d0 + (d1 - d0) * (l - l0) / (l1 - l0)); };
        acc += integrate_gk(h, l0, l1, tol / cells).value;
    }
    return acc;
}

cplx Measure::table_integral_c(const std::function<cplx(double)>& g, double tol) const {
    const size_t cells = grid_.size() - 1;
    cplx acc = 0.0;
    for (size_t i = 0; i < cells; ++i) {
        const double l0 = grid_[i], l1 = grid_[i + 1], d0 = dens_[i], d1 = dens_[i + 1];
        if (d0 == 0 && d1 == 0) continue;
        auto h = [&](double l) -> cplx { return g(l) * (d0 + (d1 - d0) * (l - l0) / (l1 - l0)); };
        acc += integrate_gk(h, l0, l1, tol / cells).value;
    }
    return acc;
}

double Measure::integrate(const std::function<double(double)>& f, double tol) const {
    switch (type_) {
        case Type::Atoms: {
            CompensatedSum<double> s;
            for (const auto& at : atoms_) s.add(at.weight * f(at.lambda));
            return s.value();
        }
        case Type::Power: {
            const double al = alpha_;
            auto h = [&](double l) { return l > 0 ? f(l) * std::pow(l, -al) : 0.0; };
            const double head = integrate_tanh_sinh(h, 0.0, 1.0, tol).value;
            const double tail = integrate_semi_infinite(h, 1.0, 1.0, 0.0, tol).value;
            return head + tail;
        }
        case Type::Table: return table_integral(f, tol);
    }
    return 0.0;
}

double Measure::right_limit_at_zero() const {
    if (!has_maj()) return kInf;
    if (type_ == Type::Power) return -std::tgamma(1 - alpha_);
    return integrate([](double l) { return -std::expm1(-l); });
}

double Measure::T(double a, double x) const {
    if (x < 0) return 0.0;
    if (x == 0) {
        if (!has_maj())
            throw DomainError("T_nu(a; 0) is unbounded for " + spec_ + " (the integral of 1-e^{-lambda} diverges)");
        return 0.5 * right_limit_at_zero();
    }
    switch (type_) {
        case Type::Atoms: {
            double s = 0;
            for (const auto& at : atoms_) s += at.weight * (std::exp(-a * at.lambda * x) - std::exp(-at.lambda));
            return s;
        }
        case Type::Power: {
            const double lg = std::log(a * x);
            if (alpha_ == 1.0) return -lg;
            return std::tgamma(1 - alpha_) * std::expm1((alpha_ - 1) * lg);
        }
        case Type::Table:
            return table_integral([&](double l) { return std::exp(-a * l * x) - std::exp(-l); }, 1e-14);
    }
    return 0.0;
}

double Measure::T_derivative(int j, double a, double x) const {
    if (j < 1) return T(a, x);
    if (!(x > 0)) throw DomainError("T_nu derivative requires x > 0");
    switch (type_) {
        case Type::Atoms: {
            double s = 0;
            for (const auto& at : atoms_) {
                const double r = -a * at.lambda;
                s += at.weight * std::pow(r, j) * std::exp(r * x);
            }
            return s;
        }
        case Type::Power: {
            const double sign = (j % 2) ? -1.0 : 1.0;
            return sign * std::pow(a, j) * std::tgamma(j + 1 - alpha_) * std::pow(a * x, alpha_ - 1 - j);
        }
        case Type::Table:
            return table_integral(
                [&](double l) {
                    const double r = -a * l;
                    return std::pow(r, j) * std::exp(r * x);
                },
                1e-15);
    }
    return 0.0;
}

cplx Measure::T_complex(double a, cplx z) const {
    if (!(z.real() > 0)) throw DomainError("T_nu continuation is defined on Re z > 0");
    switch (type_) {
        case Type::Atoms: {
            cplx s = 0;
            for (const auto& at : atoms_) s += at.weight * (std::exp(-a * at.lambda * z) - std::exp(-at.lambda));
            return s;
        }
        case Type::Power: {
            const cplx lg = std::log(a * z);
            if (alpha_ == 1.0) return -lg;
            return std::tgamma(1 - alpha_) * expm1c((alpha_ - 1) * lg);
        }
        case Type::Table:
            return table_integral_c([&](double l) { return std::exp(-a * l * z) - std::exp(-l); }, 1e-14);
    }
    return 0.0;
}

Json Measure::describe() const {
    Json j;
    j["measure"] = spec_;
    j["min_growth"] = min_.finite;
    j["maj_growth"] = maj_.finite;
    return j;
}

GrowthResult check_growth(const Measure& m, Growth which) { return m.growth(which); }

double eval_Tnu(const Measure& m, double a, double x) {
    if (!m.has_min()) throw ConstraintViolation("measure " + m.spec() + " fails the growth condition");
    return m.T(a, x);
}

double eval_Tnu_prime(const Measure& m, double a, double x) {
    if (!m.has_min()) throw ConstraintViolation("measure " + m.spec() + " fails the growth condition");
    return m.T_derivative(1, a, x);
}

double coeff_K(const Measure& m, double a) {
    if (!m.has_min()) throw ConstraintViolation("coeff_K needs the growth condition int lambda/(1+lambda^2) dnu < inf");
    // the large-lambda form avoids subtracting two halves, whose roundoff would not decay
    return m.integrate([a](double l) {
        if (l <= 1) return -0.5 * std::tanh(0.5 * a * l) - 0.5 * std::expm1(-l);
        return eval_b(a * l) - 0.5 * std::exp(-l);
    });
}

double coeff_L(const Measure& m, double a) {
    if (!m.has_min()) throw ConstraintViolation("coeff_L needs the growth condition int lambda/(1+lambda^2) dnu < inf");
    return m.integrate([a](double l) {
        if (l <= 1) return eval_B_minus_one(-a * l) - std::expm1(-l);
        return eval_B(-a * l) - std::exp(-l);
    });
}

double coeff_M_extra(const Measure& m) {
    if (!m.has_maj())
        throw ConstraintViolation("majorant needs the growth condition int lambda/(1+lambda) dnu < inf, which fails for " +
                                  m.spec());
    return m.right_limit_at_zero();
}

namespace {
void check_kind(Kind kind, const Measure& m, double delta, bool need_delta = true) {
    if (kind == Kind::Majorant) {
        if (!m.has_maj())
            throw ConstraintViolation(
                "majorant needs the growth condition int lambda/(1+lambda) dnu < inf, which fails for " + m.spec());
    } else {
        if (!m.has_min())
            throw ConstraintViolation("the growth condition int lambda/(1+lambda^2) dnu < inf fails for " + m.spec());
        if (need_delta && !(delta >= 1))
            throw ConstraintViolation("the " + kind_name(kind) + " for a measure requires delta >= 1");
    }
    if (!(delta > 0) || !std::isfinite(delta)) throw ConstraintViolation("delta must be positive");
}
}  // namespace

double closed_form_error_nu(Kind kind, const Measure& m, double delta) {
    check_kind(kind, m, delta);
    std::function<double(double)> bracket;
    switch (kind) {
        // for lambda > 1 the constant halves are cancelled by hand, see coeff_K
        case Kind::TwoSided:
            bracket = [delta](double l) {
                const double mu = l / delta;
                if (l <= 1) return two_sided_core(mu) - 0.5 * std::expm1(-l);
                return (mu < 1e-2 ? two_sided_core(mu) + 0.5 : std::tanh(0.5 * mu) / mu) - 0.5 * std::exp(-l);
            };
            break;
        case Kind::Minorant:
            bracket = [delta](double l) {
                if (l <= 1) return q_function(l / delta) - 0.5 * std::expm1(-l);
                return q_plus_half(l / delta) - 0.5 * std::exp(-l);
            };
            break;
        case Kind::Majorant:
            bracket = [delta](double l) {
                if (l <= 1) return -q_function(l / delta) - 0.5 * std::expm1(-l);
                return 1.0 - q_plus_half(l / delta) - 0.5 * std::exp(-l);
            };
            break;
    }
    return m.integrate(bracket) / delta;
}

SubordinatedApproximant::SubordinatedApproximant(Kind kind, std::shared_ptr<const Measure> m, double delta,
                                                 double tol)
    : SubordinatedApproximant(kind, std::move(m), delta, tol, true) {}

SubordinatedApproximant::SubordinatedApproximant(Kind kind, std::shared_ptr<const Measure> m, double delta,
                                                 double tol, bool check_delta)
    : kind_(kind), m_(std::move(m)), delta_(delta), a_(1.0 / delta), tol_(tol) {
    if (!m_) throw DomainError("measure handle is null");
    check_kind(kind, *m_, delta, check_delta);
    pole_ = kind == Kind::TwoSided ? coeff_K(*m_, a_) : coeff_L(*m_, a_);
    if (kind == Kind::Majorant) extra_ = coeff_M_extra(*m_);
    cap_ = m_->type() == Measure::Type::Table ? 512 : 4096;
    val_.assign(cap_ + 1, 0.0);
    der_.assign(cap_ + 1, 0.0);
    alt_.assign(cap_ + 1, 0.0);
    for (long n = 1; n <= cap_; ++n) {
        val_[n] = m_->T(a_, static_cast<double>(n));
        der_[n] = m_->T_derivative(1, a_, static_cast<double>(n));
        alt_[n] = (n % 2 ? -val_[n] : val_[n]);
    }
}

double SubordinatedApproximant::node_value(long n) const {
    return n <= cap_ ? val_[n] : m_->T(a_, static_cast<double>(n));
}

double SubordinatedApproximant::node_slope(long n) const {
    return n <= cap_ ? der_[n] : m_->T_derivative(1, a_, static_cast<double>(n));
}

void SubordinatedApproximant::tail_derivs(long N, double* out) const {
    const bool cache = m_->type() == Measure::Type::Table;
    if (cache) {
        std::lock_guard<std::mutex> lock(cache_mu_);
        auto it = tail_cache_.find(N);
        if (it != tail_cache_.end()) {
            std::copy(it->second.begin(), it->second.end(), out);
            return;
        }
    }
    for (int j = 0; j < kTailDerivs; ++j) out[j] = m_->T_derivative(j, a_, static_cast<double>(N));
    if (cache) {
        std::lock_guard<std::mutex> lock(cache_mu_);
        tail_cache_.emplace(N, std::vector<double>(out, out + kTailDerivs));
    }
}

cplx SubordinatedApproximant::series(cplx w, const blocks::NodeFrame& f) const {
    long N = std::max(64L, static_cast<long>(std::ceil(w.real())) + 32);
    if (m_->type() == Measure::Type::Table) N = ((N + 31) / 32) * 32;  // few distinct tails to cache
    const double* val = val_.data();
    const double* der = der_.data();
    const double* alt = alt_.data();
    std::vector<double> xv, xd, xa;
    if (N - 1 > cap_) {
        xv.assign(val_.begin(), val_.end());
        xd.assign(der_.begin(), der_.end());
        xa.assign(alt_.begin(), alt_.end());
        for (long n = cap_ + 1; n < N; ++n) {
            xv.push_back(node_value(n));
            xd.push_back(node_slope(n));
            xa.push_back(n % 2 ? -xv.back() : xv.back());
        }
        val = xv.data();
        der = xd.data();
        alt = xa.data();
    }
    double d[kTailDerivs];
    tail_derivs(N, d);
    const auto& B = binom();
    const bool node_inside = f.n0 >= 1 && f.n0 < N;
    cplx td[kTailDerivs];
    if (kind_ == Kind::TwoSided) {
        // f(t) = T(t)/(w-t); f^(k) = sum_j C(k,j) T^(j) (k-j)!/(w-t)^{k-j+1}
        const cplx r = 1.0 / (w - static_cast<double>(N));
        cplx rp[kTailDerivs + 1];
        rp[0] = r;
        for (int i = 1; i <= kTailDerivs; ++i) rp[i] = rp[i - 1] * r;
        for (int k = 0; k < kTailDerivs; ++k) {
            cplx s = 0.0;
            for (int j = 0; j <= k; ++j) s += B.c[k][j] * d[j] * B.fact[k - j] * rp[k - j];
            td[k] = s;
        }
        const cplx tail = boole_tail(td, kTailDerivs);
        const cplx S = kernels::sum_simple_skip(alt, 1, N, f.n0, w) + (N % 2 ? -tail : tail);
        cplx out = f.s * S;
        if (node_inside) out += val[f.n0] * sinc(f.u);
        return out;
    }
    // g(t) = T(t)/(t-w); g^(m) = sum_j C(m,j) T^(j) (-1)^{m-j} (m-j)!/(t-w)^{m-j+1}
    const cplx r = 1.0 / (static_cast<double>(N) - w);
    cplx rp[kTailDerivs + 1];
    rp[0] = r;
    for (int i = 1; i <= kTailDerivs; ++i) rp[i] = rp[i - 1] * r;
    for (int m = 0; m < kTailDerivs; ++m) {
        cplx s = 0.0;
        for (int j = 0; j <= m; ++j) s += B.c[m][j] * d[j] * ((m - j) % 2 ? -1.0 : 1.0) * B.fact[m - j] * rp[m - j];
        td[m] = s;
    }
    const cplx S = kernels::sum_paired_skip(val, der, 1, N, f.n0, w) + telescoping_tail(td, kTailDerivs);
    cplx out = f.s2 * S;
    if (node_inside) {
        const cplx su = sinc(f.u);
        out += su * su * (val[f.n0] + der[f.n0] * f.u);
    }
    return out;
}

cplx SubordinatedApproximant::series_part(cplx w) const { return series(w, blocks::frame(w)); }

cplx SubordinatedApproximant::eval_node(cplx w) const {
    const auto f = blocks::frame(w);
    const cplx s = series(w, f);
    switch (kind_) {
        case Kind::TwoSided: return s + pole_ * sinc(w);
        case Kind::Minorant: return s + pole_ * blocks::Q1(w);
        case Kind::Majorant: {
            const cplx sw = sinc(w);
            return s + pole_ * blocks::Q1(w) + extra_ * sw * sw;
        }
    }
    return 0.0;
}

Json SubordinatedApproximant::describe() const {
    Json j;
    j["family"] = "measure";
    j["kind"] = kind_name(kind_);
    j["measure"] = m_->spec();
    j["delta"] = delta_;
    j["tol"] = tol_;
    return j;
}

double MeasureTarget::derivative(double x) const {
    if (x > 0) return m_->T_derivative(1, 1.0, x);
    if (x < 0) return 0.0;
    throw DomainError("target derivative undefined at x = 0");
}

std::pair<double, double> MeasureTarget::limits(double x) const {
    if (x == 0) return {0.0, m_->right_limit_at_zero()};
    const double v = value(x);
    return {v, v};
}

Json MeasureTarget::describe() const {
    Json j;
    j["target"] = "subordinated";
    j["measure"] = m_->spec();
    return j;
}

namespace {
cplx eval_checked(const SubordinatedApproximant& h, Kind want, cplx z) {
    if (h.kind() != want)
        throw DomainError("handle is a " + kind_name(h.kind()) + ", not a " + kind_name(want));
    return h(z);
}
}  // namespace

cplx eval_Knu(const SubordinatedApproximant& h, cplx z) { return eval_checked(h, Kind::TwoSided, z); }
cplx eval_Lnu(const SubordinatedApproximant& h, cplx z) { return eval_checked(h, Kind::Minorant, z); }
cplx eval_Mnu(const SubordinatedApproximant& h, cplx z) { return eval_checked(h, Kind::Majorant, z); }

}  // namespace bsx
