#include "melnlab/jet.hpp"

#include <cmath>
#include <stdexcept>

#include "melnlab/errors.hpp"

namespace melnlab {

Jet::Jet(double base, std::size_t order, JetVar var) : base_(base), var_(var), c_(order + 1, 0.0) {}

Jet Jet::constant(double value, double base, std::size_t order, JetVar var) {
    Jet j(base, order, var);
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(double base, std::size_t order, JetVar var) {
    Jet j(base, order, var);
    j.c_[0] = base;
    if (order >= 1) j.c_[1] = 1.0;
    return j;
}

double Jet::derivative(std::size_t m) const {
    if (m > order()) return 0.0;
    double f = 1.0;
    for (std::size_t i = 2; i <= m; ++i) f *= static_cast<double>(i);
    return f * c_[m];
}

double Jet::eval(double h) const {
    double s = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) s = s * h + c_[i];
    return s;
}

void Jet::check_compatible(const Jet& o) const {
    if (o.c_.size() != c_.size()) throw std::invalid_argument("jet order mismatch");
    if (o.var_ != var_) throw std::invalid_argument("jet variable mismatch");
}

Jet& Jet::operator+=(const Jet& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Jet& Jet::operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
}

Jet& Jet::operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
}

Jet& Jet::operator+=(double s) {
    c_[0] += s;
    return *this;
}

Jet& Jet::operator-=(double s) {
    c_[0] -= s;
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

Jet& Jet::operator/=(double s) {
    for (double& v : c_) v /= s;
    return *this;
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (double& v : r.c_) v = -v;
    return r;
}

Jet Jet::differentiate() const {
    Jet r(base_, order(), var_);
    for (std::size_t i = 1; i < c_.size(); ++i) r.c_[i - 1] = static_cast<double>(i) * c_[i];
    return r;
}

Jet Jet::integrate() const {
    Jet r(base_, order(), var_);
    for (std::size_t i = 1; i < c_.size(); ++i) r.c_[i] = c_[i - 1] / static_cast<double>(i);
    return r;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b) {
    if (a.order() != b.order()) throw std::invalid_argument("jet order mismatch");
    if (a.var() != b.var()) throw std::invalid_argument("jet variable mismatch");
    Jet r(a.base(), a.order(), a.var());
    const std::size_t n = a.order();
    for (std::size_t i = 0; i <= n; ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; i + j <= n; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    if (a.order() != b.order()) throw std::invalid_argument("jet order mismatch");
    if (b[0] == 0.0) throw DomainError("jet division by a series with zero constant term");
    Jet r(a.base(), a.order(), a.var());
    for (std::size_t n = 0; n <= a.order(); ++n) {
        double s = a[n];
        for (std::size_t k = 1; k <= n; ++k) s -= b[k] * r[n - k];
        r[n] = s / b[0];
    }
    return r;
}

Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return (-a) += s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }

Jet operator/(double s, const Jet& a) {
    Jet one = Jet::constant(s, a.base(), a.order(), a.var());
    return one / a;
}

Jet exp(const Jet& a) {
    Jet r(a.base(), a.order(), a.var());
    r[0] = std::exp(a[0]);
    for (std::size_t n = 1; n <= a.order(); ++n) {
        double s = 0.0;
        for (std::size_t k = 1; k <= n; ++k) s += static_cast<double>(k) * a[k] * r[n - k];
        r[n] = s / static_cast<double>(n);
    }
    return r;
}

Jet log(const Jet& a) {
    if (!(a[0] > 0.0)) throw DomainError("jet log of non-positive value");
    Jet r(a.base(), a.order(), a.var());
    r[0] = std::log(a[0]);
    for (std::size_t n = 1; n <= a.order(); ++n) {
        double s = a[n];
        for (std::size_t k = 1; k < n; ++k) s -= static_cast<double>(k) * r[k] * a[n - k] / static_cast<double>(n);
        r[n] = s / a[0];
    }
    return r;
}

Jet pow(const Jet& a, double p) {
    if (!(a[0] > 0.0)) throw DomainError("jet real power of non-positive value");
    Jet r(a.base(), a.order(), a.var());
    r[0] = std::pow(a[0], p);
    for (std::size_t n = 1; n <= a.order(); ++n) {
        double s = 0.0;
        for (std::size_t k = 1; k <= n; ++k)
            s += (p * static_cast<double>(k) - static_cast<double>(n - k)) * a[k] * r[n - k];
        r[n] = s / (static_cast<double>(n) * a[0]);
    }
    return r;
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

Jet powi(const Jet& a, int p) {
    if (p < 0) return 1.0 / powi(a, -p);
    Jet result = Jet::constant(1.0, a.base(), a.order(), a.var());
    Jet sq = a;
    unsigned e = static_cast<unsigned>(p);
    while (e) {
        if (e & 1u) result = result * sq;
        e >>= 1u;
        if (e) sq = sq * sq;
    }
    return result;
}

namespace {

void sincos_series(const Jet& a, Jet& s, Jet& c) {
    s = Jet(a.base(), a.order(), a.var());
    c = Jet(a.base(), a.order(), a.var());
    s[0] = std::sin(a[0]);
    c[0] = std::cos(a[0]);
    for (std::size_t n = 1; n <= a.order(); ++n) {
        double ss = 0.0, cc = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            const double ka = static_cast<double>(k) * a[k];
            ss += ka * c[n - k];
            cc -= ka * s[n - k];
        }
        s[n] = ss / static_cast<double>(n);
        c[n] = cc / static_cast<double>(n);
    }
}

}  // namespace

Jet sin(const Jet& a) {
    Jet s, c;
    sincos_series(a, s, c);
    return s;
}

Jet cos(const Jet& a) {
    Jet s, c;
    sincos_series(a, s, c);
    return c;
}

Jet atan(const Jet& a) {
    Jet d = a.differentiate() / (1.0 + a * a);
    Jet r = d.integrate();
    r[0] = std::atan(a[0]);
    return r;
}

Jet compose_offset(const std::vector<double>& f, const Jet& g) {
    Jet h = g;
    h[0] = 0.0;
    Jet r = Jet::constant(0.0, g.base(), g.order(), g.var());
    for (std::size_t d = f.size(); d-- > 0;) {
        r = r * h;
        r[0] += f[d];
    }
    return r;
}

Jet compose(const Jet& f, const Jet& g) {
    if (std::abs(f.base() - g.value()) > 1e-12 * (1.0 + std::abs(g.value())))
        throw std::invalid_argument("compose: outer jet base differs from inner value");
    return compose_offset(f.coeffs(), g);
}

}  // namespace melnlab
