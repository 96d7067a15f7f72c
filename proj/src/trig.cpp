#include "melnlab/trig.hpp"

#include <algorithm>
#include <cmath>

namespace melnlab {

using cd = std::complex<double>;

TrigPoly::TrigPoly(int max_mode) : M_(max_mode), c_(2 * max_mode + 1, cd(0.0)) {}

TrigPoly TrigPoly::constant(double v) {
    TrigPoly p(0);
    p.c_[0] = v;
    return p;
}

TrigPoly TrigPoly::cos_mode(int m, double scale) {
    if (m == 0) return constant(scale);
    TrigPoly p(m);
    p.set_coeff(m, cd(0.5 * scale, 0.0));
    return p;
}

TrigPoly TrigPoly::sin_mode(int m, double scale) {
    if (m == 0) return constant(0.0);
    TrigPoly p(m);
    // sin mθ = (e^{imθ} - e^{-imθ}) / 2i
    p.set_coeff(m, cd(0.0, -0.5 * scale));
    return p;
}

std::complex<double> TrigPoly::coeff(int m) const {
    if (std::abs(m) > M_) return cd(0.0);
    return c_[static_cast<std::size_t>(m + M_)];
}

void TrigPoly::set_coeff(int m, std::complex<double> v) {
    grow(std::abs(m));
    c_[static_cast<std::size_t>(m + M_)] = v;
    c_[static_cast<std::size_t>(-m + M_)] = std::conj(v);
    if (m == 0) c_[static_cast<std::size_t>(M_)] = cd(v.real(), 0.0);
}

void TrigPoly::grow(int M) {
    if (M <= M_) return;
    std::vector<cd> n(2 * M + 1, cd(0.0));
    for (int m = -M_; m <= M_; ++m) n[static_cast<std::size_t>(m + M)] = c_[static_cast<std::size_t>(m + M_)];
    c_ = std::move(n);
    M_ = M;
}

double TrigPoly::eval(double theta) const {
    double s = c_[static_cast<std::size_t>(M_)].real();
    for (int m = 1; m <= M_; ++m) {
        const cd e(std::cos(m * theta), std::sin(m * theta));
        s += 2.0 * (c_[static_cast<std::size_t>(m + M_)] * e).real();
    }
    return s;
}

std::vector<double> TrigPoly::taylor(double theta0, int order) const {
    std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
    out[0] = c_[static_cast<std::size_t>(M_)].real();
    for (int m = 1; m <= M_; ++m) {
        const cd e(std::cos(m * theta0), std::sin(m * theta0));
        cd term = c_[static_cast<std::size_t>(m + M_)] * e;
        const cd im(0.0, static_cast<double>(m));
        double fact = 1.0;
        for (int p = 0; p <= order; ++p) {
            if (p > 0) fact *= p;
            out[static_cast<std::size_t>(p)] += 2.0 * term.real() / fact;
            term *= im;
        }
    }
    return out;
}

TrigPoly TrigPoly::derivative() const {
    TrigPoly d(M_);
    for (int m = -M_; m <= M_; ++m)
        d.c_[static_cast<std::size_t>(m + M_)] = c_[static_cast<std::size_t>(m + M_)] * cd(0.0, static_cast<double>(m));
    return d;
}

bool TrigPoly::is_zero(double tol) const {
    return std::all_of(c_.begin(), c_.end(), [tol](const cd& v) { return std::abs(v) <= tol; });
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
    grow(o.M_);
    for (int m = -o.M_; m <= o.M_; ++m) c_[static_cast<std::size_t>(m + M_)] += o.c_[static_cast<std::size_t>(m + o.M_)];
    return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& o) {
    grow(o.M_);
    for (int m = -o.M_; m <= o.M_; ++m) c_[static_cast<std::size_t>(m + M_)] -= o.c_[static_cast<std::size_t>(m + o.M_)];
    return *this;
}

TrigPoly& TrigPoly::operator*=(double s) {
    for (cd& v : c_) v *= s;
    return *this;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly r(a.M_ + b.M_);
    for (int m = -a.M_; m <= a.M_; ++m) {
        const cd am = a.c_[static_cast<std::size_t>(m + a.M_)];
        if (am == cd(0.0)) continue;
        for (int l = -b.M_; l <= b.M_; ++l)
            r.c_[static_cast<std::size_t>(m + l + r.M_)] += am * b.c_[static_cast<std::size_t>(l + b.M_)];
    }
    return r;
}

void TrigLaurent::add_term(int power, const TrigPoly& t) {
    auto it = terms_.find(power);
    if (it == terms_.end())
        terms_.emplace(power, t);
    else
        it->second += t;
}

double TrigLaurent::eval(double r, double theta) const {
    double s = 0.0;
    for (const auto& [p, t] : terms_) s += std::pow(r, p) * t.eval(theta);
    return s;
}

TrigLaurent TrigLaurent::r_derivative(int L) const {
    TrigLaurent out;
    for (const auto& [p, t] : terms_) {
        double f = 1.0;
        for (int q = 0; q < L; ++q) f *= static_cast<double>(p - q);
        if (f != 0.0) out.add_term(p - L, t * f);
    }
    return out;
}

TrigPoly TrigLaurent::r_derivative_at(double r, int L) const {
    TrigPoly out = TrigPoly::constant(0.0);
    for (const auto& [p, t] : terms_) {
        double f = 1.0;
        for (int q = 0; q < L; ++q) f *= static_cast<double>(p - q);
        if (f != 0.0) out += t * (f * std::pow(r, p - L));
    }
    return out;
}

int TrigLaurent::min_power() const { return terms_.empty() ? 0 : terms_.begin()->first; }
int TrigLaurent::max_power() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

bool TrigLaurent::is_zero() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

TrigLaurent& TrigLaurent::operator+=(const TrigLaurent& o) {
    for (const auto& [p, t] : o.terms_) add_term(p, t);
    return *this;
}

TrigLaurent& TrigLaurent::operator-=(const TrigLaurent& o) {
    for (const auto& [p, t] : o.terms_) add_term(p, t * -1.0);
    return *this;
}

TrigLaurent& TrigLaurent::operator*=(double s) {
    for (auto& kv : terms_) kv.second *= s;
    return *this;
}

TrigLaurent operator*(const TrigLaurent& a, const TrigLaurent& b) {
    TrigLaurent r;
    for (const auto& [p, t] : a.terms_)
        for (const auto& [q, u] : b.terms_) r.add_term(p + q, t * u);
    return r;
}

}  // namespace melnlab
