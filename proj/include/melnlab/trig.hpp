#pragma once

#include <complex>
#include <map>
#include <vector>

namespace melnlab {

// Real trigonometric polynomial sum_{|m|<=M} c_m e^{i m θ} with c_{-m} = conj(c_m).
class TrigPoly {
public:
    TrigPoly() = default;
    explicit TrigPoly(int max_mode);

    static TrigPoly constant(double v);
    static TrigPoly cos_mode(int m, double scale = 1.0);
    static TrigPoly sin_mode(int m, double scale = 1.0);

    int max_mode() const { return M_; }
    std::complex<double> coeff(int m) const;
    void set_coeff(int m, std::complex<double> v);

    double eval(double theta) const;
    // Taylor coefficients in τ of p(θ0 + τ) up to the given order.
    std::vector<double> taylor(double theta0, int order) const;
    TrigPoly derivative() const;
    bool is_zero(double tol = 0.0) const;

    TrigPoly& operator+=(const TrigPoly& o);
    TrigPoly& operator-=(const TrigPoly& o);
    TrigPoly& operator*=(double s);

    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
    friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
    friend TrigPoly operator*(TrigPoly a, double s) { return a *= s; }
    friend TrigPoly operator*(double s, TrigPoly a) { return a *= s; }
    friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);

private:
    int M_ = 0;
    std::vector<std::complex<double>> c_{std::complex<double>(0.0)};
    void grow(int M);
};

// Laurent polynomial in r with TrigPoly coefficients: sum_p r^p T_p(θ).
class TrigLaurent {
public:
    TrigLaurent() = default;

    const std::map<int, TrigPoly>& terms() const { return terms_; }
    void add_term(int power, const TrigPoly& t);

    double eval(double r, double theta) const;
    // ∂_r^L evaluated at fixed r, as a trigonometric polynomial in θ.
    TrigPoly r_derivative_at(double r, int L) const;
    TrigLaurent r_derivative(int L = 1) const;
    int min_power() const;
    int max_power() const;
    bool is_zero() const;

    TrigLaurent& operator+=(const TrigLaurent& o);
    TrigLaurent& operator-=(const TrigLaurent& o);
    TrigLaurent& operator*=(double s);

    friend TrigLaurent operator+(TrigLaurent a, const TrigLaurent& b) { return a += b; }
    friend TrigLaurent operator-(TrigLaurent a, const TrigLaurent& b) { return a -= b; }
    friend TrigLaurent operator*(TrigLaurent a, double s) { return a *= s; }
    friend TrigLaurent operator*(const TrigLaurent& a, const TrigLaurent& b);

private:
    std::map<int, TrigPoly> terms_;
};

}  // namespace melnlab
