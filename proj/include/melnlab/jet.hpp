#pragma once

#include <cstddef>
#include <vector>

namespace melnlab {

enum class JetVar { t, x, eps };

// Truncated Taylor series c[0] + c[1] h + ... + c[N] h^N about `base`.
// Coefficients are derivatives divided by factorials.
class Jet {
public:
    Jet() = default;
    Jet(double base, std::size_t order, JetVar var = JetVar::x);

    static Jet constant(double value, double base, std::size_t order, JetVar var = JetVar::x);
    static Jet variable(double base, std::size_t order, JetVar var = JetVar::x);

    std::size_t order() const { return c_.size() - 1; }
    double base() const { return base_; }
    JetVar var() const { return var_; }

    double& operator[](std::size_t i) { return c_[i]; }
    double operator[](std::size_t i) const { return c_[i]; }
    const std::vector<double>& coeffs() const { return c_; }

    double value() const { return c_[0]; }
    // m-th derivative, i.e. m! * c[m].
    double derivative(std::size_t m) const;
    // Polynomial evaluation at offset h from the base point.
    double eval(double h) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);
    Jet& operator+=(double s);
    Jet& operator-=(double s);
    Jet& operator*=(double s);
    Jet& operator/=(double s);

    Jet operator-() const;

    // d/dh of the series, truncated one order lower and padded back.
    Jet differentiate() const;
    // Antiderivative with zero constant term; top coefficient dropped.
    Jet integrate() const;

private:
    double base_ = 0.0;
    JetVar var_ = JetVar::x;
    std::vector<double> c_{0.0};

    void check_compatible(const Jet& o) const;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

Jet exp(const Jet& a);
Jet log(const Jet& a);      // requires a.value() > 0
Jet sqrt(const Jet& a);     // requires a.value() > 0
Jet pow(const Jet& a, double p);  // real power, requires a.value() > 0
Jet powi(const Jet& a, int p);    // integer power, any sign of a.value()
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet atan(const Jet& a);

// f(g) where f is a jet about g.value() in the variable of g's values,
// and g is a jet in some other variable. Result lives in g's variable.
Jet compose(const Jet& f, const Jet& g);

// Composition with an inner series whose constant term is zero:
// sum_d f[d] * g^d, with f given by its Taylor coefficients about the base of interest.
Jet compose_offset(const std::vector<double>& f, const Jet& g);

}  // namespace melnlab
