#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "melnlab/jet.hpp"
#include "melnlab/trig.hpp"

namespace melnlab {

// Affine perturbation coefficients of order i:
// P+ = a0 + a1 x + a2 y, Q+ = b0 + b1 x + b2 y (region y > x^n), alpha/beta for y < x^n.
struct OrderCoefficients {
    std::array<double, 3> a{0, 0, 0};
    std::array<double, 3> b{0, 0, 0};
    std::array<double, 3> alpha{0, 0, 0};
    std::array<double, 3> beta{0, 0, 0};

    std::array<double, 12> flat() const;
    static OrderCoefficients from_flat(const std::array<double, 12>& v);
};

struct SystemConfig {
    int n = 1;
    int k = 1;
    std::vector<OrderCoefficients> orders;  // orders[i-1] holds order i

    SystemConfig() = default;
    SystemConfig(int n_, int k_);

    const OrderCoefficients& order(int i) const { return orders.at(static_cast<std::size_t>(i - 1)); }
    OrderCoefficients& order(int i) { return orders.at(static_cast<std::size_t>(i - 1)); }

    // Throws ConfigError on violated invariants.
    void validate() const;
    // Same system viewed with a higher (zero-padded) or lower (truncated) perturbation order.
    SystemConfig with_order(int new_k) const;
    double magnitude() const;
};

enum class Region { plus, minus };

SystemConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SystemConfig& c);
SystemConfig load_config(const std::string& path);

// Perturbation polynomials A_i, B_i of the polar form, as Laurent polynomials in r.
TrigLaurent polar_A(const OrderCoefficients& c, Region s);
TrigLaurent polar_B(const OrderCoefficients& c, Region s);

class PolarField {
public:
    explicit PolarField(const SystemConfig& cfg);

    const SystemConfig& config() const { return cfg_; }
    int k() const { return cfg_.k; }
    // F_i^± for i = 1..k.
    const TrigLaurent& F(int i, Region s) const;
    double eval(int i, Region s, double r, double theta) const { return F(i, s).eval(r, theta); }

private:
    SystemConfig cfg_;
    std::vector<TrigLaurent> plus_, minus_;
};

PolarField build_polar_field(const SystemConfig& cfg);

// Crossing geometry of the curve y = x^n with the circle of radius r.
class SwitchingGeometry {
public:
    explicit SwitchingGeometry(int n);

    int n() const { return n_; }
    // Section coordinate x = r cos θ1(r), the positive root of x² + x^{2n} = r².
    double x_of_r(double r) const;
    double r_of_x(double x) const;
    double theta1(double r) const;
    double theta2(double r) const;
    std::pair<double, double> angles(double r) const { return {theta1(r), theta2(r)}; }
    // θ_j(r) for j = 0..3 (θ0 = 0, θ3 = 2π).
    double theta(int j, double r) const;
    // Taylor jet of θ_j in r about r0.
    Jet theta_jet(int j, double r0, std::size_t order) const;
    Jet x_jet(double r0, std::size_t order) const;
    // Region label of sector j (0: minus, 1: plus, 2: minus).
    static Region sector_region(int j) { return j == 1 ? Region::plus : Region::minus; }
    Region region_at(double r, double theta) const;

private:
    int n_;
};

std::pair<double, double> switching_angles(double r, int n);

struct CartesianVelocity {
    double dx, dy;
};

// Forward-time field of the piecewise-linear system. Throws DomainError on y = x^n.
CartesianVelocity cartesian_field(const SystemConfig& cfg, double x, double y, double eps);

// Affine region field u' = A u + c at a given ε.
struct AffineField {
    std::array<double, 4> A;  // row-major 2x2
    std::array<double, 2> c;
};
AffineField region_affine_field(const SystemConfig& cfg, Region s, double eps);

double switching_function(int n, double x, double y);  // y - x^n

}  // namespace melnlab
