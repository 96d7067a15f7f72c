#pragma once

#include <vector>

#include "melnlab/chebseries.hpp"
#include "melnlab/core_model.hpp"

namespace melnlab {

struct RecursionOptions {
    int cheb_degree = 64;      // initial per-sector interpolation degree
    int max_cheb_degree = 1024;
    double tail_tol = 1e-13;   // relative size of the last Chebyshev coefficients
    bool include_jumps = true; // false only to probe the jump-term contribution
};

// All recursion data at one section point x (scalar state, N = 2 crossings, T = 2π).
class ZTable {
public:
    int k = 0;
    int N = 2;
    double T = 0.0;
    double x = 0.0;
    int cheb_degree = 0;

    // theta[j], j = 0..N+1, and derivatives θ_j^{(l)}(x), l = 0..k.
    std::vector<double> theta;
    std::vector<std::vector<double>> theta_derivs;

    // z[i][j]: series of z_i^j on sector j (index i = 1..k; slot 0 unused).
    std::vector<std::vector<ChebSeries>> z;
    // Taylor coefficients in t at θ_j of z_i^{j-1} (left) and z_i^j (right), j = 1..N.
    std::vector<std::vector<std::vector<double>>> jet_left, jet_right;
    // w[i][j], alpha[q][j], jump[i][j] for j = 1..N.
    std::vector<std::vector<double>> w, alpha, jump;

    double z_value(int i, int j, double t) const;  // DomainError if t outside sector j
    double melnikov(int i) const;                  // z_i^N(T, x) / i!
    double w_ij(int i, int j) const;
    double alpha_q(int j, int q) const;
};

class MelnikovEngine {
public:
    explicit MelnikovEngine(const SystemConfig& cfg, RecursionOptions opts = {});

    const SystemConfig& config() const { return field_.config(); }
    const PolarField& field() const { return field_; }
    const SwitchingGeometry& geometry() const { return geom_; }

    ZTable compute(double x) const;
    double melnikov(int i, double x) const;
    // M_1..M_k at x (index 0 holds M_1).
    std::vector<double> melnikov_all(double x) const;

private:
    PolarField field_;
    SwitchingGeometry geom_;
    RecursionOptions opts_;

    bool attempt(double x, int D, ZTable& out) const;
};

// Crossing-time coefficient α^q from θ_j derivatives (index l) and w (index 1..q), Faà di Bruno form.
double alpha_faa_di_bruno(int q, const std::vector<double>& theta_derivs, const std::vector<double>& w);
// Same quantity by composing the Taylor series of θ_j with x + Σ w_i ε^i.
double alpha_by_composition(int q, const std::vector<double>& theta_derivs, const std::vector<double>& w);

// w_i^j from left t-jets of z_m^{j-1} at θ_j (zjet[m][d]) and α^m (index 1..i-1), Faà di Bruno form.
double w_faa_di_bruno(int i, const std::vector<std::vector<double>>& zjet, const std::vector<double>& alpha);
// Same quantity as the ε^i coefficient of Σ_m ε^m z_m^{j-1}(θ_j + a(ε)) / m!.
double w_by_composition(int i, const std::vector<std::vector<double>>& zjet, const std::vector<double>& alpha);

// Jump correction i! Σ_p (1/p!) ∂_ε^p δ_{i-p}(A^p(ε))|_0 from left/right t-jets and α^q.
double jump_correction(int i, const std::vector<std::vector<double>>& left, const std::vector<std::vector<double>>& right,
                       const std::vector<double>& alpha);

MelnikovEngine make_engine(const SystemConfig& cfg);

}  // namespace melnlab
