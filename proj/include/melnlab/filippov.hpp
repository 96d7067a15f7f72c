#pragma once

#include <array>
#include <string>
#include <vector>

#include "melnlab/core_model.hpp"

namespace melnlab {

enum class Direction {
    counterclockwise,  // reversed time; angle increases, matching M_i
    clockwise          // forward time of the original system
};

struct SimOptions {
    Direction direction = Direction::counterclockwise;
    double r_min = 1e-4, r_max = 1e4;
    double tangency_floor = 1e-10;  // |d/dt (y - x^n)| below this is a degenerate contact
    double x_min = 1e-3;            // smallest admissible section coordinate
    int samples_per_turn = 256;     // event bracketing resolution
};

// Exact solution of u' = A u + c on one region between two events.
struct TrajectorySegment {
    Region region = Region::minus;
    double t0 = 0.0, t1 = 0.0;
    std::array<double, 2> start{0, 0}, end{0, 0};
    AffineField field{};
    double exit_transversality = 0.0;  // d/dt (y - x^n) at the exit event (zero for the final section hit)

    std::array<double, 2> eval(double t) const;
};

struct PoincareResult {
    double x0 = 0.0, eps = 0.0;
    double value = 0.0;         // return point on y = 0, x > 0
    double displacement = 0.0;  // value - x0
    std::vector<double> crossing_times;
    std::vector<std::array<double, 2>> crossing_points;
    std::vector<TrajectorySegment> segments;
    double error_estimate = 0.0;
};

PoincareResult integrate_return(double x0, double eps, const SystemConfig& cfg, const SimOptions& opts = {});

struct ExtractionOptions {
    double base = 0.0;  // first ladder step; 0 selects the order-dependent default
    int rungs = 5;      // ladder ±base·2^{-j}, j = 0..rungs-1
    double reject_tol = 1e-4;
    SimOptions sim{};
};

struct ExtractionResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool flagged = false;  // estimate above reject_tol · max(1, |value|)
    double base = 0.0;
};

double default_ladder_base(int i, const SystemConfig& cfg);

// i-th ε-Taylor coefficient of the displacement by Richardson-extrapolated central differences.
ExtractionResult extract_melnikov(double x0, int i, const SystemConfig& cfg, const ExtractionOptions& opts = {});

// All coefficients M_1..M_order by carrying ε-jets through the exact region flows.
std::vector<double> extract_melnikov_jet(double x0, const SystemConfig& cfg, int order, const SimOptions& opts = {});

// ε-jets of the crossing point on the first switching arc: w_i (index i) such that
// the angle of the perturbed crossing is α(ε) = θ(x0 + Σ w_i ε^i); also returns α's Taylor coefficients.
struct CrossingJet {
    std::vector<double> w;      // [ε^i] of r at the crossing minus x0
    std::vector<double> alpha;  // [ε^q] of the crossing angle
};
CrossingJet crossing_jet(double x0, const SystemConfig& cfg, int j, int order);

struct LimitCycle {
    double x = 0.0;           // fixed point on the section
    double eps = 0.0;
    double multiplier = 0.0;  // derivative of the counterclockwise return map
    double residual = 0.0;    // |π(x) - x|
    bool stable_forward = false;
    double seed = 0.0;
    int iterations = 0;
};

struct CycleSearchOptions {
    int max_iterations = 60;
    double tol = 1e-12;
    double dedup = 1e-6;
    double fd_step = 1e-5;
    SimOptions sim{};
};

struct CycleSearch {
    std::vector<LimitCycle> cycles;  // sorted by x
    bool period_annulus = false;     // Δ vanished identically at every seed
    std::vector<std::string> diagnostics;
};

CycleSearch find_limit_cycles(double eps, const SystemConfig& cfg, const std::vector<double>& seeds,
                              const CycleSearchOptions& opts = {});

}  // namespace melnlab
