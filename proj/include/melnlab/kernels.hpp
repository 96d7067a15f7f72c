#pragma once

#include <vector>

#include "melnlab/cheb_kit.hpp"
#include "melnlab/core_model.hpp"
#include "melnlab/filippov.hpp"

namespace melnlab {

// Grid kernels. Each runs serially or with OpenMP over points; both paths give identical results.

// M_1..M_k of the recursion at each r (row per point).
std::vector<std::vector<double>> melnikov_table(const SystemConfig& cfg, const std::vector<double>& r, bool parallel = true);

// Simulation-extracted M_i at each r.
std::vector<ExtractionResult> extraction_table(const SystemConfig& cfg, int i, const std::vector<double>& r,
                                               const ExtractionOptions& opts = {}, bool parallel = true);

// W_s of a family at each x.
std::vector<WronskianValue> wronskian_table(const OrderedFamily& fam, std::size_t s, const std::vector<double>& x,
                                            bool parallel = true);

// Worker count for the OpenMP kernels; n <= 0 keeps the runtime default.
void set_workers(int n);
int workers();

}  // namespace melnlab
