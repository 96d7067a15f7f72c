#include "melnlab/kernels.hpp"

#include <omp.h>

#include "melnlab/recursion.hpp"
#include "parallel_for.hpp"

namespace melnlab {

std::vector<std::vector<double>> melnikov_table(const SystemConfig& cfg, const std::vector<double>& r, bool parallel) {
    const MelnikovEngine eng(cfg);
    std::vector<std::vector<double>> out(r.size());
    detail::parallel_for(static_cast<long>(r.size()), parallel, [&](long j) {
        const auto u = static_cast<std::size_t>(j);
        out[u] = eng.melnikov_all(r[u]);
    });
    return out;
}

std::vector<ExtractionResult> extraction_table(const SystemConfig& cfg, int i, const std::vector<double>& r,
                                               const ExtractionOptions& opts, bool parallel) {
    std::vector<ExtractionResult> out(r.size());
    detail::parallel_for(static_cast<long>(r.size()), parallel, [&](long j) {
        const auto u = static_cast<std::size_t>(j);
        out[u] = extract_melnikov(r[u], i, cfg, opts);
    });
    return out;
}

std::vector<WronskianValue> wronskian_table(const OrderedFamily& fam, std::size_t s, const std::vector<double>& x,
                                            bool parallel) {
    std::vector<WronskianValue> out(x.size());
    detail::parallel_for(static_cast<long>(x.size()), parallel, [&](long j) {
        const auto u = static_cast<std::size_t>(j);
        out[u] = wronskian(fam, x[u], s);
    });
    return out;
}

void set_workers(int n) {
    if (n > 0) omp_set_num_threads(n);
}

int workers() { return omp_get_max_threads(); }

}  // namespace melnlab
