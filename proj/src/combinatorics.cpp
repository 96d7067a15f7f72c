#include "melnlab/combinatorics.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "melnlab/errors.hpp"

namespace melnlab {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

namespace {

void enumerate_partitions(int l, int part, int remaining, std::vector<int>& b, PartitionSet& out) {
    if (part == 0) {
        if (remaining != 0) return;
        PartitionTuple t;
        t.b = b;
        double w = 1.0;
        for (int m = 1; m <= l; ++m) {
            const int bm = b[static_cast<std::size_t>(m - 1)];
            t.L += bm;
            w *= factorial(bm);
            for (int r = 0; r < bm; ++r) w *= factorial(m);
        }
        t.weight = 1.0 / w;
        out.tuples.push_back(std::move(t));
        return;
    }
    for (int c = remaining / part; c >= 0; --c) {
        b[static_cast<std::size_t>(part - 1)] = c;
        enumerate_partitions(l, part - 1, remaining - c * part, b, out);
    }
    b[static_cast<std::size_t>(part - 1)] = 0;
}

void enumerate_compositions(int q, int l, std::vector<int>& cur, CompositionSet& out) {
    if (static_cast<int>(cur.size()) == l - 1) {
        if (q >= 1) {
            cur.push_back(q);
            out.tuples.push_back(cur);
            cur.pop_back();
        }
        return;
    }
    const int slots_after = l - static_cast<int>(cur.size()) - 1;
    for (int v = 1; v <= q - slots_after; ++v) {
        cur.push_back(v);
        enumerate_compositions(q - v, l, cur, out);
        cur.pop_back();
    }
}

}  // namespace

PartitionSet partitions(int l) {
    if (l < 1 || l > 12) throw DomainError("partitions: l must satisfy 1 <= l <= 12");
    PartitionSet s;
    s.l = l;
    std::vector<int> b(static_cast<std::size_t>(l), 0);
    enumerate_partitions(l, l, l, b, s);
    return s;
}

CompositionSet compositions(int q, int l) {
    if (q < 1 || l < 1) throw DomainError("compositions: q and l must be positive");
    CompositionSet s;
    s.q = q;
    s.l = l;
    if (q < l) return s;
    std::vector<int> cur;
    enumerate_compositions(q, l, cur, s);
    return s;
}

const PartitionSet& partitions_cached(int l) {
    static std::mutex mu;
    static std::map<int, PartitionSet> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(l);
    if (it == cache.end()) it = cache.emplace(l, partitions(l)).first;
    return it->second;
}

const CompositionSet& compositions_cached(int q, int l) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, CompositionSet> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({q, l});
    if (it == cache.end()) it = cache.emplace(std::make_pair(q, l), compositions(q, l)).first;
    return it->second;
}

}  // namespace melnlab
