#pragma once

#include <vector>

namespace melnlab {

// Tuples (b1..bl) of non-negative integers with b1 + 2 b2 + ... + l bl = l.
struct PartitionTuple {
    std::vector<int> b;
    int L = 0;            // b1 + ... + bl
    double weight = 0.0;  // 1 / (b1! b2! 2!^{b2} ... bl! l!^{bl})
};

struct PartitionSet {
    int l = 0;
    std::vector<PartitionTuple> tuples;
};

// l-tuples of positive integers summing to q.
struct CompositionSet {
    int q = 0, l = 0;
    std::vector<std::vector<int>> tuples;
};

PartitionSet partitions(int l);               // 1 <= l <= 12
CompositionSet compositions(int q, int l);    // q, l >= 1

// Cached access used inside hot loops.
const PartitionSet& partitions_cached(int l);
const CompositionSet& compositions_cached(int q, int l);

double factorial(int n);
double binomial(int n, int k);

}  // namespace melnlab
