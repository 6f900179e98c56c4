// Walks the irreps of S_6 and checks that their squared dimensions add up to 6!.

#include "symtherm/combinatorics.hpp"

#include <iostream>

int main() {
    using namespace symtherm;
    const int n = 6;
    BigInt total = 0;
    for (const auto& lambda : enumerate_partitions(n, n)) {
        const BigInt d = dim_irrep(lambda);
        total += d * d;
        std::cout << lambda.to_string() << "  dim " << d << "  GL(6) multiplicity " << schur_at_ones(lambda, n) << '\n';
    }
    std::cout << "sum of squares " << total << " = " << factorial(n) << '\n';
}
