#pragma once

#include "c2seq/c2rec.hpp"

namespace c2seq {

/// The two explicit C^2-recurrences for Fibonacci quadratic subsequences:
/// square for F_{n^2}, triangle for F_{binom(n,2)}, with all coefficient
/// sequences assembled from the Fibonacci sequence by closure operations.
struct FibIdentities {
    C2Recurrence<Rat> square;
    C2Recurrence<Rat> triangle;
};

FibIdentities fib_paper_identities(size_t horizon = 30);

}  // namespace c2seq
