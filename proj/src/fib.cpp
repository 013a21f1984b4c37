#include "c2seq/fib.hpp"

namespace c2seq {

FibIdentities fib_paper_identities(size_t horizon) {
    auto fib = CFiniteSeq<Rat>::fibonacci(Rat(0), Rat(1));  // F_0 = 0, F_1 = 1

    // F_{2n+1} S_{n+2} = F_{2n+2}(F_{2n+3} + F_{2n+1}) S_{n+1}
    //                  + F_{2n+3}(F_{2n+1} F_{2n+3} - F_{2n+2}^2) S_n,
    // for S_n = F_{n^2}.
    auto f2n1 = fib.subseq(2, 1);
    auto f2n2 = fib.subseq(2, 2);
    auto f2n3 = fib.subseq(2, 3);
    auto q2 = f2n1;
    auto q1 = f2n2.mul(f2n3.add(f2n1)).minimize();
    auto q0 = f2n3.mul(f2n1.mul(f2n3).sub(f2n2.mul(f2n2))).minimize();
    C2Recurrence<Rat> square({q0, q1, q2}, 0, {fib.term(0), fib.term(1)}, horizon);
    auto sq = c2_verify<Rat>(
        square, [&](size_t n) { return fib.term(n * n); }, horizon);
    if (!sq.ok) throw certification_error("fib square identity: " + sq.detail);

    // F_m T_{m+2} = (F_m F_{m+2} + F_{m+1} F_{m-1}) T_{m+1}
    //             + (F_{m+1} F_m^2 - F_{m-1} F_{m+1}^2) T_m,  m >= 1,
    // for T_n = F_{binom(n,2)}. F_{m-1} extends backwards with F_{-1} = 1.
    auto fm1 = fib.subseq(1, 1);
    auto fm2 = fib.subseq(1, 2);
    auto fmm1 = CFiniteSeq<Rat>({Rat(1), Rat(1)}, {Rat(1), Rat(0)});
    auto t2 = fib;
    auto t1 = fib.mul(fm2).add(fm1.mul(fmm1)).minimize();
    auto t0 = fm1.mul(fib.mul(fib)).sub(fmm1.mul(fm1.mul(fm1))).minimize();
    C2Recurrence<Rat> triangle({t0, t1, t2}, 1, {Rat(0), Rat(0), Rat(1)}, horizon);
    auto tr = c2_verify<Rat>(
        triangle, [&](size_t n) { return fib.term(size_t(binom2(long(n)).get_si())); }, horizon);
    if (!tr.ok) throw certification_error("fib triangle identity: " + tr.detail);

    return {std::move(square), std::move(triangle)};
}

}  // namespace c2seq
