"""A wildly twisted representation and the branch that gets flagged.

Twist the smallest minimal representation by a level-2 character of the
3-adic base and compare every formula the library has for it.  The
even-level, even-dimension closed form is known to miss the direct
value by a normalized quadratic Gauss sum; the report carries that
factor instead of pretending the branch holds.

Run: python demos/twisted_rep.py
"""

from tameps.characters import ONE, TableChar, psi_standard
from tameps.cyclotomic import RootOfUnity, epsilon_text, serialize_epsilon
from tameps.heisenberg import HeisenbergDatum, HeisenbergRep, conductors, solve_theta
from tameps.localring import make_ring, unit_group
from tameps.wformulas import w_congruence, w_direct, w_large_conductor, w_nonminimal


def wild_char(F, level):
    gens = unit_group(F, level)
    return TableChar(F, level, gens,
                     [RootOfUnity(1, o) for _, o in gens])


def main() -> None:
    F = make_ring(3, 1, 1)
    datum = HeisenbergDatum(F, 1)
    tw = wild_char(F, 2)
    rep = HeisenbergRep(datum, solve_theta(datum)[0], ONE, tw)
    psi = psi_standard(F)

    print(f"conductor data after the twist: {conductors(rep)}")
    print(f"W (direct) = {epsilon_text(w_direct(rep, psi))}")

    rpt = w_nonminimal(rep, psi)
    print(f"case formula flagged: {rpt.flagged}; equal: {rpt.equal}")
    d = rpt.discrepancy
    print(f"discrepancy factor d = {serialize_epsilon(d)}")
    print(f"|d|^2 equals the residue size 3 exactly: {d.abs_squared() == 3}")

    big = w_large_conductor(rep, psi)
    print(f"stable-twist closed form agrees: {big.equal}")
    con = w_congruence(rep, psi)
    print(f"power congruence exact: {con.equal} ({con.note})")


if __name__ == "__main__":
    main()
