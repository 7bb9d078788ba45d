"""One minimal induced representation, measured from every side.

Builds the dimension-3 representation over the 7-adic base, then walks
through the things the library can say about it: which solutions exist,
what the conductor data looks like along both induction routes, the
local constant by the direct sum and by the closed form, and the
torsion verdict with its witness.

Run: python demos/minimal_family.py
"""

from tameps.characters import ONE, psi_standard
from tameps.cyclotomic import root_text, serialize_epsilon
from tameps.heisenberg import (
    HeisenbergDatum,
    HeisenbergRep,
    conductors,
    det_char,
    solve_theta,
)
from tameps.localring import make_ring
from tameps.wformulas import (
    root_of_unity_analysis,
    w_direct,
    w_invariant_minimal,
)


def main() -> None:
    F = make_ring(7, 1, 1)
    datum = HeisenbergDatum(F, 2)   # the order-3 residue character
    sols = solve_theta(datum)
    print(f"dimension m = {datum.m}, solutions on the splitting ring: {sols}")

    rep = HeisenbergRep(datum, sols[0], ONE)
    psi = psi_standard(F)
    print(f"conductor data, cross-checked: {conductors(rep)}")

    det = det_char(rep)
    g, pi = F.teich(F.k.g), F.pi_pow(1)
    print(f"determinant on generators: det(g) = {root_text(det.value(g))}, "
          f"det(pi) = {root_text(det.value(pi))}")

    w = w_direct(rep, psi)
    rpt = w_invariant_minimal(rep, psi)
    print(f"direct route and closed form agree: {rpt.equal}")
    print(f"W = {serialize_epsilon(w)}")

    tor = root_of_unity_analysis(rep, psi)
    verdict = tor.order if tor.order is not None else "not a root of unity"
    wverdict = (tor.gamma_order if tor.gamma_order is not None
                else "infinite order")
    print(f"torsion: {verdict}; witness (splitting-ring Gauss quotient): "
          f"{wverdict}")
    print(f"|W| = 1 exactly: {w.is_unitary()}")


if __name__ == "__main__":
    main()
