"""Show how the Riemann-Roch sign is pinned down on w = xy.

The residue pairing is quadratic in the Chern character, so the overall Chern
sign cancels out of the check; only the dimension sign sigma_rr(n) is tested.
"""

from itertools import product

from mfcalc import atiyah as at
from mfcalc import ext
from mfcalc.corpus import session_for
from mfcalc.derham import pairing


def main(script: str = "xy") -> None:
    s = session_for(script)
    names = [m for m in s.mf_order if s.mfs[m].w == s.W]
    chern = {m: at.chern(s.mfs[m], md=s.md) for m in names}
    print("chern:", {m: chern[m].g.format(s.names) for m in names})
    rows = [(a, b, ext.euler_pairing(s.mfs[a], s.mfs[b], s.md), pairing(chern[a], chern[b])) for a, b in product(names, repeat=2)]
    for a, b, chi, raw in rows:
        print(f"  chi({a},{b}) = {chi:+d}   <ch {a}, ch {b}> = {raw}")
    for sign in (1, -1):
        hits = sum(sign * raw == chi for *_, chi, raw in rows)
        print(f"sigma_rr = {sign:+d}: {hits}/{len(rows)} pairs match")
    print(f"frozen: sigma_ch = {at.SIGMA_CH:+d}, sigma_rr({s.n}) = {ext.sigma_rr(s.n):+d}")


if __name__ == "__main__":
    import sys

    main(*sys.argv[1:2])
