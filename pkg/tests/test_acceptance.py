"""Acceptance suite: one PASS/FAIL line per criterion, all checks exact.

Run under pytest (lines go straight to the terminal) or as
``python tests/test_acceptance.py``.
"""

import json
import random
import subprocess
import sys
import time
from itertools import product
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import rand_construction  # noqa: E402
from mfcalc import atiyah as at  # noqa: E402
from mfcalc import ext  # noqa: E402
from mfcalc import mf as mfm  # noqa: E402
from mfcalc.corpus import CORPORA, SCRIPTS, load, session_for  # noqa: E402
from mfcalc.groebner import milnor_data  # noqa: E402
from mfcalc.hkr import verify_chain_maps  # noqa: E402
from mfcalc.mf import FreeComplex  # noqa: E402
from mfcalc.poly import Polynomial  # noqa: E402
from mfcalc.runner import chern_homogeneity  # noqa: E402

SEED = 2024
GAMMAS = 20
GRADED = [s for s in CORPORA["all"] if "weights" in SCRIPTS[s]]


def _sessions():
    return {s: session_for(s) for s in CORPORA["all"]}


def criterion_1():
    rng = random.Random(SEED)
    bad = []
    for k in range(100):
        E, ops = rand_construction(rng, n=rng.randint(1, 3), max_deg=3)
        if mfm.validate(E) is not None:
            bad.append((k, ops))
    return not bad, f"100 constructions, {len(bad)} invalid"


def criterion_2():
    rng = random.Random(SEED + 2)
    items = load("all")
    bad = []
    checked = 0
    for it in items:
        for g in [None] + [at.random_connection(it.mf, rng) for _ in range(2)]:
            checked += 1
            if at.exp_at_series(it.mf, g) != at.exp_at_iterated(it.mf, g):
                bad.append(it.label)
    return len(items) >= 20 and not bad, f"{len(items)} factorizations, {checked} connections, mismatches {bad}"


def criterion_3():
    rng = random.Random(SEED + 3)
    sessions = _sessions()
    bad, count = [], 0
    for it in load("all"):
        E, md = it.mf, sessions[it.script].md
        basis = at.cocycle_basis(E, md)
        for _ in range(GAMMAS):
            g = at.random_connection(E, rng)
            expA = at.exp_at_series(E, g)
            for x, _p in basis:
                count += 1
                if not at.chain_closed(E, x, expA=expA):
                    bad.append(it.label)
    return not bad, f"{count} (factorization, cocycle, connection) triples, failures {sorted(set(bad))}"


def criterion_4():
    rng = random.Random(SEED + 4)
    sessions = _sessions()
    bad, count = [], 0
    for it in load("all"):
        E, md = it.mf, sessions[it.script].md
        basis = at.cocycle_basis(E, md)
        ref = [at.boundary_bulk(E, x, p, md=md) for x, p in basis]
        for _ in range(GAMMAS):
            g = at.random_connection(E, rng)
            expA = at.exp_at_series(E, g)
            count += len(basis)
            if [at.boundary_bulk(E, x, p, g, md, expA) for x, p in basis] != ref:
                bad.append(it.label)
    return not bad, f"{count} classes compared, failures {sorted(set(bad))}"


def criterion_5():
    s = session_for("xy")
    E = s.mfs["E"]
    c = at.chern(E, md=s.md).g
    coeff = c.constant_term()
    chi = ext.euler_pairing(E, E, s.md)
    pairs = [(a, b) for a in s.mf_order for b in s.mf_order]
    matched = all(ext.rrh_check(s.mfs[a], s.mfs[b], s.md).match for a, b in pairs)
    ok = c.degree() <= 0 and abs(coeff) == 1 and chi == 1 and matched
    return ok, f"chern coefficient {coeff}, euler(E,E) = {chi}, rrh on {len(pairs)} pairs {'match' if matched else 'MISMATCH'}, sigma_ch = {at.SIGMA_CH}"


def criterion_6():
    scripts = ["xy", "cubic", "d4", "e7", "knorrer-xy", "knorrer-cubic", "knorrer-a2"]
    bad, count = [], 0
    for name in scripts:
        s = session_for(name)
        # auxiliary factorizations of other potentials are not corpus items
        mine = [m for m in s.mf_order if s.mfs[m].w == s.W]
        for a, b in product(mine, repeat=2):
            count += 1
            r = ext.rrh_check(s.mfs[a], s.mfs[b], s.md)
            if not r.match:
                bad.append(f"{name}:{a},{b}")
    # doubling keeps the Euler pairing
    base, dbl = session_for("cubic"), session_for("knorrer-cubic")
    same = ext.euler_pairing(base.mfs["E"], base.mfs["E"], base.md) == ext.euler_pairing(dbl.mfs["E"], dbl.mfs["E"], dbl.md)
    base, dbl = session_for("xy"), session_for("knorrer-xy")
    same = same and ext.euler_pairing(base.mfs["E"], base.mfs["E"], base.md) == ext.euler_pairing(dbl.mfs["E"], dbl.mfs["E"], dbl.md)
    return not bad and same, f"{count} pairs, mismatches {bad}, euler preserved by doubling: {same}"


def _complexes(n):
    v = [Polynomial.var(n, i) for i in range(n)]
    x, y = v[0], v[1]
    return [
        FreeComplex(n, (1, 1), (((x + y,),),)),
        # Koszul complex on (x, y^2)
        FreeComplex(n, (1, 2, 1), (((x,), (y * y,)), ((y * y, -x),))),
    ]


def criterion_7():
    bad = []
    items = load("all")
    for it in items:
        E = it.mf
        md = session_for(it.script).md
        lhs = at.chern(mfm.direct_sum(E, E), md=md)
        if lhs != at.chern(E, md=md) + at.chern(E, md=md):
            bad.append(f"sum {it.label}")
        if at.chern(mfm.shift(E), md=md) != -at.chern(E, md=md):
            bad.append(f"shift {it.label}")
    for s in ("xy", "cubic", "a2", "d4", "e7"):
        sess = session_for(s)
        for a, b in [(p, q) for p in sess.mf_order for q in sess.mf_order if p < q][:2]:
            lhs = at.chern(mfm.direct_sum(sess.mfs[a], sess.mfs[b]), md=sess.md)
            if lhs != at.chern(sess.mfs[a], md=sess.md) + at.chern(sess.mfs[b], md=sess.md):
                bad.append(f"sum {s}:{a},{b}")
    pairs = 0
    for s in ("xy", "cubic", "a2", "d4", "e6"):
        E = session_for(s).mfs["E"]
        for C in _complexes(2):
            pairs += 1
            r = at.lemma_tensor_check(E, C)
            if not r.ok:
                bad.append(f"tensor {s}")
    return not bad, f"{len(items)} factorizations, {pairs} tensor pairs, failures {bad}"


def criterion_8():
    bad, count = [], 0
    for it in load("all"):
        if it.mf.n % 2:
            continue
        count += 1
        ok, deg, expected = chern_homogeneity(it.mf, session_for(it.script).md)
        if not ok:
            bad.append((it.label, deg, expected))
    return count > 0 and not bad, f"{count} graded even-n factorizations, failures {bad}"


def criterion_9():
    x, y = Polynomial.var(2, 0), Polynomial.var(2, 1)
    X, Y = Polynomial.var(3, 0), Polynomial.var(3, 1)
    runs = [
        (2, Polynomial.zero(2)),
        (2, x * y),
        (2, x ** 3 + y ** 3),
        (3, X * Y),
    ]
    bad, total = [], 0
    for k, (n, w) in enumerate(runs):
        rep = verify_chain_maps(n, w, 200, max_len=4, seed=SEED + k)
        total += rep.trials
        if not rep.ok:
            bad.append((n, w.format(), rep.first_failure))
    return not bad, f"{total} bar tensors over {len(runs)} potentials, failures {bad}"


def criterion_10():
    bad, count = [], 0
    for N in range(2, 7):
        s = session_for(f"a{N - 1}-1var")
        for a, b in product(range(1, N), repeat=2):
            E, F = s.mfs[f"E{a}"], s.mfs[f"E{b}"]
            t = ext.ext_table(E, F, s.md)
            count += 1
            if (t.total(0), t.total(1)) != ext.brute_force_ext_1var(E, F, 2 * N):
                bad.append((N, a, b))
    return not bad, f"{count} pairs for N = 2..6, mismatches {bad}"


def criterion_11():
    bad, seen = [], []
    for name in GRADED:
        s = session_for(name)
        ungraded = milnor_data(s.W)
        expected = s.md.product_formula()
        seen.append(f"{name}:{len(ungraded.basis)}")
        if len(ungraded.basis) != expected:
            bad.append((name, len(ungraded.basis), expected))
    return len(GRADED) >= 3 and not bad, f"{len(GRADED)} potentials ({', '.join(seen)}), mismatches {bad}"


def criterion_12(tmp_dir=None):
    import tempfile

    tmp = Path(tmp_dir or tempfile.mkdtemp())
    outs = []
    for k in range(2):
        path = tmp / f"run{k}.json"
        cmd = [sys.executable, "-m", "mfcalc", "corpus", "ade", "--check", "all", "--trials", "1", "--seed", "11", "--json", str(path)]
        code = subprocess.run(cmd, capture_output=True).returncode
        outs.append((code, path.read_bytes()))
    same = outs[0][1] == outs[1][1]
    parsed = json.loads(outs[0][1])
    return same and outs[0][0] == 0, f"two corpus runs, {len(outs[0][1])} bytes each, identical: {same}, ok: {parsed['ok']}"


CRITERIA = [
    (1, "constructor validity", criterion_1),
    (2, "series and iterated exponentials agree", criterion_2),
    (3, "chain-level closedness", criterion_3),
    (4, "gauge invariance", criterion_4),
    (5, "calibration on xy", criterion_5),
    (6, "Riemann-Roch corpus", criterion_6),
    (7, "additivity, shift and tensor lemma", criterion_7),
    (8, "graded homogeneity", criterion_8),
    (9, "HKR identities", criterion_9),
    (10, "one-variable oracle", criterion_10),
    (11, "Milnor product formula", criterion_11),
    (12, "determinism", criterion_12),
]


def _report(num, title, fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as e:  # a crash is a failure, reported like one
        ok, detail = False, f"{type(e).__name__}: {e}"
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d} {title}: {detail} ({time.perf_counter() - t0:.1f}s)"
    return ok, line


@pytest.mark.parametrize("num, title, fn", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(num, title, fn, capsys):
    ok, line = _report(num, title, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [_report(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
