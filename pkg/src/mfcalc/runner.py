"""Execution of parsed scripts: evaluation of definitions and one JSON record per command."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from . import atiyah as at
from . import dsl
from . import ext as ext_mod
from . import mf as mfm
from .derham import HHClass
from .groebner import MilnorData, milnor_data
from .poly import INHOMOGENEOUS, Polynomial, WeightSystem, weighted_degree

SCHEMA = "mfcalc/1"


@dataclass(frozen=True)
class RunOptions:
    seed: int = 0
    trials: int = 5
    max_twist: Optional[int] = None
    strict: bool = False


class CommandFailed(Exception):
    pass


def format_matrix(m, names) -> List[List[str]]:
    return [[p.format(names) for p in row] for row in m]


class Session:
    """Definitions in scope while a script runs."""

    def __init__(self):
        self.names: tuple = ()
        self.ws: Optional[WeightSystem] = None
        self.W: Optional[Polynomial] = None
        self.mfs: Dict[str, object] = {}
        self.mf_order: List[str] = []
        self._md: Optional[MilnorData] = None

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def md(self) -> MilnorData:
        if self._md is None:
            self._md = milnor_data(self.W, self.ws)
        return self._md

    def poly(self, p: dsl.Sum) -> Polynomial:
        return dsl.eval_poly(p, self.names)

    def build(self, e: dsl.Expr):
        graded = self.ws is not None
        if isinstance(e, dsl.Ref):
            return self.mfs[e.name]
        if isinstance(e, dsl.Koszul):
            E = mfm.koszul([self.poly(p) for p in e.a], [self.poly(p) for p in e.b])
            return mfm.infer_grading(E, self.ws) if graded else E
        if isinstance(e, dsl.Factorization):
            d1 = [[self.poly(p) for p in row] for row in e.d1]
            d0 = [[self.poly(p) for p in row] for row in e.d0]
            w = _product_diagonal(d1, d0, self.n)
            E = mfm.from_matrices(w, d1, d0)
            return mfm.infer_grading(E, self.ws) if graded else E
        if isinstance(e, dsl.Binary):
            a, b = self.build(e.left), self.build(e.right)
            return mfm.tensor(a, b) if e.op == "tensor" else mfm.direct_sum(a, b)
        arg = self.build(e.arg)
        return mfm.dual(arg) if e.op == "dual" else mfm.shift(arg)

    def define(self, st: dsl.Statement):
        if isinstance(st, dsl.RingDecl):
            self.names = st.names
            if st.weights is not None:
                self.ws = WeightSystem(st.weights, st.degree)
        elif isinstance(st, dsl.PotentialDecl):
            self.W = self.poly(st.poly)
            if self.ws is not None:
                d = weighted_degree(self.W, self.ws)
                if d is INHOMOGENEOUS or d != self.ws.h:
                    raise mfm.MFError(f"potential is not quasi-homogeneous of degree {self.ws.h}")
        elif isinstance(st, dsl.MfDef):
            self.mfs[st.name] = self.build(st.expr)
            if st.name not in self.mf_order:
                self.mf_order.append(st.name)

    def execute(self, script: dsl.Script):
        """Evaluate the definitions only (commands are skipped)."""
        for st in script.statements:
            if not isinstance(st, dsl.Command):
                self.define(st)

    def describe(self, name: str) -> Dict:
        E = self.mfs[name]
        B = mfm._base(E)
        d = {
            "ranks": [B.r0, B.r1],
            "d1": format_matrix(B.d1, self.names),
            "d0": format_matrix(B.d0, self.names),
        }
        if isinstance(E, mfm.GradedMF):
            d["u"] = list(E.u)
            d["v"] = list(E.v)
        blob = repr(sorted(d.items())).encode()
        return {"name": name, "hash": hashlib.sha256(blob).hexdigest()[:16], **d}

    def require_W(self, name: str):
        E = self.mfs[name]
        if E.w != self.W:
            raise CommandFailed(f"{name} is a factorization of {E.w.format(self.names)}, not of the declared potential")
        return E

    def require_graded(self, name: str):
        E = self.require_W(name)
        if not isinstance(E, mfm.GradedMF):
            raise CommandFailed("this command needs a graded ring (declare weights)")
        return E


def _product_diagonal(d1, d0, n):
    if not d1 or not d0:
        return Polynomial.zero(n)
    acc = Polynomial.zero(n)
    for k in range(len(d0)):
        acc = acc + d1[0][k] * d0[k][0]
    return acc


def _class_json(c: HHClass, names) -> Dict:
    return c.to_json(names)


def _rng(opts: RunOptions, index: int, tag: str) -> random.Random:
    return random.Random(f"{opts.seed}:{index}:{tag}")


def run_command(sess: Session, st: dsl.Command, index: int, opts: RunOptions) -> Dict:
    rec: Dict = {"index": index, "command": f"{st.kind} {st.name}", "statement": dsl.pretty_statement(st)}
    mf_args = [a for a in st.args if isinstance(a, str)]
    rec["inputs"] = {a: sess.describe(a) for a in mf_args}
    warnings: List[str] = []
    try:
        out, ok = _dispatch(sess, st, index, opts, warnings)
        rec["outputs"] = out
        rec["ok"] = ok
    except (CommandFailed, ValueError, ArithmeticError, RuntimeError) as e:
        rec["ok"] = False
        rec["error"] = f"{type(e).__name__}: {e}"
    if warnings:
        rec["warnings"] = warnings
        if opts.strict:
            rec["ok"] = False
    return rec


def _dispatch(sess: Session, st: dsl.Command, index: int, opts: RunOptions, warnings: List[str]):
    names = sess.names
    name = st.name
    args = st.args
    if st.kind == "print":
        if name == "milnor":
            md = sess.md
            return {
                "mu": md.mu,
                "basis": [Polynomial.monomial(m, 1).format(names) for m in md.basis],
                "hessian": md.hessian_nf.format(names),
                "socle_degree": md.socle_degree,
            }, True
        if name == "chern":
            E = sess.require_W(args[0])
            return {"class": _class_json(at.chern(E, md=sess.md), names), "sigma_ch": at.SIGMA_CH}, True
        if name == "bb":
            E = sess.require_W(args[0])
            basis = at.cocycle_basis(E, sess.md)
            k = args[1]
            if not 0 <= k < len(basis):
                raise CommandFailed(f"cocycle index {k} out of range (0..{len(basis) - 1})")
            x, p = basis[k]
            c = at.boundary_bulk(E, x, p, md=sess.md)
            return {"cocycle": format_matrix(x, names), "parity": p, "class": _class_json(c, names)}, True
        if name == "classes":
            E = sess.require_W(args[0])
            expA = at.exp_at_series(E)
            out = []
            for x, p in at.cocycle_basis(E, sess.md):
                c = at.boundary_bulk(E, x, p, md=sess.md, expA=expA)
                out.append({"parity": p, "class": _class_json(c, names)})
            return {"classes": out}, True
        if name == "euler":
            E, F = sess.require_graded(args[0]), sess.require_graded(args[1])
            return {"euler": _ext(sess, E, F, opts).euler}, True
        if name == "ext":
            E, F = sess.require_graded(args[0]), sess.require_graded(args[1])
            t = _ext(sess, E, F, opts)
            table = {f"{k},{j}": d for (k, j), d in sorted(t.dims.items())}
            return {"dims": table, "ext0": t.total(0), "ext1": t.total(1), "window": list(t.window)}, True
    else:
        if name == "valid":
            v = mfm.validate(sess.mfs[args[0]])
            return {"valid": v is None, "violation": None if v is None else str(v)}, v is None
        if name == "exp-equiv":
            E = sess.require_W(args[0])
            rng = _rng(opts, index, "exp")
            gammas = [None] + [at.random_connection(E, rng) for _ in range(opts.trials)]
            equal = all(at.exp_at_series(E, g) == at.exp_at_iterated(E, g) for g in gammas)
            return {"equal": equal, "connections": len(gammas)}, equal
        if name == "closed":
            E = sess.require_W(args[0])
            rng = _rng(opts, index, "closed")
            gammas = [None] + [at.random_connection(E, rng) for _ in range(opts.trials)]
            basis = at.cocycle_basis(E, sess.md)
            failures = 0
            for g in gammas:
                if not at.chain_identity_holds(E, at.atiyah_rep(E, g)):
                    failures += 1
                    continue
                expA = at.exp_at_series(E, g)
                failures += sum(0 if at.chain_closed(E, x, expA=expA) else 1 for x, _ in basis)
            return {"closed": failures == 0, "cocycles": len(basis), "connections": len(gammas)}, failures == 0
        if name == "gauge":
            E = sess.require_W(args[0])
            rng = _rng(opts, index, "gauge")
            basis = at.cocycle_basis(E, sess.md)
            ref = [at.boundary_bulk(E, x, p, md=sess.md) for x, p in basis]
            same = True
            for _ in range(opts.trials):
                g = at.random_connection(E, rng)
                expA = at.exp_at_series(E, g)
                got = [at.boundary_bulk(E, x, p, g, sess.md, expA) for x, p in basis]
                same = same and got == ref
            return {"invariant": same, "cocycles": len(basis), "connections": opts.trials}, same
        if name == "rrh":
            E, F = sess.require_graded(args[0]), sess.require_graded(args[1])
            if sess.n % 2:
                warnings.append("odd number of variables: Riemann-Roch check skipped")
                return {"skipped": True}, True
            r = ext_mod.rrh_check(E, F, sess.md)
            out = r.to_json()
            out["sigma_ch"] = at.SIGMA_CH
            out["recalibration_would_fix"] = (not r.match) and r.residue_side == -r.chi
            return out, r.match
        if name == "additivity":
            E, F = sess.require_W(args[0]), sess.require_W(args[1])
            lhs = at.chern(mfm.direct_sum(E, F), md=sess.md)
            rhs = at.chern(E, md=sess.md) + at.chern(F, md=sess.md)
            return {"equal": lhs == rhs, "sum": _class_json(lhs, names)}, lhs == rhs
        if name == "shift":
            E = sess.require_W(args[0])
            lhs = at.chern(mfm.shift(E), md=sess.md)
            rhs = -at.chern(E, md=sess.md)
            return {"equal": lhs == rhs}, lhs == rhs
        if name == "homogeneity":
            E = sess.require_graded(args[0])
            if sess.n % 2:
                warnings.append("odd number of variables: homogeneity check skipped")
                return {"skipped": True}, True
            ok, deg, expected = chern_homogeneity(E, sess.md)
            return {"homogeneous": ok, "degree": deg, "expected": expected}, ok
    raise CommandFailed(f"unknown command {st.kind} {name}")


def chern_homogeneity(E, md: MilnorData):
    """(ok, degree of the Chern coefficient or None if zero, expected n*h/2 - sum w_i)."""
    ws = E.ws
    expected = ws.n * ws.h // 2 - sum(ws.weights) if (ws.n * ws.h) % 2 == 0 else None
    g = at.chern(E, md=md).g
    if g.is_zero():
        return True, None, expected
    d = weighted_degree(g, ws)
    return (d is not INHOMOGENEOUS and d == expected and (ws.n * ws.h) % 2 == 0), (None if d is INHOMOGENEOUS else d), expected


def _ext(sess: Session, E, F, opts: RunOptions):
    return ext_mod.ext_table(E, F, sess.md, max_twist=opts.max_twist)


@dataclass
class Report:
    source_hash: str
    seed: int
    records: List[Dict] = field(default_factory=list)
    script: Optional[str] = None

    @property
    def ok(self) -> bool:
        return all(r.get("ok", False) for r in self.records)

    def to_json(self) -> Dict:
        d = {"schema": SCHEMA, "source_sha256": self.source_hash, "seed": self.seed, "ok": self.ok, "records": self.records}
        if self.script is not None:
            d["script"] = self.script
        return d


def run(script: dsl.Script, opts: RunOptions = RunOptions(), source: Optional[str] = None, extra=()) -> Report:
    """Execute statements in order; each print/check emits one record.

    ``extra`` is an iterable of Command statements appended after the script.
    """
    text = source if source is not None else dsl.pretty(script)
    rep = Report(hashlib.sha256(text.encode()).hexdigest(), opts.seed)
    sess = Session()
    index = 0
    for st in tuple(script.statements) + tuple(extra):
        if isinstance(st, dsl.Command):
            rep.records.append(run_command(sess, st, index, opts))
        else:
            try:
                sess.define(st)
            except (ValueError, ArithmeticError) as e:
                rep.records.append({"index": index, "command": "define", "statement": dsl.pretty_statement(st), "ok": False, "error": f"{type(e).__name__}: {e}"})
                break
        index += 1
    rep.session = sess
    return rep


def corpus_checks(script: dsl.Script) -> List[dsl.Command]:
    """The standard battery for every factorization of the declared potential."""
    sess = Session()
    sess.execute(script)
    mine = [m for m in sess.mf_order if sess.mfs[m].w == sess.W]
    cmds = [dsl.Command("print", "milnor", ())]
    for m in mine:
        cmds += [
            dsl.Command("check", "valid", (m,)),
            dsl.Command("print", "chern", (m,)),
            dsl.Command("check", "exp-equiv", (m,)),
            dsl.Command("check", "closed", (m,)),
            dsl.Command("check", "gauge", (m,)),
            dsl.Command("check", "shift", (m,)),
        ]
        if sess.ws is not None and sess.n % 2 == 0:
            cmds.append(dsl.Command("check", "homogeneity", (m,)))
    if sess.ws is not None and sess.n % 2 == 0:
        for a in mine:
            for b in mine:
                cmds.append(dsl.Command("check", "rrh", (a, b)))
    return cmds
