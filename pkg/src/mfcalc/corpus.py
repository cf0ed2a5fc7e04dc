"""Named corpora of quasi-homogeneous potentials and factorizations, written in the input language."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

SCRIPTS: Dict[str, str] = {}

SCRIPTS["xy"] = """\
# Morse point in two variables; the calibration anchor
ring x, y weights 1, 1 degree 2;
potential W = x*y;
mf E = koszul([x], [y]);
mf S = shift(E);
mf F = koszul([y], [x]);
mf G = sum(E, F);
mf D = dual(koszul([x], [-y]));
"""

SCRIPTS["cubic"] = """\
ring x, y weights 1, 1 degree 3;
potential W = x^3 + y^3;
mf E = koszul([x + y], [x^2 - x*y + y^2]);
mf S = shift(E);
mf K = koszul([x, y], [x^2, y^2]);
mf T = sum(E, K);
"""

SCRIPTS["a2"] = """\
ring x, y weights 3, 2 degree 6;
potential W = x^2 + y^3;
mf E = koszul([x, y], [x, y^2]);
mf F = koszul([y, x], [y^2, x]);
mf S = shift(E);
"""

SCRIPTS["d4"] = """\
ring x, y weights 2, 2 degree 6;
potential W = x^2*y + y^3;
mf E = koszul([y], [x^2 + y^2]);
mf F = koszul([x, y], [x*y, y^2]);
mf S = shift(E);
"""

SCRIPTS["e6"] = """\
ring x, y weights 4, 3 degree 12;
potential W = x^3 + y^4;
mf E = koszul([x, y], [x^2, y^3]);
mf F = koszul([x, y^2], [x^2, y^2]);
"""

SCRIPTS["e7"] = """\
ring x, y weights 3, 2 degree 9;
potential W = x^3 + x*y^3;
mf E = koszul([x], [x^2 + y^3]);
mf F = koszul([x, y], [x^2, x*y^2]);
"""

SCRIPTS["quadric3"] = """\
ring x, y, z weights 1, 1, 1 degree 2;
potential W = x^2 + y^2 + z^2;
mf E = koszul([x, y, z], [x, y, z]);
mf S = shift(E);
"""

SCRIPTS["knorrer-xy"] = """\
# Knoerrer double of the Morse point
ring x, y, u, v weights 1, 1, 1, 1 degree 2;
potential W = x*y + u*v;
mf E = tensor(koszul([x], [y]), koszul([u], [v]));
mf S = shift(E);
"""

SCRIPTS["knorrer-cubic"] = """\
ring x, y, u, v weights 1, 1, 1, 2 degree 3;
potential W = x^3 + y^3 + u*v;
mf C = koszul([x + y], [x^2 - x*y + y^2]);
mf E = tensor(C, koszul([u], [v]));
mf S = shift(E);
"""

SCRIPTS["knorrer-a2"] = """\
ring x, y, u, v weights 3, 2, 3, 3 degree 6;
potential W = x^2 + y^3 + u*v;
mf E = tensor(koszul([x, y], [x, y^2]), koszul([u], [v]));
"""

for _N in range(2, 7):
    _lines = [f"ring x weights 1 degree {_N};", f"potential W = x^{_N};"]
    for _a in range(1, _N):
        _lines.append(f"mf E{_a} = koszul([x{'^' + str(_a) if _a > 1 else ''}], [x{'^' + str(_N - _a) if _N - _a > 1 else ''}]);")
    SCRIPTS[f"a{_N - 1}-1var"] = "\n".join(_lines) + "\n"

CORPORA: Dict[str, Tuple[str, ...]] = {
    "calibration": ("xy",),
    "ade": ("xy", "cubic", "a2", "d4", "e6", "e7"),
    "knorrer": ("knorrer-xy", "knorrer-cubic", "knorrer-a2"),
    "an": tuple(f"a{N - 1}-1var" for N in range(2, 7)),
    "quadric": ("quadric3",),
}
CORPORA["all"] = CORPORA["ade"] + CORPORA["knorrer"] + CORPORA["quadric"] + CORPORA["an"]


def scripts_for(name: str) -> List[Tuple[str, str]]:
    if name in CORPORA:
        return [(s, SCRIPTS[s]) for s in CORPORA[name]]
    if name in SCRIPTS:
        return [(name, SCRIPTS[name])]
    raise KeyError(f"unknown corpus {name!r}; known: {', '.join(sorted(CORPORA) + sorted(SCRIPTS))}")


@dataclass(frozen=True)
class CorpusItem:
    script: str
    name: str
    mf: object  # GradedMF or MatrixFactorization
    names: Tuple[str, ...]

    @property
    def label(self) -> str:
        return f"{self.script}/{self.name}"


def load(name: str = "all") -> List[CorpusItem]:
    """Every factorization of the declared potential, from each script of the corpus."""
    from .dsl import parse
    from .runner import Session

    items = []
    for sname, src in scripts_for(name):
        sess = Session()
        sess.execute(parse(src))
        for mname in sess.mf_order:
            E = sess.mfs[mname]
            if E.w == sess.W:
                items.append(CorpusItem(sname, mname, E, sess.names))
    return items


def session_for(script_name: str):
    from .dsl import parse
    from .runner import Session

    sess = Session()
    sess.execute(parse(SCRIPTS[script_name]))
    return sess
