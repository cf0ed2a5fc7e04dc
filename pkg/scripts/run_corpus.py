"""Run a named corpus with the full check battery and print a per-item table.

    python scripts/run_corpus.py ade --trials 3 --json out.json
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass
from typing import Optional

from mfcalc import dsl
from mfcalc.corpus import scripts_for
from mfcalc.runner import SCHEMA, RunOptions, corpus_checks, run


@dataclass
class CorpusConfig:
    corpus: str = "all"
    seed: int = 0
    trials: int = 5
    json: Optional[str] = None


def main(cfg: CorpusConfig) -> int:
    reports = []
    print(f"{'item':16s} {'records':>7s} {'failed':>6s} {'seconds':>8s}")
    for name, src in scripts_for(cfg.corpus):
        script = dsl.parse(src)
        t0 = time.perf_counter()
        rep = run(script, RunOptions(seed=cfg.seed, trials=cfg.trials), source=src, extra=corpus_checks(script))
        failed = sum(not r.get("ok") for r in rep.records)
        print(f"{name:16s} {len(rep.records):7d} {failed:6d} {time.perf_counter() - t0:8.1f}")
        reports.append({"corpus_item": name, **rep.to_json()})
    ok = all(r["ok"] for r in reports)
    if cfg.json:
        with open(cfg.json, "w", encoding="utf-8") as fh:
            json.dump({"schema": SCHEMA, "config": asdict(cfg), "ok": ok, "reports": reports}, fh, indent=2, sort_keys=True)
    print("all ok" if ok else "FAILURES")
    return 0 if ok else 1


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("corpus", nargs="?", default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--json")
    raise SystemExit(main(CorpusConfig(**vars(p.parse_args()))))
