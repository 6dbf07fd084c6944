"""Tabulate tame contraction orders and extension verdicts for the bundled graphs.

    python3 scripts/tame_prime_table.py --primes 2 3 5 7 11 --mode exhaustive
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from surfext import load
from surfext.classify import LcClass, classify_lc_graph
from surfext.discrepancy import discrepancies
from surfext.mmp import SearchCapError, extension_verdict, find_tame_order

GRAPH_DIR = Path(__file__).resolve().parent.parent / "graphs"


@dataclass
class TableConfig:
    primes: list = field(default_factory=lambda: [2, 3, 5, 7, 11])
    mode: str = "exhaustive"
    graph_dir: Path = GRAPH_DIR


def tame_cell(g, p, mode):
    try:
        found = find_tame_order(g, p, mode)
    except SearchCapError:
        return "cap"
    return "-" if found is None else str(len(found.order))


def rows(cfg: TableConfig):
    for path in sorted(cfg.graph_dir.glob("*.json")):
        g = load(path)
        rep = discrepancies(g)
        if not rep.sing_class.is_lc:
            yield path.stem, str(rep.sing_class), []
            continue
        cls = classify_lc_graph(g)
        tag = cls.tag if isinstance(cls, LcClass) else "unmatched"
        cells = []
        for p in cfg.primes:
            v = extension_verdict(g, p, cfg.mode)
            cells.append(f"{tame_cell(g, p, cfg.mode)}/{v.log_ext_1forms[:4]}/{v.reg_ext_1forms[:4]}")
        yield path.stem, tag, cells


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="+", default=TableConfig().primes)
    ap.add_argument("--mode", choices=("greedy", "exhaustive"), default="exhaustive")
    args = ap.parse_args()
    cfg = TableConfig(primes=args.primes, mode=args.mode)

    print("cell = tame order length ('-' none) / log extension / regular extension")
    header = f"{'graph':<24}{'class':<32}" + "".join(f"p={p:<18}" for p in cfg.primes)
    print(header)
    print("-" * len(header))
    for name, tag, cells in rows(cfg):
        print(f"{name:<24}{tag:<32}" + "".join(f"{c:<20}" for c in cells))


if __name__ == "__main__":
    main()
