"""J(K) = K/wp(K) for F_p inside F_p^(p^m): dimensions, trace and pairing sweeps."""
import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from pmodlab.artin_schreier import (
    build_tower, j_module, pairing_sweep, tower_guard, trace_sweep, verify_theorem1_concrete,
)


@dataclass
class Config:
    towers: list[tuple[int, int]] = field(
        default_factory=lambda: [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1)])
    pairing: bool = True


def run(cfg: Config) -> list[dict]:
    rows = []
    for p, m in cfg.towers:
        if not tower_guard(p, m):
            rows.append({"p": p, "m": m, "skipped": "tower guard"})
            continue
        t0 = time.perf_counter()
        t = build_tower(p, m)
        J = j_module(t)
        row = verify_theorem1_concrete(p, m).to_json()
        sw = trace_sweep(t, J)
        row["trace"] = asdict(sw)
        if cfg.pairing:
            row["pairing_ok"] = pairing_sweep(t, J).ok
        row["seconds"] = round(time.perf_counter() - t0, 2)
        rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--towers", nargs="*", default=None, help="p,m pairs such as 2,3")
    ap.add_argument("--no-pairing", action="store_true")
    a = ap.parse_args()
    cfg = Config(pairing=not a.no_pairing)
    if a.towers:
        cfg.towers = [tuple(int(x) for x in s.split(",")) for s in a.towers]
    for row in run(cfg):
        print(json.dumps(row))


if __name__ == "__main__":
    main()
