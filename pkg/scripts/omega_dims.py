"""Table of Heller-shift dimensions of the trivial module over small p-groups."""
import argparse
import json
from dataclasses import dataclass, field

from pmodlab import omega, parse_group_spec, trivial_module
from pmodlab.decomp import indecomposable
from pmodlab.heller import has_free_summand, omega_dimension_formula


@dataclass
class Config:
    groups: list[str] = field(default_factory=lambda: ["C2", "C4", "C2xC2", "C3", "C3xC3", "C2xC4",
                                                       "C2xC2xC2", "C5xC5"])
    shifts: list[int] = field(default_factory=lambda: [-2, -1, 1, 2, 3])
    certify: bool = False          # run the indecomposability scan as well
    json: bool = False


def run(cfg: Config) -> list[dict]:
    rows = []
    for spec in cfg.groups:
        G = parse_group_spec(spec)
        F = trivial_module(G)
        row = {"group": spec, "order": G.order, "d": G.minimal_generator_count(),
               "formula": omega_dimension_formula(G)}
        for n in cfg.shifts:
            M = omega(F, n)
            row[f"dim{n:+d}"] = M.dim
            assert not has_free_summand(M)
            if cfg.certify and G.order <= 16:
                row[f"cert{n:+d}"] = indecomposable(M).certificate
        rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--groups", nargs="*", default=Config().groups)
    ap.add_argument("--shifts", nargs="*", type=int, default=Config().shifts)
    ap.add_argument("--certify", action="store_true")
    ap.add_argument("--json", action="store_true")
    cfg = Config(**vars(ap.parse_args()))
    rows = run(cfg)
    if cfg.json:
        print(json.dumps(rows, indent=2))
        return
    keys = list(rows[0])
    print("  ".join(f"{k:>10}" for k in keys))
    for r in rows:
        print("  ".join(f"{str(r.get(k, '')):>10}" for k in keys))


if __name__ == "__main__":
    main()
