"""Split and nonsplit extensions of a group by the second syzygy of F_p."""
import argparse
import json
from dataclasses import dataclass
from pathlib import Path

from pmodlab import omega, parse_group_spec, trivial_module
from pmodlab.cohomology import bar_cohomology_2, extension_group


@dataclass
class Config:
    group: str = "C2xC2"
    out: str = ""                  # directory for the group JSON files
    force: bool = False


def run(cfg: Config) -> list[dict]:
    G = parse_group_spec(cfg.group)
    M = omega(trivial_module(G), 2)
    h2 = bar_cohomology_2(G, M, force=cfg.force)
    rows = []
    for kind, f in [("split", "zero")] + [(f"class{i}", c) for i, c in enumerate(h2.cocycle_basis)]:
        ext = extension_group(G, M, f, force=cfg.force)
        E = ext.result
        rows.append({"kind": kind, "order": E.order, "d": E.minimal_generator_count(),
                     "d(G)": G.minimal_generator_count(), "order_profile": E.order_profile(),
                     "kernel_normal": ext.kernel_is_normal()})
        if cfg.out:
            Path(cfg.out).mkdir(parents=True, exist_ok=True)
            (Path(cfg.out) / f"{cfg.group}_{kind}.json").write_text(json.dumps(E.to_json()))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", default=Config.group)
    ap.add_argument("--out", default="")
    ap.add_argument("--force", action="store_true")
    for row in run(Config(**vars(ap.parse_args()))):
        print(json.dumps(row))


if __name__ == "__main__":
    main()
