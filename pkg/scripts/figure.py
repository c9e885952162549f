"""Write the box diagrams of Omega^2 and Omega^-2 over C_p x C_p as SVG and text."""
import argparse
from dataclasses import dataclass, field
from pathlib import Path

from pmodlab.diagram import render_diagram


@dataclass
class Config:
    primes: list[int] = field(default_factory=lambda: [2, 3, 5])
    out: str = "figures"


def run(cfg: Config) -> list[Path]:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for p in cfg.primes:
        for which in ("omega2", "omega_minus_2"):
            for fmt, ext in (("svg", "svg"), ("text", "txt")):
                path = out / f"{which}_p{p}.{ext}"
                path.write_text(render_diagram(p, which, format=fmt))
                written.append(path)
    return written


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", nargs="*", type=int, default=Config().primes)
    ap.add_argument("--out", default=Config.out)
    for path in run(Config(**vars(ap.parse_args()))):
        print(path)


if __name__ == "__main__":
    main()
