"""Generate the golden result files compared by tests/test_acceptance.py.

Run from the repository root after a change that is meant to move the
numbers:

    PYTHONPATH=src python scripts/generate_goldens.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any, Dict


def _repo_root() -> Path:
    return Path(__file__).resolve().parents[1]


R2 = "0.70710678118654752"


def _asymptotic(lattice: str, coin: str, initial: str):
    from perqwalk.asymptotics.attractors import asymptotic_marginal, attractor_basis_for
    from perqwalk.io.initial_state import parse_initial_state
    from perqwalk.walk.channel import PercolationChannel, PercolationModel
    from perqwalk.walk.coin import make_coin
    from perqwalk.walk.lattice import LatticeSpec

    spec = LatticeSpec.parse(lattice)
    ch = PercolationChannel(spec, make_coin(coin), PercolationModel(0.5))
    return asymptotic_marginal(attractor_basis_for(ch), parse_initial_state(initial, spec))


def _write(name: str, payload: Dict[str, Any]) -> None:
    out_path = _repo_root() / "tests" / "fixtures" / "goldens" / name
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"Wrote {out_path}")


def main() -> None:
    sys.path.insert(0, str(_repo_root() / "src"))
    from perqwalk import __version__

    initial = f"7,7:L={R2},D={R2}"
    wide = _asymptotic("15x16:periodic,periodic", "hadamard2d", initial)
    tall = _asymptotic("16x15:periodic,periodic", "hadamard2d", initial)
    _write(
        "hadamard_torus_orientation.json",
        {
            "tool_version": __version__,
            "initial": initial,
            "wide": wide.probs.tolist(),
            "tall": tall.probs.tolist(),
            "l1": wide.l1_distance(tall.transpose()),
        },
    )

    peaks = []
    for lattice, site in (("5x5:periodic,periodic", (2, 2)), ("15x15:periodic,periodic", (7, 7))):
        start = f"{site[0]},{site[1]}:@uniform"
        dist = _asymptotic(lattice, "grover", start)
        peaks.append(
            {
                "lattice": lattice,
                "initial": start,
                "site": list(site),
                "value": dist[site],
                "atol": 1e-12,
            }
        )
    _write("grover_trap.json", {"tool_version": __version__, "peaks": peaks})


if __name__ == "__main__":
    main()
