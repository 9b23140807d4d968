"""Regenerate the bundled regression problems in src/qzermelo/regression/."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from qzermelo.instances import forward_instance
from qzermelo.problem import NavigationProblem, dump_json, spin_half_problem

OUT = Path(__file__).resolve().parents[1] / "src" / "qzermelo" / "regression"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for omega in (0.0, 0.25, 0.5, 0.75, 1.0):
        prob = spin_half_problem(omega)
        (OUT / f"spin_half_omega{omega:g}.json").write_text(dump_json(prob.to_json()))
    rng = np.random.default_rng(2024)
    for n in (3, 4):
        for k in range(2):
            inst = forward_instance(n, rng)
            (OUT / f"random_n{n}_{k}.json").write_text(dump_json(inst.problem.to_json()))
    ident = NavigationProblem.create(np.diag([0.3, -0.3]).astype(complex), np.eye(2, dtype=complex))
    (OUT / "identity_target.json").write_text(dump_json(ident.to_json()))


if __name__ == "__main__":
    main()
