"""Problem statement, solution record, and their JSON forms.

Problem file::

    {"dim": N, "H0": [[[re, im], ...], ...], "U_I": ..., "U_F": ...,
     "options": {"method": "auto", "steps": 100, ...}}

``U_I`` may be omitted (identity).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import (
    SIGMA_X,
    SIGMA_Z,
    dagger,
    frobenius,
    make_hermitian,
    make_special_unitary,
    matrix_from_json,
    matrix_to_json,
    project_traceless,
    trace_inner,
)
from .config import DEFAULT_TOL, DEFAULTS
from .errors import DimensionMismatch, InputError, NotTraceless, WindTooStrong
from .geodesic import evolve

logger = logging.getLogger(__name__)

METHODS = ("auto", "continuation", "fixedpoint")


@dataclass(frozen=True)
class SolveOptions:
    method: str = "auto"
    steps: int = DEFAULTS.steps
    quad_nodes: int = DEFAULTS.quad_nodes
    polish: bool = DEFAULTS.polish
    allow_strong_wind: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise InputError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.steps < 1:
            raise InputError("steps must be positive")
        if self.quad_nodes < 8:
            raise InputError("quad_nodes must be at least 8")

    @classmethod
    def from_dict(cls, data: dict[str, Any] | None) -> "SolveOptions":
        data = dict(data or {})
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise InputError(f"unknown option(s): {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise InputError(str(exc)) from exc

    def to_dict(self) -> dict[str, Any]:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class NavigationProblem:
    H0: np.ndarray
    U_I: np.ndarray
    U_F: np.ndarray
    options: SolveOptions = field(default_factory=SolveOptions)

    @property
    def dim(self) -> int:
        return self.H0.shape[0]

    @property
    def wind_strength(self) -> float:
        """``tr(H0^2)``; the Randers norm needs it below 1."""
        return trace_inner(self.H0, self.H0)

    @property
    def strong_wind(self) -> bool:
        return self.wind_strength >= 1.0 - DEFAULT_TOL.wind

    @classmethod
    def create(
        cls,
        H0,
        U_F,
        U_I=None,
        options: SolveOptions | None = None,
        project_traceless_H0: bool = False,
        **option_kw,
    ) -> "NavigationProblem":
        if options is None:
            options = SolveOptions(**option_kw)
        elif option_kw:
            options = replace(options, **option_kw)
        H0 = make_hermitian(H0, name="H0")
        n = H0.shape[0]
        tr = np.trace(H0).real
        if abs(tr) > DEFAULT_TOL.traceless:
            if not project_traceless_H0:
                raise NotTraceless(f"H0 has trace {tr:.6g}; pass --project-traceless to subtract it")
            logger.warning("subtracting trace %.6g / N from H0", tr)
            H0 = project_traceless(H0)
        U_F = make_special_unitary(U_F, name="U_F")
        U_I = np.eye(n, dtype=complex) if U_I is None else make_special_unitary(U_I, name="U_I")
        if U_F.shape != H0.shape or U_I.shape != H0.shape:
            raise DimensionMismatch(f"H0 {H0.shape}, U_I {U_I.shape}, U_F {U_F.shape} must share one dimension")
        prob = cls(H0, U_I, U_F, options)
        if prob.strong_wind:
            if not options.allow_strong_wind:
                raise WindTooStrong(
                    f"tr(H0^2) = {prob.wind_strength:.6g} >= 1; set allow_strong_wind to solve anyway"
                )
            logger.warning("strong wind: tr(H0^2) = %.6g >= 1, Randers-norm checks are skipped", prob.wind_strength)
        return prob

    def scaled_wind(self, lam: float) -> "NavigationProblem":
        return NavigationProblem(lam * self.H0, self.U_I, self.U_F, self.options)

    def endpoint_error(self, H1_0: np.ndarray, T: float) -> float:
        return frobenius(evolve(self.H0, H1_0, self.U_I, T) - self.U_F)

    def to_json(self) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "H0": matrix_to_json(self.H0),
            "U_I": matrix_to_json(self.U_I),
            "U_F": matrix_to_json(self.U_F),
            "options": self.options.to_dict(),
        }

    @classmethod
    def from_json(cls, data: dict[str, Any], project_traceless_H0: bool = False, **overrides) -> "NavigationProblem":
        if not isinstance(data, dict):
            raise InputError("problem file must contain a JSON object")
        for key in ("H0", "U_F"):
            if key not in data:
                raise InputError(f"problem file is missing {key!r}")
        H0 = matrix_from_json(data["H0"], "H0")
        U_F = matrix_from_json(data["U_F"], "U_F")
        U_I = matrix_from_json(data["U_I"], "U_I") if data.get("U_I") is not None else None
        if "dim" in data and int(data["dim"]) != H0.shape[0]:
            raise DimensionMismatch(f"dim = {data['dim']} but H0 is {H0.shape[0]} x {H0.shape[0]}")
        opts = SolveOptions.from_dict(data.get("options"))
        if overrides:
            try:
                opts = replace(opts, **overrides)
            except TypeError as exc:
                raise InputError(str(exc)) from exc
        return cls.create(H0, U_F, U_I, options=opts, project_traceless_H0=project_traceless_H0)


@dataclass
class ControlSolution:
    """Initial control ``H1_0`` and transit time ``T`` with solver diagnostics.

    ``H1_0`` is ``None`` only for an identity target (``T = 0``).
    """

    H1_0: np.ndarray | None
    T: float
    method: str
    endpoint_error: float
    iterations: int = 0
    condition_max: float | None = None
    alternate_roots: list[float] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"T": float(self.T), "method": self.method}
        if self.H1_0 is not None:
            out["H1_0"] = matrix_to_json(self.H1_0)
        diag = {
            "endpoint_error": float(self.endpoint_error),
            "iterations": int(self.iterations),
            "condition_max": None if self.condition_max is None else float(self.condition_max),
            "alternate_roots": [float(t) for t in self.alternate_roots],
        }
        diag.update(self.extra)
        out["diagnostics"] = diag
        return out

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "ControlSolution":
        if not isinstance(data, dict) or "T" not in data:
            raise InputError("solution file must be a JSON object with a 'T' field")
        H1 = data.get("H1_0")
        H1_0 = None if H1 is None else make_hermitian(matrix_from_json(H1, "H1_0"), name="H1_0")
        diag = dict(data.get("diagnostics") or {})
        T = float(data["T"])
        if not math.isfinite(T) or T < 0:
            raise InputError(f"invalid transit time {T}")
        if H1_0 is None and T != 0.0:
            raise InputError("solution without H1_0 must have T = 0")
        return cls(
            H1_0=H1_0,
            T=T,
            method=str(data.get("method", "unknown")),
            endpoint_error=float(diag.pop("endpoint_error", float("nan"))),
            iterations=int(diag.pop("iterations", 0)),
            condition_max=diag.pop("condition_max", None),
            alternate_roots=[float(t) for t in diag.pop("alternate_roots", [])],
            extra=diag,
        )


def normalize_control(H: np.ndarray) -> np.ndarray:
    H = project_traceless(0.5 * (H + dagger(H)))
    return H / frobenius(H)


def spin_half_problem(omega: float, **option_kw) -> NavigationProblem:
    """``H0 = -omega sigma_z`` steering ``1`` to ``-i sigma_x``."""
    H0 = -omega * SIGMA_Z
    if 2 * omega**2 >= 1.0 - DEFAULT_TOL.wind:
        option_kw.setdefault("allow_strong_wind", True)
    return NavigationProblem.create(H0, -1j * SIGMA_X, **option_kw)


def load_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
