"""
JSON scenario files.

Complex numbers are ``[re, im]`` pairs. A vector is either an integer basis
index or a list of complex amplitudes. Projectors are given by spanning
vectors and orthonormalized on load. Supported kinds:

``entangled_pair``
    ``dims``, ``a``, ``b``, ``psi``, ``phi``, ``P``, ``Q``
``product``
    ``dims``, ``u``, ``v``, ``P``, ``Q``
``raw_state``
    ``dims``, ``eta``, ``P``, ``Q``
``classical_table``
    ``table`` (``rows``, ``cols``, row-major ``mass``, optional ``xvals``/``yvals``)
``observable_demo``
    ``eigenvalues``, ``f_values`` (aligned with ``eigenvalues``), ``psi``,
    optional ``eigenvectors`` (defaults to the standard basis)

Any kind may carry ``tolerance`` to override the pass threshold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import classical, correspondence, quantum
from .constants import EPS_ZERO
from .errors import ContractViolation
from .linalg import CompositeSpace, Projector, StateVector, schmidt_rank, tensor_state
from .verify import classical_residual

KINDS = ("entangled_pair", "product", "raw_state", "classical_table", "observable_demo")
DEFAULT_TOLERANCE = 1e-11


class ScenarioError(ContractViolation):
    """A scenario file is malformed; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def _complex(value, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        return complex(value[0], value[1])
    raise ScenarioError(where, f"expected [re, im], got {value!r}")


def _vector(value, dim: int, where: str) -> np.ndarray:
    if isinstance(value, int) and not isinstance(value, bool):
        if not 0 <= value < dim:
            raise ScenarioError(where, f"basis index {value} out of range for dim {dim}")
        out = np.zeros(dim, dtype=np.complex128)
        out[value] = 1.0
        return out
    if not isinstance(value, list):
        raise ScenarioError(where, f"expected a basis index or amplitude list, got {value!r}")
    if len(value) != dim:
        raise ScenarioError(where, f"expected {dim} amplitudes, got {len(value)}")
    return np.array([_complex(x, f"{where}[{i}]") for i, x in enumerate(value)], dtype=np.complex128)


def _state(amps: np.ndarray, where: str) -> StateVector:
    try:
        return StateVector(amps)
    except ContractViolation as exc:
        raise ScenarioError(where, str(exc)) from None


def _span(value, dim: int, where: str) -> list[np.ndarray]:
    if not isinstance(value, list) or not value:
        raise ScenarioError(where, "expected a non-empty list of spanning vectors")
    return [_vector(v, dim, f"{where}[{i}]") for i, v in enumerate(value)]


def _require(data: dict, key: str):
    if key not in data:
        raise ScenarioError(key, "missing")
    return data[key]


def _dims(data: dict) -> tuple[int, int]:
    dims = _require(data, "dims")
    if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(d, int) and d >= 1 for d in dims)):
        raise ScenarioError("dims", f"expected [d1, d2] of positive integers, got {dims!r}")
    return dims[0], dims[1]


def _encode_vector(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in v]


@dataclass(eq=False)
class Scenario:
    """Parsed scenario; ``vectors`` keeps raw arrays so serialization is lossless."""

    kind: str
    dims: tuple[int, int] | None = None
    scalars: dict[str, complex] = field(default_factory=dict)
    vectors: dict[str, np.ndarray] = field(default_factory=dict)
    spans: dict[str, list[np.ndarray]] = field(default_factory=dict)
    table: classical.JointTable | None = None
    eigenvalues: tuple[float, ...] = ()
    f_values: tuple[float, ...] = ()
    eigenvectors: list[np.ndarray] | None = None
    tolerance: float = DEFAULT_TOLERANCE

    @classmethod
    def from_dict(cls, data) -> Scenario:
        if not isinstance(data, dict):
            raise ScenarioError("<root>", "scenario must be a JSON object")
        kind = _require(data, "kind")
        if kind not in KINDS:
            raise ScenarioError("kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        tol = data.get("tolerance", DEFAULT_TOLERANCE)
        if not isinstance(tol, (int, float)) or isinstance(tol, bool) or not tol > 0:
            raise ScenarioError("tolerance", f"expected a positive number, got {tol!r}")
        sc = cls(kind=kind, tolerance=float(tol))

        if kind in ("entangled_pair", "product", "raw_state"):
            d1, d2 = sc.dims = _dims(data)
            sc.spans["P"] = _span(_require(data, "P"), d1, "P")
            sc.spans["Q"] = _span(_require(data, "Q"), d2, "Q")
        if kind == "entangled_pair":
            if d1 != d2:
                raise ScenarioError("dims", "entangled_pair needs equal factor dimensions")
            sc.scalars = {k: _complex(_require(data, k), k) for k in ("a", "b")}
            sc.vectors = {k: _vector(_require(data, k), d1, k) for k in ("psi", "phi")}
        elif kind == "product":
            sc.vectors = {"u": _vector(_require(data, "u"), d1, "u"), "v": _vector(_require(data, "v"), d2, "v")}
        elif kind == "raw_state":
            sc.vectors = {"eta": _vector(_require(data, "eta"), d1 * d2, "eta")}
        elif kind == "classical_table":
            try:
                sc.table = classical.JointTable.from_dict(_require(data, "table"))
            except ScenarioError:
                raise
            except (ContractViolation, AttributeError, TypeError) as exc:
                raise ScenarioError("table", str(exc)) from None
        elif kind == "observable_demo":
            vals = _require(data, "eigenvalues")
            fvals = _require(data, "f_values")
            if not (isinstance(vals, list) and vals and all(isinstance(x, (int, float)) for x in vals)):
                raise ScenarioError("eigenvalues", "expected a non-empty list of numbers")
            if not (isinstance(fvals, list) and len(fvals) == len(vals) and all(isinstance(x, (int, float)) for x in fvals)):
                raise ScenarioError("f_values", "expected one number per eigenvalue")
            table: dict[float, float] = {}
            for a, fa in zip(vals, fvals):
                if table.setdefault(float(a), float(fa)) != float(fa):
                    raise ScenarioError("f_values", f"eigenvalue {a} is given two different f-values")
            sc.eigenvalues = tuple(float(x) for x in vals)
            sc.f_values = tuple(float(x) for x in fvals)
            n = len(vals)
            if "eigenvectors" in data:
                raw = data["eigenvectors"]
                if not isinstance(raw, list) or len(raw) != n:
                    raise ScenarioError("eigenvectors", f"expected {n} vectors")
                sc.eigenvectors = [_vector(v, n, f"eigenvectors[{i}]") for i, v in enumerate(raw)]
            sc.vectors = {"psi": _vector(_require(data, "psi"), n, "psi")}
        sc.build()  # surface invariant violations at parse time
        return sc

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.dims is not None:
            out["dims"] = list(self.dims)
        for k, z in self.scalars.items():
            out[k] = [z.real, z.imag]
        for k, v in self.vectors.items():
            out[k] = _encode_vector(v)
        for k, vs in self.spans.items():
            out[k] = [_encode_vector(v) for v in vs]
        if self.table is not None:
            out["table"] = self.table.to_dict()
        if self.kind == "observable_demo":
            out["eigenvalues"] = list(self.eigenvalues)
            out["f_values"] = list(self.f_values)
            if self.eigenvectors is not None:
                out["eigenvectors"] = [_encode_vector(v) for v in self.eigenvectors]
        out["tolerance"] = self.tolerance
        return out

    def build(self):
        """Construct the model objects, mapping invariant violations to field errors."""
        if self.kind == "classical_table":
            return self.table
        if self.kind == "observable_demo":
            psi = _state(self.vectors["psi"], "psi")
            try:
                if self.eigenvectors is None:
                    obs = quantum.ObservableSpec.diagonal(self.eigenvalues)
                else:
                    vecs = tuple(StateVector(v) for v in self.eigenvectors)
                    obs = quantum.ObservableSpec(self.eigenvalues, vecs)
            except ContractViolation as exc:
                raise ScenarioError("eigenvectors", str(exc)) from None
            return psi, obs, dict(zip(self.eigenvalues, self.f_values))

        space = CompositeSpace(*self.dims)
        events = {}
        for name in ("P", "Q"):
            try:
                events[name] = Projector.from_span(self.spans[name])
            except ContractViolation as exc:
                raise ScenarioError(name, str(exc)) from None
        ev = quantum.EventPair(events["P"], events["Q"], space)
        if self.kind == "raw_state":
            eta = _state(self.vectors["eta"], "eta")
        elif self.kind == "product":
            u = _state(self.vectors["u"], "u")
            v = _state(self.vectors["v"], "v")
            eta = tensor_state(u, v, space)
        else:
            psi = _state(self.vectors["psi"], "psi")
            phi = _state(self.vectors["phi"], "phi")
            try:
                spec = quantum.EntangledPairSpec(self.scalars["a"], self.scalars["b"], psi, phi)
            except ContractViolation as exc:
                raise ScenarioError("a/b/psi/phi", str(exc)) from None
            eta = quantum.build_entangled_state(spec, space)
        return eta, ev


def load(path: str | Path) -> Scenario:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError("<json>", f"malformed JSON: {exc}") from None
    return Scenario.from_dict(data)


def run(sc: Scenario) -> tuple[dict, bool]:
    """Run the verification that fits the scenario kind; returns ``(report, passed)``."""
    tol = sc.tolerance
    if sc.kind == "classical_table":
        t = sc.table
        conds = {}
        for axis, n in (("Y", t.cols), ("X", t.rows)):
            for k in range(n):
                if (classical.marginal(t, axis)[k]) > EPS_ZERO:
                    conds[f"{axis}={k}"] = list(classical.condition(t, axis, k).probabilities)
        indep = classical.is_independent(t)
        residual = classical_residual(t)
        report = {
            "kind": sc.kind,
            "marginal_x": classical.marginal(t, "X").tolist(),
            "marginal_y": classical.marginal(t, "Y").tolist(),
            "conditionals": conds,
            "independent": indep.independent,
            "max_deviation": indep.max_deviation,
            "chain_rule_residual": residual,
        }
        if t.xvals is not None and t.yvals is not None:
            report["covariance"] = classical.covariance(t)
        return report, residual <= tol

    if sc.kind == "observable_demo":
        psi, obs, ftable = sc.build()
        demo = correspondence.observable_report(psi, obs, ftable)
        gap = abs(demo.quantum_covariance - demo.classical_covariance)
        report = {"kind": sc.kind, **demo.to_dict(), "covariance_route_gap": gap}
        return report, gap <= tol

    eta, ev = sc.build()
    rep = correspondence.verify_correspondence(eta, ev)
    report = {"kind": sc.kind, "dims": list(sc.dims), **rep.to_dict(), "schmidt_rank": schmidt_rank(eta, ev.space)}
    return report, rep.max_discrepancy <= tol
