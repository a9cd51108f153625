"""
Finite joint distributions of two discrete variables X (rows) and Y (columns).

Observing a value of one variable shrinks the sample space to a single row
or column; predictions afterwards use that slice renormalized by its
marginal mass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, NamedTuple, Sequence

import numpy as np

from .constants import EPS_ZERO, TABLE_RENORM_SLACK, TAU_INDEP
from .errors import DimensionMismatch, InvalidTableError, ZeroProbabilityError

Axis = Literal["X", "Y"]


def _check_axis(axis: str) -> Axis:
    if axis not in ("X", "Y"):
        raise InvalidTableError(f"axis must be 'X' or 'Y', got {axis!r}")
    return axis  # type: ignore[return-value]


@dataclass(frozen=True, eq=False)
class JointTable:
    """Dense ``rows × cols`` probability table, optionally labelled with variable values.

    Total mass within ``TABLE_RENORM_SLACK`` of one is rescaled to exactly
    one; anything further off is rejected.
    """

    mass: np.ndarray
    xvals: tuple[float, ...] | None = None
    yvals: tuple[float, ...] | None = None

    def __post_init__(self):
        m = np.array(self.mass, dtype=float)
        if m.ndim != 2 or m.size == 0:
            raise InvalidTableError(f"mass must be a non-empty 2-D array, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidTableError("mass contains NaN or Inf")
        if np.any(m < 0):
            raise InvalidTableError(f"negative mass {m.min()!r}")
        total = m.sum()
        if abs(total - 1.0) > TABLE_RENORM_SLACK:
            raise InvalidTableError(f"total mass {total!r} is not 1")
        m = m / total
        m.setflags(write=False)
        object.__setattr__(self, "mass", m)
        for name, n in (("xvals", m.shape[0]), ("yvals", m.shape[1])):
            vals = getattr(self, name)
            if vals is not None:
                vals = tuple(float(v) for v in vals)
                if len(vals) != n:
                    raise DimensionMismatch(f"{name} has {len(vals)} entries, table needs {n}")
                object.__setattr__(self, name, vals)

    @property
    def rows(self) -> int:
        return self.mass.shape[0]

    @property
    def cols(self) -> int:
        return self.mass.shape[1]

    @classmethod
    def product(cls, px: Sequence[float], py: Sequence[float]) -> JointTable:
        return cls(np.outer(px, py))

    @classmethod
    def from_dict(cls, data: dict) -> JointTable:
        """Parse the ``{"rows", "cols", "mass", "xvals"?, "yvals"?}`` literal.

        ``mass`` is a row-major flat list of ``rows * cols`` numbers; a nested
        list of rows is accepted too.
        """
        try:
            rows, cols = int(data["rows"]), int(data["cols"])
            flat = np.asarray(data["mass"], dtype=float).ravel()
        except KeyError as exc:
            raise InvalidTableError(f"table literal is missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise InvalidTableError(f"table literal has a malformed field: {exc}") from None
        if rows < 1 or cols < 1 or flat.size != rows * cols:
            raise InvalidTableError(f"mass has {flat.size} entries, expected rows*cols = {rows * cols}")
        return cls(flat.reshape(rows, cols), xvals=data.get("xvals"), yvals=data.get("yvals"))

    def to_dict(self) -> dict:
        out = {"rows": self.rows, "cols": self.cols, "mass": self.mass.ravel().tolist()}
        if self.xvals is not None:
            out["xvals"] = list(self.xvals)
        if self.yvals is not None:
            out["yvals"] = list(self.yvals)
        return out


@dataclass(frozen=True)
class ConditionalTable:
    """Distribution of the other variable after observing ``given_axis = given_value``."""

    given_axis: Axis
    given_value: int
    probabilities: tuple[float, ...]

    def __getitem__(self, i: int) -> float:
        return self.probabilities[i]

    def __len__(self) -> int:
        return len(self.probabilities)


class IndependenceCheck(NamedTuple):
    independent: bool
    max_deviation: float

    def __bool__(self) -> bool:
        return self.independent


def event_probability(t: JointTable, event: Iterable[tuple[int, int]]) -> float:
    """Mass of a set of cells."""
    cells = set(event)
    for i, j in cells:
        if not (0 <= i < t.rows and 0 <= j < t.cols):
            raise InvalidTableError(f"cell ({i}, {j}) outside a {t.rows}x{t.cols} table")
    return float(sum(t.mass[i, j] for i, j in cells))


def marginal(t: JointTable, axis: Axis) -> np.ndarray:
    """Row sums for X, column sums for Y."""
    return t.mass.sum(axis=1 if _check_axis(axis) == "X" else 0)


def condition(t: JointTable, axis: Axis, value: int) -> ConditionalTable:
    """Restrict to the slice ``axis = value`` and renormalize it."""
    axis = _check_axis(axis)
    n = t.cols if axis == "Y" else t.rows
    if not 0 <= value < n:
        raise InvalidTableError(f"{axis}={value} outside table of size {n}")
    slice_ = t.mass[:, value] if axis == "Y" else t.mass[value, :]
    total = float(slice_.sum())
    if total <= EPS_ZERO:
        raise ZeroProbabilityError(total, f"{axis}={value}")
    return ConditionalTable(axis, value, tuple((slice_ / total).tolist()))


def is_independent(t: JointTable, tol: float = TAU_INDEP) -> IndependenceCheck:
    dev = float(np.max(np.abs(t.mass - np.outer(marginal(t, "X"), marginal(t, "Y")))))
    return IndependenceCheck(dev <= tol, dev)


def covariance(t: JointTable, xvals: Sequence[float] | None = None, yvals: Sequence[float] | None = None) -> float:
    """``E[XY] − E[X]E[Y]``; value labels default to the table's own."""
    x = np.asarray(t.xvals if xvals is None else xvals, dtype=float)
    y = np.asarray(t.yvals if yvals is None else yvals, dtype=float)
    if x.shape != (t.rows,) or y.shape != (t.cols,):
        raise DimensionMismatch(f"value vectors of sizes {x.size}, {y.size} for a {t.rows}x{t.cols} table")
    return float(x @ t.mass @ y - (x @ marginal(t, "X")) * (y @ marginal(t, "Y")))
