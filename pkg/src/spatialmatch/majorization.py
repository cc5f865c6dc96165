"""Majorization order and constructive transfer decompositions.

A vector ``x`` majorizes ``y`` when every prefix sum of the descending
rearrangement of ``x`` dominates that of ``y`` and the totals agree; "more
majorized" means "more unequal".  Any majorized pair is connected by at most
``n - 1`` pairwise transfers, each moving an amount ``tau`` from a larger
coordinate to a smaller one, and the decomposition below constructs such a
chain explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MajorizationError",
    "TTransformStep",
    "TTransformDecomposition",
    "majorizes",
    "uniformize",
    "t_transform_decompose",
    "apply_t_transform",
]

_REL_TOL = 1e-9


class MajorizationError(ValueError):
    """Raised when an operation requires ``x`` to majorize ``y`` and it does not."""


@dataclass(frozen=True)
class TTransformStep:
    """Move ``tau`` from coordinate ``i`` (larger) to coordinate ``j`` (smaller)."""

    i: int
    j: int
    tau: float

    def __post_init__(self) -> None:
        if self.i == self.j:
            raise ValueError("transfer endpoints must differ")
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")


@dataclass(frozen=True)
class TTransformDecomposition:
    """Steps on the descending-sorted frame, plus the sort permutation of ``x``.

    ``steps[r]`` acts on the vector sorted descending; ``sort_permutation``
    maps sorted positions back to the original coordinates of ``x``
    (``x[sort_permutation]`` is descending).
    """

    steps: tuple[TTransformStep, ...]
    sort_permutation: np.ndarray


def _scale(x: np.ndarray, y: np.ndarray) -> float:
    return max(1.0, float(np.abs(x).sum()), float(np.abs(y).sum()))


def majorizes(x, y) -> bool:
    """True iff ``x`` majorizes ``y`` (equal sums, dominated prefix sums).

    Comparisons carry a relative tolerance of 1e-9 so that vectors produced
    by floating-point arithmetic are ordered as their exact counterparts.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    tol = _REL_TOL * _scale(x, y)
    xs = np.sort(x)[::-1]
    ys = np.sort(y)[::-1]
    if abs(xs.sum() - ys.sum()) > tol:
        return False
    prefix_gap = np.cumsum(xs) - np.cumsum(ys)
    return bool(np.all(prefix_gap >= -tol))


def uniformize(x) -> np.ndarray:
    """Constant vector with the same mean; it is majorized by any input."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("cannot uniformize an empty vector")
    return np.full_like(x, x.mean())


def t_transform_decompose(x, y) -> TTransformDecomposition:
    """Decompose the passage from ``x`` down to ``y`` into pairwise transfers.

    Requires ``majorizes(x, y)``.  Working on the descending rearrangements,
    each step picks the last surplus coordinate ``i`` and the first deficit
    coordinate ``j`` after it, and moves ``tau = min(z_i - y_i, y_j - z_j)``,
    which pins at least one of the two coordinates to its target.  At most
    ``n - 1`` steps result, intermediates stay between the endpoints in the
    majorization order, and the moved amounts sum to half the l1 distance
    between the rearrangements.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not majorizes(x, y):
        raise MajorizationError("x does not majorize y")
    perm = np.argsort(-x, kind="stable")
    z = x[perm].copy()
    target = np.sort(y)[::-1]

    # Exact float comparisons, and each step writes the pinned coordinate's
    # target value directly, so pinned coordinates never re-enter the search
    # and the residual after the loop is pure rounding noise.  In exact
    # arithmetic the last surplus always has a deficit after it; rounding can
    # leave ulp-sized surpluses at block boundaries with nothing after them,
    # so earlier surpluses are tried before giving up.  For any surplus i and
    # deficit j > i the move is admissible: z_i > target_i >= target_j > z_j
    # bounds tau strictly below z_i - z_j.
    steps: list[TTransformStep] = []
    n = z.size
    for _ in range(n):
        surplus = np.nonzero(z > target)[0]
        pair = None
        for i in surplus[::-1].tolist():
            deficit = np.nonzero(z[i + 1 :] < target[i + 1 :])[0]
            if deficit.size:
                pair = (i, i + 1 + int(deficit[0]))
                break
        if pair is None:
            break
        i, j = pair
        give, need = z[i] - target[i], target[j] - z[j]
        if give <= need:
            tau = give
            z[i] = target[i]
            z[j] += tau
        else:
            tau = need
            z[i] -= tau
            z[j] = target[j]
        steps.append(TTransformStep(i=i, j=j, tau=float(tau)))
    return TTransformDecomposition(steps=tuple(steps), sort_permutation=perm)


def apply_t_transform(z, step: TTransformStep) -> np.ndarray:
    """Apply one transfer: coordinate ``i`` loses ``tau``, coordinate ``j`` gains it.

    Admissible moves satisfy ``0 < tau <= z[i] - z[j]``, i.e. the transfer is
    an averaging of the pair and never pushes past a full swap.
    """
    z = np.asarray(z, dtype=float).copy()
    gap = z[step.i] - z[step.j]
    if not (0.0 < step.tau <= gap):
        raise ValueError(f"tau={step.tau} outside admissible interval (0, {gap}]")
    z[step.i] -= step.tau
    z[step.j] += step.tau
    return z
