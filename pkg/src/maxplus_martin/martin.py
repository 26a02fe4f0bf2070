"""Martin kernel, recurrence classes, and the spectral representation.

Everything here works relative to a star matrix S = A* with finite entries
and the basepoint b carried by its source kernel.  The Martin column of a
state y is K<.,y> = A*<.,y> - A*<b,y>; two states x, y are equivalent when
A*<x,y> + A*<y,x> = 0, and equivalent states share a column, so columns are
kept once per recurrence class.  Columns that are harmonic for the source
kernel form the minimal Martin space, and every harmonic function is a
max-plus combination of them; the spectral measure recovers the greatest
such combination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import AssumptionViolated, DimensionMismatch, NotHarmonic, NotNormalized
from .kernel import KernelMatrix, StarMatrix, is_harmonic
from .semiring import NEG_INF, Value, oplus, otimes, values_close

TOL = 1e-9


def _require_finite(star: StarMatrix):
    if not star.finite:
        raise AssumptionViolated(
            "star kernel has -inf entries, so Martin objects are undefined"
        )


def recurrence_classes(star: StarMatrix, tol: float = TOL) -> list[list[int]]:
    """Partition of the states by x ~ y iff A*<x,y> + A*<y,x> = 0.

    The relation is transitive when equality is exact; with float entries
    the tolerance could break that, so the closure is taken explicitly
    (union-find).  Classes are reported sorted by smallest member.
    """
    n = star.n
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    e = star.entries
    for x in range(n):
        for y in range(x + 1, n):
            if values_close(otimes(e[x][y], e[y][x]), 0, tol):
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[max(rx, ry)] = min(rx, ry)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [sorted(groups[r]) for r in sorted(groups)]


@dataclass(frozen=True)
class MartinObject:
    """A deduplicated Martin column together with its recurrence class."""

    column: tuple[Value, ...]
    class_id: int
    members: tuple[int, ...]
    harmonic: bool
    minimal: bool

    @property
    def representative(self) -> int:
        return self.members[0]


def martin_kernel(star: StarMatrix, tol: float = TOL) -> list[MartinObject]:
    """Martin columns K<.,y> = A*<.,y> - A*<b,y>, one per recurrence class.

    A column is minimal when it is harmonic for the source kernel and its
    self pairing H(xi, xi) vanishes; the latter is automatic for kernel
    columns but asserted anyway.
    """
    _require_finite(star)
    b = star.basepoint
    e = star.entries
    objects = []
    for cid, members in enumerate(recurrence_classes(star, tol)):
        y = members[0]
        shift = e[b][y]
        column = tuple(e[x][y] - shift for x in range(star.n))
        harmonic = is_harmonic(star.source, column, tol)
        self_pair = max(otimes(e[b][x], column[x]) for x in members)
        if not values_close(self_pair, 0, tol):
            raise AssumptionViolated(
                f"self pairing of class {cid} is {self_pair!r}, expected 0"
            )
        objects.append(
            MartinObject(
                column=column,
                class_id=cid,
                members=tuple(members),
                harmonic=harmonic,
                minimal=harmonic,
            )
        )
    return objects


def natural_kernel(star: StarMatrix) -> tuple[tuple[Value, ...], ...]:
    """Basepoint-normalized kernel A<x,y> = A*<b,x> + A*<x,y> - A*<b,y>.

    Every entry is <= 0 and the basepoint row vanishes.
    """
    _require_finite(star)
    b = star.basepoint
    e = star.entries
    return tuple(
        tuple(e[b][x] + e[x][y] - e[b][y] for y in range(star.n))
        for x in range(star.n)
    )


def mu(xi: Sequence[Value], eta: MartinObject, star: StarMatrix) -> Value:
    """Boundary measure of xi at the class eta.

    In a finite space the upper-semicontinuous envelope collapses to a
    maximum over the representatives of the class:
    mu_xi(eta) = max_{x in eta} A*<b,x> + xi(x).
    """
    _require_finite(star)
    if len(xi) != star.n:
        raise DimensionMismatch(
            f"function has {len(xi)} values for {star.n} states"
        )
    b = star.basepoint
    e = star.entries
    best = NEG_INF
    for x in eta.members:
        v = otimes(e[b][x], xi[x])
        if best < v:
            best = v
    return best


def H(eta: MartinObject, xi: MartinObject, star: StarMatrix) -> Value:
    """Pairing of two boundary classes, H(eta, xi) = mu_{xi}(eta)."""
    return mu(xi.column, eta, star)


def minimal_martin_space(star: StarMatrix, tol: float = TOL) -> list[MartinObject]:
    return [obj for obj in martin_kernel(star, tol) if obj.minimal]


def spectral_measure(
    h: Sequence[Value],
    minimal: Sequence[MartinObject],
    star: StarMatrix,
    tol: float = TOL,
) -> dict[MartinObject, Value]:
    """Greatest representing measure of a harmonic function.

    Raises NotHarmonic unless A h = h for the source kernel.
    """
    _require_finite(star)
    if not is_harmonic(star.source, h, tol):
        raise NotHarmonic("spectral measures exist only for harmonic functions")
    return {w: mu(h, w, star) for w in minimal}


def represent(nu: Mapping[MartinObject, Value], star: StarMatrix) -> tuple[Value, ...]:
    """Max-plus combination sup_w nu(w) + w of minimal columns."""
    out = [NEG_INF] * star.n
    for w, weight in nu.items():
        col = w.column
        for x in range(star.n):
            out[x] = oplus(out[x], otimes(weight, col[x]))
    return tuple(out)


def extremal_witness(
    h: Sequence[Value],
    minimal: Sequence[MartinObject],
    star: StarMatrix,
    tol: float = TOL,
) -> MartinObject | None:
    """Minimal column w with h = mu_h(w) + w pointwise, if one exists.

    Requires h harmonic and normalized (h(b) = 0).  A harmonic function is
    an extreme generator of the harmonic cone exactly when such a witness
    exists.
    """
    _require_finite(star)
    if not is_harmonic(star.source, h, tol):
        raise NotHarmonic("extremality is defined for harmonic functions")
    if not values_close(h[star.basepoint], 0, tol):
        raise NotNormalized("extremality expects h(basepoint) = 0")
    for w in minimal:
        c = mu(h, w, star)
        if all(
            values_close(h[x], otimes(c, w.column[x]), tol)
            for x in range(star.n)
        ):
            return w
    return None


def is_extremal(
    h: Sequence[Value],
    minimal: Sequence[MartinObject],
    star: StarMatrix,
    tol: float = TOL,
) -> bool:
    return extremal_witness(h, minimal, star, tol) is not None
