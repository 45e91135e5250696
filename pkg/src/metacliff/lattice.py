"""Truncated Z^4 point-ket window: shift operators, coordinate operators,
commutators, and affine vector-field representatives.

Operators are sparse dyad sums on window points.  A shift whose image
leaves the window is dropped, so truncation effects are explicit; exact
claims are asserted on interior kets only.
"""

from __future__ import annotations

import itertools

from .exterior import BasisSpace, Extensor
from .linalg import Matrix
from .scalars import ONE, ZERO, Scalar

AXES = (1, 2, 3, 4)


def _check_axis(mu: int) -> int:
    if mu not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {mu}")
    return mu - 1


class LatticeWindow:
    """All points (n1, n2, n3, n4) with |n_i| <= half_width."""

    def __init__(self, half_width: int):
        if half_width < 1:
            raise ValueError("half width must be >= 1")
        self.half_width = half_width
        rng = range(-half_width, half_width + 1)
        self.points = [tuple(p) for p in itertools.product(rng, repeat=4)]
        self._point_set = set(self.points)
        self._space: BasisSpace | None = None

    @property
    def space(self) -> BasisSpace:
        if self._space is None:
            self._space = BasisSpace("pt", self.points, duals=True)
        return self._space

    def __contains__(self, pt: tuple) -> bool:
        return pt in self._point_set

    def is_interior(self, pt: tuple, margin: int = 1) -> bool:
        bound = self.half_width - margin
        return all(abs(c) <= bound for c in pt)

    def interior_points(self, margin: int = 1) -> list[tuple]:
        return [p for p in self.points if self.is_interior(p, margin)]

    def in_shell(self, pt: tuple, layers: int = 2) -> bool:
        """Outermost `layers` coordinate layers of the window."""
        return max(abs(c) for c in pt) >= self.half_width - layers + 1

    def __repr__(self) -> str:
        return f"LatticeWindow(N={self.half_width})"


def _shift(pt: tuple, axis0: int, step: int) -> tuple:
    return pt[:axis0] + (pt[axis0] + step,) + pt[axis0 + 1:]


class LatticeOperator:
    """Sparse sum of scalar-weighted dyads |out><in| on window points."""

    __slots__ = ("window", "table")

    def __init__(self, window: LatticeWindow, table: dict | None = None):
        self.window = window
        self.table = {k: v for k, v in (table or {}).items() if not v.is_zero}

    @classmethod
    def zero(cls, window: LatticeWindow) -> "LatticeOperator":
        return cls(window)

    @classmethod
    def identity(cls, window: LatticeWindow) -> "LatticeOperator":
        return cls(window, {(p, p): ONE for p in window.points})

    @property
    def is_zero(self) -> bool:
        return not self.table

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LatticeOperator)
            and self.window is other.window
            and self.table == other.table
        )

    def __add__(self, other: "LatticeOperator") -> "LatticeOperator":
        self._check(other)
        out = dict(self.table)
        for k, v in other.table.items():
            acc = out.get(k)
            out[k] = v if acc is None else acc + v
        return LatticeOperator(self.window, out)

    def __neg__(self) -> "LatticeOperator":
        return LatticeOperator(self.window, {k: -v for k, v in self.table.items()})

    def __sub__(self, other: "LatticeOperator") -> "LatticeOperator":
        return self + (-other)

    def scale(self, c) -> "LatticeOperator":
        c = Scalar.of(c)
        return LatticeOperator(self.window, {k: c * v for k, v in self.table.items()})

    def _check(self, other: "LatticeOperator") -> None:
        if self.window is not other.window:
            raise ValueError("operators live on different windows")

    def compose(self, other: "LatticeOperator") -> "LatticeOperator":
        """Operator product self . other (apply `other` first)."""
        self._check(other)
        by_in: dict = {}
        for (out_pt, in_pt), c in self.table.items():
            by_in.setdefault(in_pt, []).append((out_pt, c))
        table: dict = {}
        for (mid, in_pt), c2 in other.table.items():
            for out_pt, c1 in by_in.get(mid, ()):
                key = (out_pt, in_pt)
                prod = c1 * c2
                acc = table.get(key)
                s = prod if acc is None else acc + prod
                if s.is_zero:
                    table.pop(key, None)
                else:
                    table[key] = s
        return LatticeOperator(self.window, table)

    def apply_point(self, pt: tuple) -> dict:
        out: dict = {}
        for (out_pt, in_pt), c in self.table.items():
            if in_pt == pt:
                acc = out.get(out_pt)
                out[out_pt] = c if acc is None else acc + c
        return {p: c for p, c in out.items() if not c.is_zero}

    def to_extensor(self) -> Extensor:
        """Bridge into the operator algebra over the point sector."""
        space = self.window.space
        out = Extensor.zero()
        acc: dict = {}
        for (out_pt, in_pt), c in self.table.items():
            word = (space.atom(out_pt), space.atom(in_pt, dual=True))
            acc[word] = c
        return Extensor(acc)

    def __repr__(self) -> str:
        return f"LatticeOperator<{len(self.table)} dyads on {self.window!r}>"


def partial_mu(window: LatticeWindow, mu: int) -> LatticeOperator:
    """Down-shift operator along an axis; boundary images are dropped."""
    ax = _check_axis(mu)
    table = {}
    for pt in window.points:
        img = _shift(pt, ax, -1)
        if img in window:
            table[(img, pt)] = ONE
    return LatticeOperator(window, table)


def coord_mu(window: LatticeWindow, mu: int) -> LatticeOperator:
    """Coordinate operator |n+1_mu><n| * (n_mu + 1), truncated at the rim."""
    ax = _check_axis(mu)
    table = {}
    for pt in window.points:
        img = _shift(pt, ax, 1)
        coeff = Scalar.of(pt[ax] + 1)
        if img in window and not coeff.is_zero:
            table[(img, pt)] = coeff
    return LatticeOperator(window, table)


def commutator(a: LatticeOperator, b: LatticeOperator) -> LatticeOperator:
    return a.compose(b) - b.compose(a)


def diffeo_rep(window: LatticeWindow, alpha=None, omega=None, higher=None) -> LatticeOperator:
    """Representative -dx . partial of an affine vector field
    dx^mu = alpha^mu + omega^mu_nu x^nu, coordinates left of shifts.
    """
    if higher is not None:
        raise ValueError("vector fields of degree > 1 are out of scope")
    gen = LatticeOperator.zero(window)
    partials = {mu: partial_mu(window, mu) for mu in AXES}
    if alpha is not None:
        for mu in AXES:
            a = Scalar.of(alpha[mu - 1])
            if not a.is_zero:
                gen = gen - partials[mu].scale(a)
    if omega is not None:
        coords = {nu: coord_mu(window, nu) for nu in AXES}
        for mu in AXES:
            for nu in AXES:
                w = Scalar.of(omega[mu - 1, nu - 1])
                if not w.is_zero:
                    gen = gen - coords[nu].compose(partials[mu]).scale(w)
    return gen


class GAntisymmetryError(ValueError):
    pass


def g_antisymmetry_defect(omega: Matrix, g: Matrix) -> Matrix:
    """omega.g + g.omega^T; zero exactly when indices lowered with g are
    antisymmetric."""
    return omega * g + g * omega.transpose()


def poincare_gen(window: LatticeWindow, alpha, omega, g: Matrix) -> LatticeOperator:
    """Affine generator with g-antisymmetric rotation part.

    Violating generators (shears, dilations) are rejected here; build them
    through :func:`diffeo_rep` and flag them instead.
    """
    if omega is not None and not g_antisymmetry_defect(omega, g).is_zero():
        raise GAntisymmetryError("omega.g + g.omega^T != 0: shear/dilation generator")
    return diffeo_rep(window, alpha=alpha, omega=omega)


def induced_matrix(gen: LatticeOperator, window: LatticeWindow) -> Matrix:
    """Matrix M with [gen, partial_lambda] = M^mu_lambda partial_mu on
    doubly-interior kets; raises if the generator is not affine."""
    inner = window.interior_points(margin=2)
    rows = [[None] * 4 for _ in range(4)]
    for lam in AXES:
        comm = commutator(gen, partial_mu(window, lam))
        for pt in inner:
            seen = dict.fromkeys(AXES, ZERO)
            for out_pt, c in comm.apply_point(pt).items():
                for mu in AXES:
                    if out_pt == _shift(pt, mu - 1, -1):
                        seen[mu] = c
                        break
                else:
                    raise ValueError("generator is not affine: stray image ket")
            for mu in AXES:
                prev = rows[mu - 1][lam - 1]
                if prev is None:
                    rows[mu - 1][lam - 1] = seen[mu]
                elif prev != seen[mu]:
                    raise ValueError("generator is not affine: inconsistent extraction")
    return Matrix([[x if x is not None else ZERO for x in row] for row in rows])
