"""The null metric form, the Kahler gamma representation, and the four
vacuum states built over a shift-symbol sector.

The shift sector comes in two flavours.  The abstract sector has four
formal symbols whose operator products are free (an ordered pair of
symbols is a new basis label), which keeps every symmetry check a finite
exact computation.  The lattice sector realises the symbols as down-shift
operators on a window and their products as operator composition.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools

from .exterior import Atom, BasisSpace, Extensor, SectorError, wedge, word_sort_key
from .lattice import AXES, LatticeOperator, LatticeWindow, partial_mu
from .linalg import Matrix
from .multilevel import (
    Derivation,
    Substitution,
    index_substitution,
    linear_rule,
    product_index_rule,
    relabel_substitution,
    unitize,
)
from .scalars import (
    HALF,
    I,
    ONE,
    SQRT3,
    TOWER_QI_SQRT3,
    ZERO,
    Scalar,
    require_tower,
)


class MetricForm:
    """Symmetric nondegenerate 4x4 form; the default is 1 - delta."""

    def __init__(self, matrix: Matrix):
        if matrix.shape != (4, 4):
            raise ValueError("metric must be 4x4")
        if matrix != matrix.transpose():
            raise ValueError("metric must be symmetric")
        self.matrix = matrix
        self.determinant = matrix.det()
        if self.determinant.is_zero:
            raise ValueError("metric must be nondegenerate")
        self._inverse: Matrix | None = None

    @classmethod
    def null_form(cls) -> "MetricForm":
        return cls(Matrix([[ZERO if i == j else ONE for j in range(4)] for i in range(4)]))

    @classmethod
    def kronecker(cls) -> "MetricForm":
        return cls(Matrix.identity(4))

    def __getitem__(self, ij) -> Scalar:
        return self.matrix[ij]

    @property
    def inverse(self) -> Matrix:
        if self._inverse is None:
            self._inverse = self.matrix.inverse()
        return self._inverse

    def charpoly(self) -> list[Scalar]:
        return self.matrix.charpoly()

    def signature(self) -> tuple[int, int]:
        """(positive, negative) inertia via exact symmetric congruence."""
        a = [[x.to_fraction() for x in row] for row in self.matrix.rows]
        n = 4
        for k in range(n):
            if not a[k][k]:
                swap = next((j for j in range(k + 1, n) if a[j][j]), None)
                if swap is not None:
                    a[k], a[swap] = a[swap], a[k]
                    for row in a:
                        row[k], row[swap] = row[swap], row[k]
                else:
                    j = next((j for j in range(k + 1, n) if a[k][j]), None)
                    if j is None:
                        continue
                    for col in range(n):
                        a[k][col] += a[j][col]
                    for row in a:
                        row[k] += row[j]
            pivot = a[k][k]
            for i in range(k + 1, n):
                if a[i][k]:
                    f = a[i][k] / pivot
                    for col in range(n):
                        a[i][col] -= f * a[k][col]
                    for row in range(n):
                        a[row][i] -= f * a[row][k]
        pos = sum(1 for k in range(n) if a[k][k] > 0)
        neg = sum(1 for k in range(n) if a[k][k] < 0)
        return (pos, neg)

    def is_permutation_invariant(self) -> bool:
        for perm in itertools.permutations(range(4)):
            for i in range(4):
                for j in range(4):
                    if self.matrix[perm[i], perm[j]] != self.matrix[i, j]:
                        return False
        return True


GAMMA_SECTOR = "gam"
SIGMA_SECTOR = "sig"
AUX_SECTOR = "y"


class GammaRep:
    """Wedge-plus-contraction Clifford action on a 16-dimensional carrier.

    gamma^mu = (wedge by the mu-th auxiliary vector) + (contraction by
    g^{mu nu} times the nu-th dual), which satisfies
    {gamma^mu, gamma^nu} = 2 g^{mu nu} on the nose for any symmetric g.
    The volume element is normalised so that its square is -1, which for
    det g = -3 costs a factor 1/sqrt3.
    """

    def __init__(self, g: MetricForm):
        self.g = g
        atoms = [Atom(AUX_SECTOR, i) for i in range(4)]
        words = []
        for k in range(5):
            for combo in itertools.combinations(range(4), k):
                words.append(tuple(atoms[i] for i in combo))
        self.carrier_words = sorted(words, key=word_sort_key)
        self._index = {w: i for i, w in enumerate(self.carrier_words)}
        self.dim = len(self.carrier_words)
        self.gammas = [self._gamma_matrix(mu) for mu in range(4)]
        self.volume_raw = self.gammas[0] * self.gammas[1] * self.gammas[2] * self.gammas[3]
        self._gamma5: Matrix | None = None
        self._projectors: tuple[Matrix, Matrix] | None = None
        self._sigmas: list[Matrix] | None = None

    @property
    def gamma5(self) -> Matrix:
        """Volume element scaled so its square is exactly -1."""
        if self._gamma5 is None:
            vol_sq = self.volume_raw * self.volume_raw
            if vol_sq == Matrix.identity(self.dim).scale(Scalar.of(-3)):
                self._gamma5 = self.volume_raw.scale(SQRT3 / Scalar.of(3))
            elif vol_sq == Matrix.identity(self.dim).scale(Scalar.of(-1)):
                self._gamma5 = self.volume_raw
            else:
                raise ValueError("volume normalisation lies outside the scalar tower")
        return self._gamma5

    @property
    def proj_plus(self) -> Matrix:
        if self._projectors is None:
            half_id = Matrix.identity(self.dim).scale(HALF)
            self._projectors = (
                half_id - self.gamma5.scale(I * HALF),
                half_id + self.gamma5.scale(I * HALF),
            )
        return self._projectors[0]

    @property
    def proj_minus(self) -> Matrix:
        self.proj_plus
        return self._projectors[1]

    @property
    def sigmas(self) -> list[Matrix]:
        """Chirality-block compressions of the gamma operators."""
        if self._sigmas is None:
            self._sigmas = [self.proj_minus * self.gammas[mu] * self.proj_plus
                            for mu in range(4)]
        return self._sigmas

    def _gamma_matrix(self, mu: int) -> Matrix:
        cols = []
        for word in self.carrier_words:
            image: dict = {}
            # wedge part
            atom = Atom(AUX_SECTOR, mu)
            if atom not in word:
                pos = sum(1 for lab in word if lab.key < atom.key)
                new = tuple(sorted(word + (atom,), key=lambda l: l.key))
                image[new] = ONE if pos % 2 == 0 else -ONE
            # contraction part
            for m, lab in enumerate(word):
                coeff = self.g[mu, lab.name]
                if coeff.is_zero:
                    continue
                new = word[:m] + word[m + 1:]
                add = coeff if m % 2 == 0 else -coeff
                acc = image.get(new)
                image[new] = add if acc is None else acc + add
            col = [ZERO] * self.dim
            for w, c in image.items():
                col[self._index[w]] = c
            cols.append(col)
        return Matrix([list(row) for row in zip(*cols)])

    def spin_generator(self, omega: Matrix) -> Matrix:
        """S(omega) = 1/4 omega_{mu nu} gamma^mu gamma^nu, indices lowered
        with the inverse form."""
        lowered = self.g.inverse * omega
        s = Matrix.zero(self.dim)
        quarter = Scalar.of(1) / Scalar.of(4)
        for mu in range(4):
            for nu in range(4):
                w = lowered[mu, nu]
                if not w.is_zero:
                    s = s + (self.gammas[mu] * self.gammas[nu]).scale(quarter * w)
        return s

    def anticommutator(self, mu: int, nu: int) -> Matrix:
        return self.gammas[mu] * self.gammas[nu] + self.gammas[nu] * self.gammas[mu]


# ---------------------------------------------------------------------------
# shift-symbol sectors


D_SECTOR = "d"
D_INDICES = [1, 2, 3, 4]


class AbstractShiftSector:
    """Four formal shift symbols; operator products are free product atoms."""

    mode = "abstract"
    sector = D_SECTOR
    indices = D_INDICES

    def symbol(self, mu: int) -> Extensor:
        if mu not in AXES:
            raise ValueError(f"axis must be one of {AXES}")
        return Extensor.basis(Atom(D_SECTOR, (mu,)))

    def compose_symbols(self, mu: int, nu: int) -> Extensor:
        return Extensor.basis(Atom(D_SECTOR, (mu, nu)))

    def matrix_derivation_rules(self, matrix: Matrix) -> dict:
        return {D_SECTOR: product_index_rule(D_SECTOR, D_INDICES, matrix)}

    def matrix_substitution(self, matrix: Matrix) -> Substitution:
        return index_substitution(D_SECTOR, D_INDICES, matrix)

    def permutation_substitution(self, perm: tuple) -> Substitution:
        p = Matrix.zero(4)
        for j in range(4):
            p.rows[perm[j]][j] = ONE
        return index_substitution(D_SECTOR, D_INDICES, p)


class LatticeShiftSector:
    """Shift symbols realised as down-shift operators on a window."""

    mode = "lattice"
    sector = "pt"

    def __init__(self, window: LatticeWindow):
        self.window = window
        self._partials = {mu: partial_mu(window, mu) for mu in AXES}

    def operator(self, mu: int) -> LatticeOperator:
        if mu not in AXES:
            raise ValueError(f"axis must be one of {AXES}")
        return self._partials[mu]

    def symbol(self, mu: int) -> Extensor:
        return self.operator(mu).to_extensor()

    def compose_symbols(self, mu: int, nu: int) -> Extensor:
        return self.operator(mu).compose(self.operator(nu)).to_extensor()

    def generator_derivation_rules(self, gen: LatticeOperator) -> dict:
        cols: dict = {}
        rows: dict = {}
        for (out_pt, in_pt), c in gen.table.items():
            cols.setdefault(in_pt, {})[out_pt] = c
            rows.setdefault(out_pt, {})[in_pt] = c

        def rule(atom: Atom):
            if atom.dual:
                row = rows.get(atom.name)
                if not row:
                    return None
                return {Atom("pt", n, dual=True): -c for n, c in row.items()}
            col = cols.get(atom.name)
            if not col:
                return None
            return {Atom("pt", n): c for n, c in col.items()}

        return {"pt": rule}

    def permutation_substitution(self, perm: tuple) -> Substitution:
        name_map = {}
        for pt in self.window.points:
            out = [0, 0, 0, 0]
            for i in range(4):
                out[perm[i]] = pt[i]
            name_map[pt] = tuple(out)
        return relabel_substitution("pt", name_map)


# ---------------------------------------------------------------------------
# vacuum states


class UnsupportedModeError(ValueError):
    pass


@dataclass
class VacuumState:
    tag: str
    state: Extensor
    sector: object
    gamma: GammaRep | None = None
    gamma_sector: str | None = None

    @property
    def mode(self) -> str:
        return self.sector.mode


def dipole_vacuum(sector) -> VacuumState:
    """Top wedge of the four unitised shift symbols."""
    if sector.mode == "lattice":
        raise UnsupportedModeError(
            "the dipole vacuum over a full window is a product of four "
            "window-sized superpositions; build it over the abstract sector"
        )
    state = unitize(sector.symbol(1))
    for mu in (2, 3, 4):
        state = wedge(state, unitize(sector.symbol(mu)))
    return VacuumState("dipole", state, sector)


def dalembertian_vacuum(g: MetricForm, sector) -> VacuumState:
    """Unitised g-contraction of unitised shift-symbol products.

    The inner sum uses the operator product: the Grassmann product of a
    symmetric contraction would vanish identically.
    """
    inner = Extensor.zero()
    for mu in AXES:
        for nu in AXES:
            coeff = g[mu - 1, nu - 1]
            if not coeff.is_zero:
                inner = inner + unitize(sector.compose_symbols(mu, nu)).scale(coeff)
    return VacuumState("dalembertian", state=unitize(inner), sector=sector)


def _gamma_paired_state(label_sector: str, sector) -> Extensor:
    state = Extensor.zero()
    for mu in AXES:
        factor = wedge(
            Extensor.basis(Atom(label_sector, mu - 1)),
            unitize(sector.symbol(mu)),
        )
        state = state + unitize(factor)
    return state


def dirac_vacuum(rep: GammaRep, sector) -> VacuumState:
    """Sum over axes of unitised (gamma-label wedge unitised shift symbol)."""
    if sector.sector == GAMMA_SECTOR:
        raise SectorError("gamma sector collides with the shift sector")
    return VacuumState(
        "dirac",
        _gamma_paired_state(GAMMA_SECTOR, sector),
        sector,
        gamma=rep,
        gamma_sector=GAMMA_SECTOR,
    )


def left_handed_vacuum(rep: GammaRep, sector, allowed_tower: int = TOWER_QI_SQRT3) -> VacuumState:
    """Chiral restriction of the Dirac vacuum via the volume-element
    superselection; needs the full scalar tower for the projectors."""
    require_tower(TOWER_QI_SQRT3, allowed_tower, "left-handed vacuum projectors")
    if sector.sector == SIGMA_SECTOR:
        raise SectorError("sigma sector collides with the shift sector")
    if all(m.is_zero() for m in rep.sigmas):
        raise ValueError("chiral compression of the gamma operators vanished")
    return VacuumState(
        "left",
        _gamma_paired_state(SIGMA_SECTOR, sector),
        sector,
        gamma=rep,
        gamma_sector=SIGMA_SECTOR,
    )


VACUUM_TAGS = ("dipole", "dalembertian", "dirac", "left")


def build_vacuum(tag: str, g: MetricForm, sector, rep: GammaRep | None = None,
                 allowed_tower: int = TOWER_QI_SQRT3) -> VacuumState:
    if tag == "dipole":
        return dipole_vacuum(sector)
    if tag == "dalembertian":
        return dalembertian_vacuum(g, sector)
    if tag == "dirac":
        return dirac_vacuum(rep if rep is not None else GammaRep(g), sector)
    if tag == "left":
        return left_handed_vacuum(rep if rep is not None else GammaRep(g), sector,
                                  allowed_tower=allowed_tower)
    raise ValueError(f"unknown vacuum tag {tag!r}")
