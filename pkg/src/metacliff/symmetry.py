"""Exact verification of invariance, statistics, and representation claims.

Residuals are computed exactly: a derivation action is lifted through the
levels and applied to the vacuum state, a finite action is applied as a
substitution and compared with the original.  A report never contains a
tolerance; `zero` means the residual has no terms at all.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exterior import Atom, Extensor, Node, wedge, word_text
from .lattice import AXES, LatticeOperator, LatticeWindow, diffeo_rep, g_antisymmetry_defect
from .linalg import Matrix, sparse_rank
from .multilevel import (
    Derivation,
    Substitution,
    linear_rule,
    network_count,
    link_count,
    number_operator,
    point_count,
    relabel_substitution,
    swap_factors,
    swap_subfactors,
    unitize,
)
from .scalars import ONE, ZERO, Scalar
from .vacua import GammaRep, MetricForm, VacuumState

GAMMA_INDICES = [0, 1, 2, 3]


# ---------------------------------------------------------------------------
# permutations of the four axes


def axis_permutations() -> list[tuple]:
    return sorted(itertools.permutations(range(4)))


def perm_parity(perm: tuple) -> int:
    inv = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inv % 2 else 1


def odd_axis_permutations() -> list[tuple]:
    return [p for p in axis_permutations() if perm_parity(p) == -1]


def perm_label(perm: tuple) -> str:
    return "perm-" + "".join(str(i + 1) for i in perm)


def perm_matrix(perm: tuple) -> Matrix:
    m = Matrix.zero(4)
    for j in range(4):
        m.rows[perm[j]][j] = ONE
    return m


# ---------------------------------------------------------------------------
# generator bases


def _entry_index(i: int, j: int) -> int:
    return 4 * i + j


def _condition_system(g: Matrix, sign: int, traceless: bool) -> Matrix:
    """Linear system on vec(omega) for omega.g + sign * g.omega^T = 0."""
    rows = []
    for i in range(4):
        for j in range(4):
            row = [ZERO] * 16
            for l in range(4):
                row[_entry_index(i, l)] = row[_entry_index(i, l)] + g[l, j]
            for k in range(4):
                s = g[i, k] if sign > 0 else -g[i, k]
                row[_entry_index(j, k)] = row[_entry_index(j, k)] + s
            rows.append(row)
    if traceless:
        row = [ZERO] * 16
        for i in range(4):
            row[_entry_index(i, i)] = ONE
        rows.append(row)
    return Matrix(rows)


def _vectors_to_matrices(vectors: list[list[Scalar]]) -> list[Matrix]:
    return [Matrix([vec[4 * i: 4 * i + 4] for i in range(4)]) for vec in vectors]


def rotation_basis(g: Matrix) -> list[Matrix]:
    """Basis of {omega : omega.g + g.omega^T = 0}; six elements for a
    nondegenerate symmetric g."""
    return _vectors_to_matrices(_condition_system(g, +1, False).nullspace())


def shear_basis(g: Matrix) -> list[Matrix]:
    """Traceless g-symmetric matrices: omega.g - g.omega^T = 0, tr = 0."""
    return _vectors_to_matrices(_condition_system(g, -1, True).nullspace())


def sl4_traceless_basis() -> list[Matrix]:
    out = []
    for i in range(4):
        for j in range(4):
            if i != j:
                m = Matrix.zero(4)
                m.rows[i][j] = ONE
                out.append(m)
    for k in range(3):
        m = Matrix.zero(4)
        m.rows[k][k] = ONE
        m.rows[k + 1][k + 1] = -ONE
        out.append(m)
    return out


def translation_vectors() -> list[list[Scalar]]:
    return [[ONE if i == mu else ZERO for i in range(4)] for mu in range(4)]


def random_unimodular(rng: random.Random, max_shears: int = 8) -> Matrix:
    """Product of up to `max_shears` elementary integer shears, det 1."""
    m = Matrix.identity(4)
    for _ in range(rng.randint(1, max_shears)):
        i = rng.randrange(4)
        j = rng.randrange(4)
        while j == i:
            j = rng.randrange(4)
        shear = Matrix.identity(4)
        shear.rows[i][j] = Scalar.of(rng.choice([-2, -1, 1, 2]))
        m = m * shear
    return m


def spin_commutator_defect(rep: GammaRep, omega: Matrix) -> list[Matrix]:
    """[S(omega), gamma^lam] + omega^lam_nu gamma^nu, one matrix per axis."""
    s = rep.spin_generator(omega)
    out = []
    for lam in range(4):
        defect = s * rep.gammas[lam] - rep.gammas[lam] * s
        for nu in range(4):
            w = omega[lam, nu]
            if not w.is_zero:
                defect = defect + rep.gammas[nu].scale(w)
        out.append(defect)
    return out


# ---------------------------------------------------------------------------
# actions and residuals


@dataclass
class SymmetryAction:
    label: str
    kind: str  # "derivation" | "substitution"
    d_matrix: Matrix | None = None
    gamma_matrix: Matrix | None = None
    lattice_generator: LatticeOperator | None = None
    permutation: tuple | None = None
    flagged: str | None = None


@dataclass
class InvarianceReport:
    vacuum: str
    action: str
    kind: str
    mode: str
    zero: bool
    terms: int
    witnesses: list[str]
    sign: int | None = None
    flagged: str | None = None
    shell_supported: bool | None = None

    def to_dict(self) -> dict:
        out = {
            "vacuum": self.vacuum,
            "action": self.action,
            "kind": self.kind,
            "mode": self.mode,
            "zero": self.zero,
            "terms": self.terms,
            "witnesses": self.witnesses,
        }
        if self.sign is not None:
            out["sign"] = self.sign
        if self.flagged is not None:
            out["flagged"] = self.flagged
        if self.shell_supported is not None:
            out["shell_supported"] = self.shell_supported
        return out


def _witnesses(res: Extensor, limit: int = 3) -> list[str]:
    return [f"({res.terms[w]}) {word_text(w)}" for w in res.words()[:limit]]


def _touches_shell(word: tuple, window: LatticeWindow) -> bool:
    for lab in word:
        if isinstance(lab, Node):
            if _touches_shell(lab.word, window):
                return True
        elif isinstance(lab, Atom) and lab.sector == "pt":
            if window.in_shell(lab.name):
                return True
    return False


def residual_on_shell(res: Extensor, window: LatticeWindow) -> bool:
    return all(_touches_shell(w, window) for w in res.terms)


def _merge_substitutions(subs: list[Substitution]) -> Substitution:
    rules: dict = {}
    index_rules: dict = {}
    for sub in subs:
        rules.update(sub.rules)
        index_rules.update(sub.index_rules)
    return Substitution(rules, index_rules)


def _substitution_for(vac: VacuumState, action: SymmetryAction) -> Substitution:
    parts = []
    if action.permutation is not None:
        parts.append(vac.sector.permutation_substitution(action.permutation))
        if vac.gamma_sector is not None:
            parts.append(
                relabel_substitution(
                    vac.gamma_sector, {i: action.permutation[i] for i in range(4)}
                )
            )
    elif action.d_matrix is not None:
        if vac.mode != "abstract":
            raise ValueError("matrix substitutions run on the abstract sector only")
        parts.append(vac.sector.matrix_substitution(action.d_matrix))
    return _merge_substitutions(parts)


def residual(vac: VacuumState, action: SymmetryAction) -> InvarianceReport:
    sign = None
    if action.kind == "derivation":
        rules: dict = {}
        if vac.mode == "abstract":
            if action.d_matrix is not None:
                rules.update(vac.sector.matrix_derivation_rules(action.d_matrix))
        else:
            if action.lattice_generator is not None:
                rules.update(
                    vac.sector.generator_derivation_rules(action.lattice_generator)
                )
        if vac.gamma_sector is not None and action.gamma_matrix is not None:
            rules[vac.gamma_sector] = linear_rule(
                vac.gamma_sector, GAMMA_INDICES, action.gamma_matrix
            )
        res = Derivation(rules)(vac.state)
    elif action.kind == "substitution":
        image = _substitution_for(vac, action)(vac.state)
        res = image - vac.state
        if res.is_zero:
            sign = 1
        elif image == vac.state.scale(Scalar.of(-1)):
            sign = -1
    else:
        raise ValueError(f"unknown action kind {action.kind!r}")
    shell = None
    if vac.mode == "lattice":
        shell = residual_on_shell(res, vac.sector.window)
    return InvarianceReport(
        vacuum=vac.tag,
        action=action.label,
        kind=action.kind,
        mode=vac.mode,
        zero=res.is_zero,
        terms=len(res.terms),
        witnesses=_witnesses(res),
        sign=sign,
        flagged=action.flagged,
        shell_supported=shell,
    )


# ---------------------------------------------------------------------------
# check batteries


def poincare_actions(g: MetricForm, window: LatticeWindow | None = None) -> list[SymmetryAction]:
    """Ten generators: four translations, six g-antisymmetric rotations."""
    actions = []
    for mu in AXES:
        gen = None
        if window is not None:
            gen = diffeo_rep(window, alpha=translation_vectors()[mu - 1])
        actions.append(
            SymmetryAction(f"translation-{mu}", "derivation", lattice_generator=gen)
        )
    for k, omega in enumerate(rotation_basis(g.matrix)):
        if not g_antisymmetry_defect(omega, g.matrix).is_zero():
            raise AssertionError("rotation basis failed its own condition")
        gen = diffeo_rep(window, omega=omega) if window is not None else None
        actions.append(
            SymmetryAction(
                f"rotation-{k}",
                "derivation",
                d_matrix=omega,
                gamma_matrix=-omega.transpose(),
                lattice_generator=gen,
            )
        )
    return actions


def check_poincare(vac: VacuumState, g: MetricForm) -> list[InvarianceReport]:
    window = vac.sector.window if vac.mode == "lattice" else None
    return [residual(vac, a) for a in poincare_actions(g, window)]


def shear_dilation_actions(g: MetricForm, window: LatticeWindow | None = None) -> list[SymmetryAction]:
    actions = [
        SymmetryAction(
            "dilation",
            "derivation",
            d_matrix=Matrix.identity(4),
            lattice_generator=diffeo_rep(window, omega=Matrix.identity(4)) if window else None,
            flagged="shear/dilation",
        )
    ]
    for k, omega in enumerate(shear_basis(g.matrix)):
        gen = diffeo_rep(window, omega=omega) if window is not None else None
        actions.append(
            SymmetryAction(
                f"shear-{k}",
                "derivation",
                d_matrix=omega,
                lattice_generator=gen,
                flagged="shear/dilation",
            )
        )
    return actions


def check_shear_dilation(vac: VacuumState, g: MetricForm) -> list[InvarianceReport]:
    window = vac.sector.window if vac.mode == "lattice" else None
    return [residual(vac, a) for a in shear_dilation_actions(g, window)]


def check_discrete(vac: VacuumState) -> list[InvarianceReport]:
    """One substitution report per axis permutation (all 24)."""
    return [
        residual(vac, SymmetryAction(perm_label(p), "substitution", permutation=p))
        for p in axis_permutations()
    ]


def sl4_invariance(vac: VacuumState, samples: int = 20, seed: int = 0) -> list[InvarianceReport]:
    """Infinitesimal traceless generators plus seeded unimodular substitutions."""
    if vac.mode != "abstract":
        raise ValueError("special-linear checks run on the abstract sector")
    reports = []
    for k, gen in enumerate(sl4_traceless_basis()):
        reports.append(
            residual(vac, SymmetryAction(f"sl4-gen-{k}", "derivation", d_matrix=gen))
        )
    rng = random.Random(seed)
    for k in range(samples):
        mat = random_unimodular(rng)
        if mat.det() != ONE:
            raise AssertionError("shear product lost unimodularity")
        reports.append(
            residual(
                vac, SymmetryAction(f"sl4-mat-{k:02d}", "substitution", d_matrix=mat)
            )
        )
    return reports


# ---------------------------------------------------------------------------
# parity intertwiners


@dataclass
class IntertwinerReport:
    vacuum: str
    permutation: str
    restricted: bool
    dimension: int
    relabel_fixed: bool

    def to_dict(self) -> dict:
        return {
            "vacuum": self.vacuum,
            "permutation": self.permutation,
            "restricted": self.restricted,
            "dimension": self.dimension,
            "relabel_fixed": self.relabel_fixed,
        }


def intertwiner_dimension(rep: GammaRep, perm: tuple, restrict_chirality: bool) -> int:
    """Exact dimension of {M : M gamma^mu = gamma^{perm(mu)} M}, optionally
    intersected with the commutant of the volume element."""
    n = rep.dim
    gam = [m.to_fraction_rows() for m in rep.gammas]
    systems = [(gam[mu], gam[perm[mu]]) for mu in range(4)]
    if restrict_chirality:
        vol = rep.volume_raw.to_fraction_rows()
        systems.append((vol, vol))
    rows = []
    for a_mat, b_mat in systems:
        b_cols = list(zip(*b_mat))
        for a in range(n):
            for c in range(n):
                row: dict = {}
                for b in range(n):
                    if a_mat[b][c]:
                        key = a * n + b
                        row[key] = row.get(key, Fraction(0)) + a_mat[b][c]
                    if b_mat[a][b]:
                        key = b * n + c
                        row[key] = row.get(key, Fraction(0)) - b_mat[a][b]
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    return n * n - sparse_rank(rows, n * n)


def parity_intertwiner(vac: VacuumState, perm: tuple) -> IntertwinerReport:
    """Existence report for a gamma-sector operator implementing an odd
    axis permutation; the left-handed vacuum restricts to operators
    commuting with the volume element."""
    if vac.gamma is None:
        raise ValueError("vacuum has no gamma sector")
    if perm_parity(perm) != -1:
        raise ValueError("permutation must be odd (improper)")
    restricted = vac.tag == "left"
    dim = intertwiner_dimension(vac.gamma, perm, restricted)
    fixed = residual(
        vac, SymmetryAction(perm_label(perm), "substitution", permutation=perm)
    ).zero
    return IntertwinerReport(
        vacuum=vac.tag,
        permutation=perm_label(perm),
        restricted=restricted,
        dimension=dim,
        relabel_fixed=fixed,
    )


# ---------------------------------------------------------------------------
# statistics and counting suites


def _rank_two(x: Extensor, y: Extensor) -> bool:
    words = sorted(set(x.terms) | set(y.terms), key=word_text)
    rows = [
        [x.terms.get(w, ZERO) for w in words],
        [y.terms.get(w, ZERO) for w in words],
    ]
    return Matrix(rows).rank() == 2


def parastatistics_suite(trials: int = 100, seed: int = 0, pool: int = 8) -> dict:
    """Randomised two-factor, two-subfactor words: factor swaps must flip
    the sign exactly; subfactor swaps across factors must give a linearly
    independent word unless labels collide (degenerate, logged)."""
    rng = random.Random(seed)
    checked = degenerate = 0
    failures = []
    for t in range(trials):
        names = [rng.randrange(pool) for _ in range(4)]
        a, b, c, d = (Atom("p", n) for n in names)
        if a is b or c is d:
            degenerate += 1
            continue
        f1 = unitize(Extensor.from_word(tuple(sorted((a, b), key=lambda l: l.key))))
        f2 = unitize(Extensor.from_word(tuple(sorted((c, d), key=lambda l: l.key))))
        net = wedge(f1, f2)
        if net.is_zero:
            degenerate += 1
            continue
        word = next(iter(net.terms))
        swapped = swap_factors(word, 0, 1)
        if swapped != Extensor.from_word(word, Scalar.of(-1)):
            failures.append(f"factor swap failed on {word_text(word)}")
            continue
        sub = swap_subfactors(word, (0, 0), (1, 0))
        if len(set(names)) < 4:
            degenerate += 1
            continue
        if sub.is_zero or not _rank_two(Extensor.from_word(word), sub):
            failures.append(f"subfactor swap not independent on {word_text(word)}")
            continue
        checked += 1
    return {
        "trials": trials,
        "seed": seed,
        "checked": checked,
        "degenerate": degenerate,
        "failures": failures,
        "ok": not failures,
    }


def random_network_word(rng: random.Random, pool: int = 8) -> tuple:
    labels = []
    for _ in range(rng.randint(1, 3)):
        size = rng.randint(1, 3)
        payload_names = rng.sample(range(pool), size)
        payload = tuple(sorted((Atom("p", n) for n in payload_names), key=lambda l: l.key))
        labels.append(Node(payload))
    for _ in range(rng.randint(0, 2)):
        labels.append(Atom("q", rng.randrange(pool)))
    unique = sorted(set(labels), key=lambda l: l.key)
    return tuple(unique)


def number_operator_suite(trials: int = 50, seed: int = 0) -> dict:
    """Network/link/point operators against direct recounts on random words."""
    rng = random.Random(seed)
    failures = []
    for t in range(trials):
        word = random_network_word(rng)
        x = Extensor.from_word(word)
        expected = {
            "network": len(word),
            "link": sum(1 for lab in word if isinstance(lab, Node)),
            "point": sum(len(lab.word) for lab in word if isinstance(lab, Node)),
        }
        for kind, want in expected.items():
            got = number_operator(kind)(x)
            if got != x.scale(Scalar.of(want)):
                failures.append(f"{kind} number wrong on {word_text(word)}")
    return {"trials": trials, "seed": seed, "failures": failures, "ok": not failures}


# ---------------------------------------------------------------------------
# cell representation report

# character table of the symmetric group on four letters; classes ordered
# (identity, transposition, 3-cycle, double transposition, 4-cycle)
_S4_CLASS_SIZES = (1, 6, 8, 3, 6)
_S4_CHARACTERS = {
    "trivial": ((1, 1, 1, 1, 1), 1),
    "sign": ((1, -1, 1, 1, -1), 1),
    "standard": ((3, 1, 0, -1, -1), 3),
    "standard-sign": ((3, -1, 0, -1, 1), 3),
    "two-dim": ((2, 0, -1, 2, 0), 2),
}


def _cycle_class(perm: tuple) -> int:
    seen = [False] * len(perm)
    lengths = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, n = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            n += 1
        lengths.append(n)
    shape = tuple(sorted(lengths, reverse=True))
    return {(1, 1, 1, 1): 0, (2, 1, 1): 1, (3, 1): 2, (2, 2): 3, (4,): 4}[shape]


def cell_rep_report() -> dict:
    """Isotypic decomposition and commutant of the axis-permutation action."""
    char = [0] * 5
    counts = [0] * 5
    for perm in axis_permutations():
        cls = _cycle_class(perm)
        counts[cls] += 1
        char[cls] = sum(1 for i in range(4) if perm[i] == i)
    if tuple(counts) != _S4_CLASS_SIZES:
        raise AssertionError("class sizes do not match the reference table")
    multiplicities = {}
    for name, (values, dim) in _S4_CHARACTERS.items():
        total = sum(
            Fraction(size * value * char[k])
            for k, (size, value) in enumerate(zip(_S4_CLASS_SIZES, values))
        )
        mult = total / 24
        if mult.denominator != 1:
            raise AssertionError("non-integral multiplicity")
        multiplicities[name] = int(mult)
    isotypic = sorted(
        _S4_CHARACTERS[name][1] * mult
        for name, mult in multiplicities.items()
        if mult
    )
    # commutant of the permutation matrices: solve X P = P X for the two
    # standard generators, which generate the whole group
    generators = [(1, 0, 2, 3), (1, 2, 3, 0)]
    rows = []
    for perm in generators:
        p = perm_matrix(perm)
        for i in range(4):
            for j in range(4):
                row = [ZERO] * 16
                for k in range(4):
                    row[_entry_index(i, k)] = row[_entry_index(i, k)] + p[k, j]
                    row[_entry_index(k, j)] = row[_entry_index(k, j)] - p[i, k]
                rows.append(row)
    commutant_dim = len(Matrix(rows).nullspace())
    return {
        "transposition_character": char[1],
        "character": {"classes": list(_S4_CLASS_SIZES), "values": char},
        "multiplicities": multiplicities,
        "isotypic_dims": isotypic,
        "commutant_dim": commutant_dim,
    }
