"""Multilevel layer: unitisation, depth bookkeeping, ladder operators at a
depth, lifted derivations/substitutions, and factor/subfactor swaps.

A network word is a wedge of grade-1 factors; factors wrapping a lower
word are :class:`~metacliff.exterior.Node` labels.  Depth counts down from
the top: depth-1 constituents are the factors themselves, depth-2 the
labels inside node payloads, and so on.  Top-level factors anticommute
(factor swaps flip the sign); swapping subfactors across factors yields a
different basis word, which is the parastatistics behaviour checked in
the symmetry module.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exterior import (
    Atom,
    Extensor,
    Label,
    Node,
    _accumulate,
    normalize_labels,
    wedge,
    word_level,
)
from .scalars import ONE, Scalar


class DepthError(ValueError):
    pass


# ---------------------------------------------------------------------------
# unitisation and counting


def unitize(x: Extensor) -> Extensor:
    """Linear grade-1 injection one level up: each word becomes one node."""
    return Extensor({(Node(w),): c for w, c in x.terms.items()})


def grade_at_depth(word: tuple, depth: int) -> int:
    if depth <= 0:
        raise DepthError("depth must be positive")
    if depth == 1:
        return len(word)
    return sum(
        grade_at_depth(lab.word, depth - 1) for lab in word if isinstance(lab, Node)
    )


def constituents(word: tuple, depth: int) -> list[Label]:
    if depth <= 0:
        raise DepthError("depth must be positive")
    if depth == 1:
        return list(word)
    out: list[Label] = []
    for lab in word:
        if isinstance(lab, Node):
            out.extend(constituents(lab.word, depth - 1))
    return out


def network_count(word: tuple) -> int:
    return len(word)


def link_count(word: tuple) -> int:
    return sum(1 for lab in word if isinstance(lab, Node))


def point_count(word: tuple) -> int:
    return sum(len(lab.word) for lab in word if isinstance(lab, Node))


_COUNTERS = {"network": network_count, "link": link_count, "point": point_count}


def number_operator(kind: str):
    """Diagonal map scaling every basis word by its factor/constituent count."""
    counter = _COUNTERS[kind]
    def op(x: Extensor) -> Extensor:
        return Extensor({w: c * Scalar.of(counter(w)) for w, c in x.terms.items()})
    return op


# ---------------------------------------------------------------------------
# creation / annihilation at a depth


def _wrap(label: Label, times: int) -> Label:
    for _ in range(times):
        label = Node((label,))
    return label


def create(depth: int, q: Label, x: Extensor, level: int = 2) -> Extensor:
    """Create a factor |q> at the given depth of a level-`level` element."""
    if depth < 1 or depth > level:
        raise DepthError(f"depth {depth} exceeds level {level}")
    if depth == 1:
        return wedge(Extensor.basis(_wrap(q, level - 1)), x)
    out: dict = {}
    for word, c in x.terms.items():
        for m, lab in enumerate(word):
            if not isinstance(lab, Node):
                continue
            inner = create(depth - 1, q, Extensor.from_word(lab.word), level - 1)
            koszul = -c if m % 2 else c
            for w2, c2 in inner.terms.items():
                seq = list(word)
                seq[m] = Node(w2)
                sign, neww = normalize_labels(seq)
                if neww is None:
                    continue
                _accumulate(out, neww, koszul * c2 if sign > 0 else -(koszul * c2))
    return Extensor(out)


def annihilate(depth: int, q: Label, x: Extensor, level: int = 2) -> Extensor:
    """Pairing-dual of :func:`create` at the same depth and label."""
    if depth < 1 or depth > level:
        raise DepthError(f"depth {depth} exceeds level {level}")
    out: dict = {}
    if depth == 1:
        target = _wrap(q, level - 1)
        for word, c in x.terms.items():
            for m, lab in enumerate(word):
                if lab is target:
                    _accumulate(out, word[:m] + word[m + 1:], -c if m % 2 else c)
        return Extensor(out)
    for word, c in x.terms.items():
        for m, lab in enumerate(word):
            if not isinstance(lab, Node):
                continue
            inner = annihilate(depth - 1, q, Extensor.from_word(lab.word), level - 1)
            koszul = -c if m % 2 else c
            for w2, c2 in inner.terms.items():
                seq = list(word)
                seq[m] = Node(w2)
                sign, neww = normalize_labels(seq)
                if neww is None:
                    continue
                _accumulate(out, neww, koszul * c2 if sign > 0 else -(koszul * c2))
    return Extensor(out)


@dataclass(frozen=True)
class DepthOperator:
    """Ladder operator c^D_Q (mode 'create') or its dual (mode 'annihilate')."""

    depth: int
    label: Label
    mode: str
    level: int = 2

    def __call__(self, x: Extensor) -> Extensor:
        if self.mode == "create":
            return create(self.depth, self.label, x, self.level)
        if self.mode == "annihilate":
            return annihilate(self.depth, self.label, x, self.level)
        raise ValueError(f"unknown mode {self.mode!r}")


# ---------------------------------------------------------------------------
# factor and subfactor swaps


def swap_factors(word: tuple, i: int, j: int) -> Extensor:
    n = len(word)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError("factor position out of range")
    if i == j:
        return Extensor.from_word(word)
    seq = list(word)
    seq[i], seq[j] = seq[j], seq[i]
    sign, neww = normalize_labels(seq)
    if neww is None:
        return Extensor.zero()
    return Extensor.from_word(neww, Scalar.of(sign))


def swap_subfactors(word: tuple, pos1: tuple[int, int], pos2: tuple[int, int]) -> Extensor:
    (fi, si), (fj, sj) = pos1, pos2
    n = len(word)
    if not (0 <= fi < n and 0 <= fj < n):
        raise IndexError("factor position out of range")
    for f, s in ((fi, si), (fj, sj)):
        lab = word[f]
        if not isinstance(lab, Node):
            raise IndexError(f"factor {f} is not a node")
        if not (0 <= s < len(lab.word)):
            raise IndexError("subfactor position out of range")
    total_sign = 1
    if fi == fj:
        payload = list(word[fi].word)
        payload[si], payload[sj] = payload[sj], payload[si]
        sign, pw = normalize_labels(payload)
        if pw is None:
            return Extensor.zero()
        total_sign *= sign
        new_nodes = {fi: Node(pw)}
    else:
        pi = list(word[fi].word)
        pj = list(word[fj].word)
        pi[si], pj[sj] = pj[sj], pi[si]
        sign_i, wi = normalize_labels(pi)
        sign_j, wj = normalize_labels(pj)
        if wi is None or wj is None:
            return Extensor.zero()
        total_sign *= sign_i * sign_j
        new_nodes = {fi: Node(wi), fj: Node(wj)}
    seq = list(word)
    for f, node in new_nodes.items():
        seq[f] = node
    sign, neww = normalize_labels(seq)
    if neww is None:
        return Extensor.zero()
    return Extensor.from_word(neww, Scalar.of(total_sign * sign))


# ---------------------------------------------------------------------------
# lifted derivations and substitutions


def columns_of(names: list, matrix) -> dict:
    """matrix[r][c] over the given names -> {col_name: {row_name: coeff}}."""
    cols: dict = {}
    for ci, cname in enumerate(names):
        col = {}
        for ri, rname in enumerate(names):
            entry = matrix[ri, ci]
            if entry:
                col[rname] = entry
        cols[cname] = col
    return cols


def linear_rule(sector: str, names: list, matrix):
    """Label rule for a matrix acting on a plain sector.

    Primal atoms map by columns; dual atoms by minus the transpose, which
    is what preserves the pairing and makes the rule a derivation of the
    operator product.
    """
    cols = columns_of(names, matrix)
    rows: dict = {}
    for cname, col in cols.items():
        for rname, coeff in col.items():
            rows.setdefault(rname, {})[cname] = coeff

    def rule(atom: Atom):
        if atom.dual:
            row = rows.get(atom.name)
            if not row:
                return None
            return {Atom(sector, n, dual=True): -c for n, c in row.items()}
        col = cols.get(atom.name)
        if not col:
            return None
        return {Atom(sector, n): c for n, c in col.items()}

    return rule


def product_index_rule(sector: str, indices: list, matrix):
    """Label rule for a matrix acting on formal product atoms.

    Atom names are tuples of indices (a free product of symbols); the rule
    acts by the Leibniz expansion, one tensor slot at a time.
    """
    cols = columns_of(indices, matrix)

    def rule(atom: Atom):
        name = atom.name
        out: dict = {}
        for pos, idx in enumerate(name):
            for target, coeff in cols.get(idx, {}).items():
                lab = Atom(sector, name[:pos] + (target,) + name[pos + 1:])
                acc = out.get(lab)
                out[lab] = coeff if acc is None else acc + coeff
        return out or None

    return rule


class Derivation:
    """Even derivation acting label-by-label, lifted through unitisation.

    `rules` maps sector names to label rules; node labels recurse into
    their payloads, so the lift commutes with unitisation by construction
    and satisfies the Leibniz rule over both products.
    """

    def __init__(self, rules: dict):
        self.rules = rules

    def label_image(self, lab: Label):
        if isinstance(lab, Node):
            inner = self(Extensor.from_word(lab.word))
            if inner.is_zero:
                return None
            return {Node(w): c for w, c in inner.terms.items()}
        rule = self.rules.get(lab.sector)
        if rule is None:
            return None
        return rule(lab)

    def __call__(self, x: Extensor) -> Extensor:
        out: dict = {}
        for word, c in x.terms.items():
            for m in range(len(word)):
                images = self.label_image(word[m])
                if not images:
                    continue
                for lab2, c2 in images.items():
                    seq = list(word)
                    seq[m] = lab2
                    sign, neww = normalize_labels(seq)
                    if neww is None:
                        continue
                    coeff = c * c2
                    _accumulate(out, neww, coeff if sign > 0 else -coeff)
        return Extensor(out)

    def __add__(self, other: "Derivation") -> "Derivation":
        return _SumDerivation(self, other)


class _SumDerivation(Derivation):
    def __init__(self, first: Derivation, second: Derivation):
        self.first = first
        self.second = second

    def label_image(self, lab: Label):
        a = self.first.label_image(lab) or {}
        b = self.second.label_image(lab) or {}
        out = dict(a)
        for lab2, c in b.items():
            acc = out.get(lab2)
            out[lab2] = c if acc is None else acc + c
        return out or None

    def __call__(self, x: Extensor) -> Extensor:
        return self.first(x) + self.second(x)


def lift_derivation(rules: dict) -> Derivation:
    """Lift per-sector label rules to a derivation on any level."""
    return Derivation(rules)


class TraceError(ValueError):
    pass


def sl_generator(sector: str, names: list, matrix, product: bool = False) -> Derivation:
    """Replacement derivation for a traceless matrix over a label sector."""
    trace = matrix.trace()
    if not trace.is_zero:
        raise TraceError(f"generator matrix must be traceless, got trace {trace}")
    rule = (product_index_rule if product else linear_rule)(sector, names, matrix)
    return Derivation({sector: rule})


class Substitution:
    """Multiplicative relabelling, lifted through unitisation.

    `rules` maps sector names to label rules returning {label: coeff}
    images; unlisted sectors are left fixed.  Product atoms expand slotwise
    via `index_rules` (per-sector index substitution for free products).
    """

    def __init__(self, rules: dict | None = None, index_rules: dict | None = None):
        self.rules = rules or {}
        self.index_rules = index_rules or {}

    def label_image(self, lab: Label) -> dict:
        if isinstance(lab, Node):
            inner = self(Extensor.from_word(lab.word))
            return {Node(w): c for w, c in inner.terms.items()}
        if lab.sector in self.index_rules:
            cols = self.index_rules[lab.sector]
            combos: dict = {(): ONE}
            for idx in lab.name:
                nxt: dict = {}
                for prefix, c in combos.items():
                    for target, coeff in cols.get(idx, {}).items():
                        key = prefix + (target,)
                        acc = nxt.get(key)
                        val = c * coeff
                        nxt[key] = val if acc is None else acc + val
                combos = nxt
            return {Atom(lab.sector, name): c for name, c in combos.items() if c}
        rule = self.rules.get(lab.sector)
        if rule is None:
            return {lab: ONE}
        image = rule(lab)
        return image if image is not None else {lab: ONE}

    def __call__(self, x: Extensor) -> Extensor:
        out: dict = {}
        for word, c in x.terms.items():
            partial: dict = {(): c}
            for lab in word:
                images = self.label_image(lab)
                nxt: dict = {}
                for w_acc, c_acc in partial.items():
                    for lab2, c2 in images.items():
                        seq = list(w_acc) + [lab2]
                        sign, neww = normalize_labels(seq)
                        if neww is None:
                            continue
                        coeff = c_acc * c2
                        _accumulate(nxt, neww, coeff if sign > 0 else -coeff)
                partial = nxt
                if not partial:
                    break
            for w_acc, c_acc in partial.items():
                _accumulate(out, w_acc, c_acc)
        return Extensor(out)


def matrix_substitution(sector: str, names: list, matrix) -> Substitution:
    cols = columns_of(names, matrix)

    def rule(atom: Atom):
        if atom.dual:
            raise ValueError("matrix substitution on dual labels is not supported")
        return {Atom(sector, n): c for n, c in cols.get(atom.name, {}).items()}

    return Substitution({sector: rule})


def index_substitution(sector: str, indices: list, matrix) -> Substitution:
    """Substitution on a free-product sector, slot by slot."""
    return Substitution(index_rules={sector: columns_of(indices, matrix)})


def relabel_substitution(sector: str, name_map: dict) -> Substitution:
    """Pure relabelling; dual labels follow their primal partners."""

    def rule(atom: Atom):
        target = name_map.get(atom.name)
        if target is None:
            return {atom: ONE}
        return {Atom(sector, target, dual=atom.dual): ONE}

    return Substitution({sector: rule})
