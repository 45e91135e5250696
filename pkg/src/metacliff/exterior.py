"""Sparse graded Grassmann/Clifford algebra over labelled spaces with formal duals.

Elements (*extensors*) are sparse maps from normal-form words to exact
scalars.  A word is a strictly increasing tuple of labels under one fixed
global order: primal labels before dual labels, then (sector, name); any
repeated label makes the zero word.  Labels are interned, so identical
labels are identical objects.

Two products live here.  The Grassmann product ``wedge`` concatenates and
sorts.  The operator (Clifford) product ``clifford_product`` is taken in
normal-ordered coordinates: a word acts as "wedge every primal label,
contract every dual label", and multiplying two words contracts the dual
labels of the left factor against matching primal labels of the right one
with unit pairing.  Grade-1 generators then satisfy
``u o v + v o u = 2 * polar_pairing(u, v)`` with ``e o e' + e' o e = 1``
for a basis vector and its dual, and dyad words compose like matrix units
on kets.
"""

from __future__ import annotations

from .scalars import ONE, ZERO, HALF, Scalar


# ---------------------------------------------------------------------------
# labels


def _name_key(name):
    if isinstance(name, int):
        return ("i", (name,))
    if isinstance(name, str):
        return ("s", (name,))
    if isinstance(name, tuple):
        return ("t", name)
    raise TypeError(f"unsupported label name {name!r}")


def _name_text(name) -> str:
    if isinstance(name, tuple):
        return ",".join(str(x) for x in name)
    return str(name)


class Label:
    """Interned basis label; `key` realises the global total order."""

    __slots__ = ("key", "text", "level")

    def __lt__(self, other: "Label") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return self.text


class Atom(Label):
    __slots__ = ("sector", "name", "dual")

    _cache: dict = {}

    def __new__(cls, sector: str, name, dual: bool = False):
        cached = cls._cache.get((sector, name, dual))
        if cached is not None:
            return cached
        self = object.__new__(cls)
        self.sector = sector
        self.name = name
        self.dual = dual
        self.key = (1 if dual else 0, 0, sector, _name_key(name))
        self.text = f"{sector}:{_name_text(name)}" + ("'" if dual else "")
        self.level = 0
        cls._cache[(sector, name, dual)] = self
        return self

    @property
    def partner(self) -> "Atom":
        return Atom(self.sector, self.name, not self.dual)


class Node(Label):
    """Unitisation node: a grade-1 label wrapping a lower-level word."""

    __slots__ = ("word",)

    _cache: dict = {}

    def __new__(cls, word: tuple):
        cached = cls._cache.get(word)
        if cached is not None:
            return cached
        self = object.__new__(cls)
        self.word = word
        self.level = 1 + word_level(word)
        self.text = f"i[{word_text(word)}]"
        self.key = (0, 1, self.level, self.text)
        cls._cache[word] = self
        return self


def _pairs(primal: Label, dual: Label) -> bool:
    return (
        isinstance(primal, Atom)
        and isinstance(dual, Atom)
        and dual.dual
        and not primal.dual
        and primal.sector == dual.sector
        and primal.name == dual.name
    )


# ---------------------------------------------------------------------------
# words


def word_level(word: tuple) -> int:
    return max((lab.level for lab in word), default=0)


def word_text(word: tuple) -> str:
    return "^".join(lab.text for lab in word) if word else "1"


def word_sort_key(word: tuple):
    return (len(word), tuple(lab.key for lab in word))


def normalize_labels(labels) -> tuple[int, tuple | None]:
    """Sort an arbitrary label sequence into normal form.

    Returns (sign, word); a repeated label yields (1, None), the zero word.
    """
    seq = list(labels)
    sign = 1
    # insertion sort; word lengths are tiny
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j].key < seq[j - 1].key:
            seq[j], seq[j - 1] = seq[j - 1], seq[j]
            sign = -sign
            j -= 1
        if j > 0 and seq[j].key == seq[j - 1].key:
            return 1, None
    return sign, tuple(seq)


def _merge(a: tuple, b: tuple) -> tuple[int, tuple] | None:
    """Merge two sorted label tuples, tracking parity; None on a repeat."""
    i = j = 0
    out = []
    inv = 0
    while i < len(a) and j < len(b):
        ka, kb = a[i].key, b[j].key
        if ka == kb:
            return None
        if ka < kb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
            inv += len(a) - i
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if inv % 2 else 1, tuple(out))


def _split(word: tuple) -> tuple[tuple, tuple]:
    """Split a normal-form word into (primal labels, dual labels)."""
    for i, lab in enumerate(word):
        if isinstance(lab, Atom) and lab.dual:
            return word[:i], word[i:]
    return word, ()


# ---------------------------------------------------------------------------
# extensors


class Extensor:
    """Sparse sum of scalar-weighted normal-form words."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if not c.is_zero}

    @classmethod
    def zero(cls) -> "Extensor":
        return cls()

    @classmethod
    def unit(cls, coeff=ONE) -> "Extensor":
        return cls({(): Scalar.of(coeff)})

    @classmethod
    def from_word(cls, word: tuple, coeff=ONE) -> "Extensor":
        return cls({word: Scalar.of(coeff)})

    @classmethod
    def basis(cls, label: Label) -> "Extensor":
        return cls({(label,): ONE})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Extensor) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "Extensor") -> "Extensor":
        out = dict(self.terms)
        for w, c in other.terms.items():
            acc = out.get(w)
            out[w] = c if acc is None else acc + c
        return Extensor(out)

    def __neg__(self) -> "Extensor":
        return Extensor({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "Extensor") -> "Extensor":
        return self + (-other)

    def scale(self, coeff) -> "Extensor":
        c = Scalar.of(coeff)
        if c.is_zero:
            return Extensor.zero()
        return Extensor({w: c * v for w, v in self.terms.items()})

    def grades(self) -> set[int]:
        return {len(w) for w in self.terms}

    def grade_part(self, k: int) -> "Extensor":
        return Extensor({w: c for w, c in self.terms.items() if len(w) == k})

    def primal_part(self) -> "Extensor":
        return Extensor(
            {w: c for w, c in self.terms.items() if not _split(w)[1]}
        )

    def words(self) -> list[tuple]:
        return sorted(self.terms, key=word_sort_key)

    def coefficient(self, word: tuple) -> Scalar:
        return self.terms.get(word, ZERO)

    def max_level(self) -> int:
        return max((word_level(w) for w in self.terms), default=0)

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"({self.terms[w]}) {word_text(w)}" for w in self.words()]
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Extensor<{self.text()}>"


def _accumulate(table: dict, word: tuple, coeff: Scalar) -> None:
    acc = table.get(word)
    if acc is None:
        table[word] = coeff
    else:
        s = acc + coeff
        if s.is_zero:
            del table[word]
        else:
            table[word] = s


# ---------------------------------------------------------------------------
# products


def wedge(a: Extensor, b: Extensor) -> Extensor:
    out: dict = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            merged = _merge(w1, w2)
            if merged is None:
                continue
            sign, word = merged
            _accumulate(out, word, c1 * c2 if sign > 0 else -(c1 * c2))
    return Extensor(out)


def _push(duals: tuple, primals: tuple):
    """Normal-order ``contract(duals) . wedge(primals)``.

    Yields (sign, primals_remaining, duals_leftover); leftover duals keep
    their original relative order.
    """
    if not duals:
        yield 1, primals, ()
        return
    d, rest = duals[-1], duals[:-1]
    for j, q in enumerate(primals):
        if _pairs(q, d):
            reduced = primals[:j] + primals[j + 1:]
            s1 = -1 if j % 2 else 1
            for s2, pf, df in _push(rest, reduced):
                yield s1 * s2, pf, df
    s1 = -1 if len(primals) % 2 else 1
    for s2, pf, df in _push(rest, primals):
        yield s1 * s2, pf, df + (d,)


def _word_clifford(w1: tuple, w2: tuple):
    p1, d1 = _split(w1)
    p2, d2 = _split(w2)
    for s, pf, df in _push(d1, p2):
        mp = _merge(p1, pf)
        if mp is None:
            continue
        sp, creators = mp
        md = _merge(df, d2)
        if md is None:
            continue
        sd, annihilators = md
        yield s * sp * sd, creators + annihilators


def clifford_product(a: Extensor, b: Extensor) -> Extensor:
    out: dict = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            c = c1 * c2
            for sign, word in _word_clifford(w1, w2):
                _accumulate(out, word, c if sign > 0 else -c)
    return Extensor(out)


def apply_operator(op: Extensor, target: Extensor) -> Extensor:
    """Left action of an operator extensor on a ket extensor.

    Kets are pure-primal words; the action is the normal-ordered one, so it
    is compatible with composition: apply(A, apply(B, x)) == apply(AoB, x).
    """
    return clifford_product(op, target).primal_part()


class GradeError(ValueError):
    pass


def pairing(v: Extensor, w: Extensor) -> Scalar:
    """Dual-basis pairing <w|v> for a primal grade-1 v and dual grade-1 w."""
    total = ZERO
    for word in v.terms:
        if len(word) != 1 or _split(word)[1]:
            raise GradeError("first argument must be primal grade 1")
    for word in w.terms:
        if len(word) != 1 or _split(word)[0]:
            raise GradeError("second argument must be dual grade 1")
    for (p,), cp in v.terms.items():
        for (d,), cd in w.terms.items():
            if _pairs(p, d):
                total = total + cp * cd
    return total


def polar_pairing(u: Extensor, v: Extensor) -> Scalar:
    """Symmetric bilinear form of the pairing norm on grade-1 elements.

    For u, v mixing primal and dual parts this is
    half of (dual(v) on primal(u)) + (dual(u) on primal(v)), so the
    operator product satisfies u o v + v o u == 2 * polar_pairing(u, v).
    """
    total = ZERO
    for w in list(u.terms) + list(v.terms):
        if len(w) != 1:
            raise GradeError("polar form is defined on grade-1 elements")
    for (x,), cx in u.terms.items():
        for (y,), cy in v.terms.items():
            if _pairs(x, y) or _pairs(y, x):
                total = total + cx * cy
    return HALF * total


# ---------------------------------------------------------------------------
# basis spaces


class SectorError(ValueError):
    pass


class BasisSpace:
    """A named sector of basis labels, optionally with formal duals."""

    def __init__(self, sector: str, names, duals: bool = False):
        self.sector = sector
        self.names = list(names)
        if len(set(self.names)) != len(self.names):
            raise SectorError(f"duplicate labels in sector {sector!r}")
        self.duals = duals
        self._names = set(self.names)

    def __contains__(self, name) -> bool:
        return name in self._names

    def atom(self, name, dual: bool = False) -> Atom:
        if name not in self._names:
            raise SectorError(f"unknown label {name!r} in sector {self.sector!r}")
        if dual and not self.duals:
            raise SectorError(f"sector {self.sector!r} has no duals adjoined")
        return Atom(self.sector, name, dual)

    def vector(self, name) -> Extensor:
        return Extensor.basis(self.atom(name))

    def dual_vector(self, name) -> Extensor:
        return Extensor.basis(self.atom(name, dual=True))

    def dyad(self, ket, bra) -> Extensor:
        """Grade-2 word |ket><bra| mixing one primal and one dual label."""
        return wedge(self.vector(ket), self.dual_vector(bra))

    def identity_operator(self) -> Extensor:
        out = Extensor.zero()
        for name in self.names:
            out = out + self.dyad(name, name)
        return out


def dyad(space: BasisSpace, ket, bra) -> Extensor:
    return space.dyad(ket, bra)
