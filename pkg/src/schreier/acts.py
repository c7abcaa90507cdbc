"""Free right acts over weighted free monoids and their finitely generated subacts.

A free act ``F`` with basis ``A`` over the free monoid ``W(X)`` is a forest: one
tree per basis element ``a``, whose vertices are the elements ``a w``.  A subact
``P`` is an up-closed set of vertices; when it is finitely generated it is the
union of the cones above its generators, and its unique free basis is the set
of prefix-minimal generators.

Internally letters and basis elements are referred to by their index, so every
enumeration follows the declared order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

from .series import TruncSeries, geom_inverse


class InfiniteComplement(ValueError):
    """Raised when ``F \\ P`` is infinite; carries a vertex whose whole cone avoids ``P``."""

    def __init__(self, witness: "ActWord", rendered: str):
        super().__init__(f"infinite complement (witness {rendered})")
        self.witness = witness
        self.rendered = rendered


class ActWord(NamedTuple):
    base: int
    word: tuple[int, ...]


class WeightedAlphabet:
    def __init__(self, letters: Sequence[str], deg: Sequence[int] | dict | None = None):
        letters = tuple(letters)
        if not letters:
            raise ValueError("alphabet must be nonempty")
        if len(set(letters)) != len(letters):
            raise ValueError("letters must be distinct")
        if deg is None:
            deg = [1] * len(letters)
        elif isinstance(deg, dict):
            deg = [deg[x] for x in letters]
        deg = tuple(int(d) for d in deg)
        if len(deg) != len(letters):
            raise ValueError("one degree per letter required")
        if any(d < 1 for d in deg):
            raise ValueError("letter degrees must be >= 1")
        self.letters = letters
        self.deg = deg
        self.index = {x: i for i, x in enumerate(letters)}

    @property
    def rank(self) -> int:
        return len(self.letters)

    def __repr__(self):
        return f"WeightedAlphabet({list(self.letters)}, {list(self.deg)})"


class ActBasis:
    def __init__(self, names: Sequence[str], deg: Sequence[int] | dict | None = None):
        names = tuple(names)
        if not names:
            raise ValueError("act basis must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError("basis names must be distinct")
        if deg is None:
            deg = [0] * len(names)
        elif isinstance(deg, dict):
            deg = [deg[a] for a in names]
        deg = tuple(int(d) for d in deg)
        if any(d < 0 for d in deg):
            raise ValueError("basis degrees must be >= 0")
        self.names = names
        self.deg = deg
        self.index = {a: i for i, a in enumerate(names)}

    @property
    def rank(self) -> int:
        return len(self.names)

    def __repr__(self):
        return f"ActBasis({list(self.names)}, {list(self.deg)})"


class FreeAct:
    """The ambient free act: a basis ``A`` acted on by the free monoid on ``X``."""

    def __init__(self, alphabet: WeightedAlphabet, basis: ActBasis):
        self.alphabet = alphabet
        self.basis = basis

    def word(self, base: str, letters: Iterable[str] = ()) -> ActWord:
        return ActWord(self.basis.index[base], tuple(self.alphabet.index[x] for x in letters))

    def degree(self, f: ActWord) -> int:
        return self.basis.deg[f.base] + sum(self.alphabet.deg[x] for x in f.word)

    def key(self, f: ActWord):
        return (self.degree(f), f.base, f.word)

    def render(self, f: ActWord) -> str:
        return self.basis.names[f.base] + "".join(self.alphabet.letters[x] for x in f.word)

    def alphabet_series(self, cap: int) -> TruncSeries:
        return TruncSeries.from_degrees(self.alphabet.deg, cap)

    def basis_series(self, cap: int) -> TruncSeries:
        return TruncSeries.from_degrees(self.basis.deg, cap)

    def free_word_counts(self, cap: int) -> list[int]:
        """Number of words in ``W(X)`` of each weight ``0..cap``."""
        f = [0] * (cap + 1)
        f[0] = 1
        for n in range(1, cap + 1):
            f[n] = sum(f[n - d] for d in self.alphabet.deg if d <= n)
        return f

    def vertices(self, max_degree: int) -> Iterator[ActWord]:
        """All forest vertices of degree ``<= max_degree`` (depth-first, declared order)."""
        adeg = self.alphabet.deg

        def walk(base, word, d):
            yield ActWord(base, word)
            for x, dx in enumerate(adeg):
                if d + dx <= max_degree:
                    yield from walk(base, word + (x,), d + dx)

        for b, d in enumerate(self.basis.deg):
            if d <= max_degree:
                yield from walk(b, (), d)

    def __repr__(self):
        return f"FreeAct({self.alphabet!r}, {self.basis!r})"


def is_prefix(s: ActWord, f: ActWord) -> bool:
    return s.base == f.base and f.word[: len(s.word)] == s.word


def _prefix_minimal(words: Iterable[ActWord]) -> frozenset[ActWord]:
    ws = sorted(set(words), key=lambda w: (len(w.word), w))
    kept: set[ActWord] = set()
    for w in ws:
        if not any(ActWord(w.base, w.word[:k]) in kept for k in range(len(w.word) + 1)):
            kept.add(w)
    return frozenset(kept)


@dataclass(frozen=True)
class Subact:
    """Finitely generated subact ``P = S W`` of ``act``, stored by prefix-minimal generators."""

    act: FreeAct = field(compare=False)
    generators: frozenset[ActWord]

    def __init__(self, act: FreeAct, generators: Iterable[ActWord | tuple] = ()):
        gens = []
        for g in generators:
            g = ActWord(int(g[0]), tuple(g[1]))
            if not 0 <= g.base < act.basis.rank:
                raise ValueError(f"base index {g.base} out of range")
            if any(not 0 <= x < act.alphabet.rank for x in g.word):
                raise ValueError(f"letter index out of range in {g}")
            gens.append(g)
        object.__setattr__(self, "act", act)
        object.__setattr__(self, "generators", _prefix_minimal(gens))

    @classmethod
    def parse(cls, act: FreeAct, generators: Iterable[Sequence[str]]) -> Subact:
        """Build from ``[["a", "x", "y"], ...]`` (basis name followed by letters)."""
        return cls(act, [act.word(g[0], g[1:]) for g in generators])

    @property
    def is_empty(self) -> bool:
        return not self.generators

    def sorted_generators(self) -> list[ActWord]:
        return sorted(self.generators, key=self.act.key)

    def __contains__(self, f: ActWord) -> bool:
        return membership(f, self)

    def __repr__(self):
        return "Subact<" + ", ".join(self.act.render(g) for g in self.sorted_generators()) + ">"


def canonical_basis(p: Subact) -> list[ActWord]:
    """The free basis of ``P``: members whose tree-parent is outside ``P``."""
    return p.sorted_generators()


def membership(f: ActWord, p: Subact) -> bool:
    gens = p.generators
    return any(ActWord(f.base, f.word[:k]) in gens for k in range(len(f.word) + 1))


def basis_series(p: Subact, cap: int) -> TruncSeries:
    return TruncSeries.from_degrees((p.act.degree(b) for b in canonical_basis(p)), cap)


def _proper_prefixes(p: Subact) -> set[ActWord]:
    out = set()
    for g in p.generators:
        for k in range(len(g.word)):
            out.add(ActWord(g.base, g.word[:k]))
    return out


def complement_census(p: Subact, cap: int) -> list[int]:
    """Count the vertices of ``F \\ P`` in each degree ``0..cap``.

    Walks the finite trie of proper generator prefixes; every branch leaving
    the trie without hitting a generator is a free cone, counted in bulk.
    """
    act = p.act
    adeg = act.alphabet.deg
    free = act.free_word_counts(cap)
    trie = _proper_prefixes(p)
    counts = [0] * (cap + 1)

    def add_cone(d0):
        for n in range(d0, cap + 1):
            counts[n] += free[n - d0]

    def walk(node: ActWord, d: int):
        if d > cap:
            return
        counts[d] += 1
        for x, dx in enumerate(adeg):
            child = ActWord(node.base, node.word + (x,))
            if child in p.generators:
                continue
            if child in trie:
                walk(child, d + dx)
            else:
                add_cone(d + dx)

    for b, db in enumerate(act.basis.deg):
        root = ActWord(b, ())
        if root in p.generators:
            continue
        if root in trie:
            walk(root, db)
        else:
            add_cone(db)
    return counts


def complement_count(p: Subact, cap: int) -> TruncSeries:
    """Hilbert series of ``F \\ P`` up to ``cap``, computed by census and by series identity.

    The two routes must agree; a disagreement raises ``AssertionError``.
    """
    act = p.act
    direct = TruncSeries(complement_census(p, cap), cap)
    hx = act.alphabet_series(cap)
    via_series = (act.basis_series(cap) - basis_series(p, cap)) * geom_inverse(hx)
    if direct != via_series:
        raise AssertionError(f"complement census {direct!r} disagrees with series identity {via_series!r}")
    return direct


def schreier_series_rhs(p: Subact, cap: int) -> TruncSeries:
    """``H(A) + H(F\\P) (H(X) - 1)`` with the complement taken from the census."""
    act = p.act
    comp = TruncSeries(complement_census(p, cap), cap)
    return act.basis_series(cap) + comp * (act.alphabet_series(cap) - 1)


def verify_schreier_series(p: Subact, cap: int) -> bool:
    return basis_series(p, cap) == schreier_series_rhs(p, cap)


def complement_witness(p: Subact) -> ActWord | None:
    """A complement vertex whose entire cone avoids ``P``, or ``None`` if ``F \\ P`` is finite.

    Only proper prefixes of generators can be complement vertices with a
    generator above them, so ``F \\ P`` is infinite exactly when some root or
    some child of such a prefix is neither a generator nor a proper prefix.
    """
    act = p.act
    trie = _proper_prefixes(p)
    candidates = []
    for b in range(act.basis.rank):
        root = ActWord(b, ())
        if root not in p.generators and root not in trie:
            candidates.append(root)
    for node in trie:
        for x in range(act.alphabet.rank):
            child = ActWord(node.base, node.word + (x,))
            if child not in p.generators and child not in trie:
                candidates.append(child)
    if not candidates:
        return None
    return min(candidates, key=act.key)


def complement_elements(p: Subact) -> list[ActWord]:
    """All of ``F \\ P``; raises :class:`InfiniteComplement` when it is infinite."""
    w = complement_witness(p)
    if w is not None:
        raise InfiniteComplement(w, p.act.render(w))
    return sorted(_proper_prefixes(p), key=p.act.key)


def rank_formula_check(p: Subact) -> tuple[int, int, bool]:
    """``(rk P, |F \\ P|, rk P == rk F + |F \\ P| (rk W - 1))`` for cofinite ``P``."""
    act = p.act
    comp = len(complement_elements(p))
    rk_p = len(canonical_basis(p))
    ok = rk_p == act.basis.rank + comp * (act.alphabet.rank - 1)
    return rk_p, comp, ok


def union_intersection(p: Subact, q: Subact) -> tuple[Subact, Subact]:
    if p.act is not q.act:
        raise ValueError("subacts live in different acts")
    union = Subact(p.act, list(p.generators) + list(q.generators))
    meet = []
    for s in p.generators:
        for t in q.generators:
            if is_prefix(s, t):
                meet.append(t)
            elif is_prefix(t, s):
                meet.append(s)
    return union, Subact(p.act, meet)


def grassmann_report(p: Subact, q: Subact, cap: int) -> dict:
    union, meet = union_intersection(p, q)
    lhs = basis_series(p, cap) + basis_series(q, cap)
    rhs = basis_series(union, cap) + basis_series(meet, cap)
    ranks = {
        "P": len(p.generators),
        "Q": len(q.generators),
        "union": len(union.generators),
        "intersection": len(meet.generators),
    }
    # finitely generated subacts have finite ranks, so the rank identity always applies
    rank_ok = ranks["P"] + ranks["Q"] == ranks["union"] + ranks["intersection"]
    return {
        "union": union,
        "intersection": meet,
        "empty_intersection": meet.is_empty,
        "lhs": lhs,
        "rhs": rhs,
        "series_ok": lhs == rhs,
        "ranks": ranks,
        "rank_ok": rank_ok,
        "ok": lhs == rhs and rank_ok,
    }


def verify_grassmann(p: Subact, q: Subact, cap: int) -> bool:
    return grassmann_report(p, q, cap)["ok"]


def act_from_json(data: dict) -> FreeAct:
    alphabet = WeightedAlphabet(
        [e["name"] for e in data["alphabet"]], [int(e.get("deg", 1)) for e in data["alphabet"]]
    )
    basis = ActBasis(
        [e["name"] for e in data["act_basis"]], [int(e.get("deg", 0)) for e in data["act_basis"]]
    )
    return FreeAct(alphabet, basis)
