"""Right submodules of free modules over the free associative algebra ``k<x_1..x_r>``.

Elements of the free module ``F = u_1 R + ... + u_s R`` are finite sums of
monomials ``u_i . w``.  Monomials are ordered by degree, then coordinate, then
lexicographically on the word, with lower indices ranking higher
(``u1 > u2``, ``x1 > x2``); this order is compatible with right
multiplication, so prefix division (subtracting right multiples of a basis
element whose leading monomial is a prefix) terminates and leading monomials
of right multiples are right multiples of leading monomials.

A set of monic elements whose leading monomials are pairwise
prefix-incomparable is a free basis of the submodule it generates; the
monomials with no leading monomial as a prefix ("normal monomials") form a
linear basis of ``F/N``.

Text form: ``"2*u1.x1x2 - 1/3*u2.x2"``.
"""

from __future__ import annotations

import heapq
import itertools
import re
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from . import acts
from .fields import QQ
from .series import TruncSeries


class NCMonomial(NamedTuple):
    coord: int
    word: tuple[int, ...]


class FreeModule:
    """``F`` of rank ``s`` over the free associative algebra of rank ``r``.

    ``coord_degrees`` gives the degree of each ``u_i`` (all zero by default).
    """

    def __init__(self, s: int, r: int, field=QQ, coord_degrees: Sequence[int] | None = None):
        if s < 1 or r < 1:
            raise ValueError("need s >= 1 and r >= 1")
        self.s = s
        self.r = r
        self.field = field
        self.coord_degrees = tuple(coord_degrees) if coord_degrees is not None else (0,) * s
        if len(self.coord_degrees) != s or any(d < 0 for d in self.coord_degrees):
            raise ValueError("one nonnegative degree per coordinate required")

    def degree(self, m: NCMonomial) -> int:
        return self.coord_degrees[m.coord - 1] + len(m.word)

    def key(self, m: NCMonomial):
        # lower coordinate and letter indices rank higher: u1 > u2, x1 > x2
        return (self.degree(m), -m.coord, tuple(-x for x in m.word))

    def heap_key(self, m: NCMonomial):
        return (-self.degree(m), m.coord, m.word)

    def element(self, terms: dict | Iterable = ()) -> "ModuleElement":
        return ModuleElement(self, terms)

    def monomial(self, coord: int, word: Sequence[int] = (), coeff=1) -> "ModuleElement":
        return ModuleElement(self, {NCMonomial(coord, tuple(word)): coeff})

    def gen(self, i: int) -> "ModuleElement":
        return self.monomial(i)

    def parse(self, text: str) -> "ModuleElement":
        return parse_element(self, text)

    def same(self, other: "FreeModule") -> bool:
        return (self.s, self.r, self.field, self.coord_degrees) == (other.s, other.r, other.field, other.coord_degrees)

    def as_act(self) -> acts.FreeAct:
        """The free act of all monomials: basis ``u_i``, letters ``x_j`` of degree 1."""
        alphabet = acts.WeightedAlphabet([f"x{j}" for j in range(1, self.r + 1)])
        basis = acts.ActBasis([f"u{i}" for i in range(1, self.s + 1)], self.coord_degrees)
        return acts.FreeAct(alphabet, basis)

    def __repr__(self):
        return f"FreeModule(s={self.s}, r={self.r}, field={self.field!r})"


class ModuleElement:
    __slots__ = ("module", "terms")

    def __init__(self, module: FreeModule, terms: dict | Iterable = ()):
        self.module = module
        field = module.field
        clean = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for m, c in items:
            m = NCMonomial(int(m[0]), tuple(m[1]))
            if not 1 <= m.coord <= module.s or any(not 1 <= x <= module.r for x in m.word):
                raise ValueError(f"monomial {m} outside {module!r}")
            c = field(c)
            if c:
                clean[m] = clean.get(m, field(0)) + c
                if not clean[m]:
                    del clean[m]
        self.terms = clean

    @classmethod
    def _raw(cls, module, terms):
        obj = cls.__new__(cls)
        obj.module = module
        obj.terms = terms
        return obj

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def lm(self) -> NCMonomial:
        if not self.terms:
            raise ValueError("zero element has no leading monomial")
        return max(self.terms, key=self.module.key)

    def lc(self):
        return self.terms[self.lm()]

    def degree(self) -> int:
        return self.module.degree(self.lm())

    def monic(self) -> "ModuleElement":
        c = self.lc()
        return ModuleElement._raw(self.module, {m: v / c for m, v in self.terms.items()})

    def scale(self, c) -> "ModuleElement":
        c = self.module.field(c)
        if not c:
            return ModuleElement._raw(self.module, {})
        return ModuleElement._raw(self.module, {m: v * c for m, v in self.terms.items()})

    def rmul(self, word: Sequence[int]) -> "ModuleElement":
        """Right multiplication by a word."""
        word = tuple(word)
        return ModuleElement._raw(
            self.module, {NCMonomial(m.coord, m.word + word): v for m, v in self.terms.items()}
        )

    def rmul_poly(self, poly: dict) -> "ModuleElement":
        """Right multiplication by an algebra element ``{word: coeff}``."""
        out = self.module.element()
        for w, c in poly.items():
            out = out + self.rmul(w).scale(c)
        return out

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m)
            v = c if v is None else v + c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return ModuleElement._raw(self.module, terms)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return format_element(self)


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?
        u(?P<coord>\d+)
        (?:\.(?P<word>(?:x\d+)*))?\s*""",
    re.VERBOSE,
)


def parse_word_letters(text: str) -> tuple[int, ...]:
    if not re.fullmatch(r"(?:x\d+)*", text):
        raise ValueError(f"bad word {text!r}")
    return tuple(int(d) for d in re.findall(r"x(\d+)", text))


def parse_element(module: FreeModule, text: str) -> ModuleElement:
    pos = 0
    terms = []
    text = text.strip()
    if text in ("0", ""):
        return module.element()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse element at position {pos}: {text[pos:pos + 12]!r}")
        if terms and m.group("sign") is None:
            raise ValueError(f"missing sign at position {pos}")
        coef = Fraction(m.group("coef") or 1)
        if m.group("sign") == "-":
            coef = -coef
        word = parse_word_letters(m.group("word") or "")
        terms.append(((int(m.group("coord")), word), coef))
        pos = m.end()
    return ModuleElement(module, terms)


def format_monomial(m: NCMonomial) -> str:
    w = "".join(f"x{x}" for x in m.word)
    return f"u{m.coord}" + (f".{w}" if w else "")


def format_element(f: ModuleElement) -> str:
    if not f.terms:
        return "0"
    parts = []
    for m in sorted(f.terms, key=f.module.key, reverse=True):
        c = f.terms[m]
        neg = False
        if isinstance(c, Fraction) and c < 0:
            neg, c = True, -c
        body = format_monomial(m) if c == 1 else f"{c}*{format_monomial(m)}"
        parts.append(("- " if neg else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


class PrefixBasis:
    """Monic elements with pairwise prefix-incomparable leading monomials.

    ``cofactors[i]`` (when tracked) expresses ``elements[i]`` through the
    original generators: coordinate ``j`` of the cofactor is the right
    multiplier of generator ``j``.
    """

    def __init__(self, module: FreeModule, elements: Sequence[ModuleElement], cofactors=None, generators=None):
        self.module = module
        self.elements = tuple(elements)
        self.cofactors = tuple(cofactors) if cofactors is not None else None
        self.generators = tuple(generators) if generators is not None else None
        self.leads = {f.lm(): i for i, f in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def find_prefix(self, m: NCMonomial, skip: int | None = None) -> tuple[int, tuple[int, ...]] | None:
        """``(i, w)`` with ``m == lm(elements[i]) . w``, ignoring element ``skip``."""
        for k in range(len(m.word) + 1):
            i = self.leads.get(NCMonomial(m.coord, m.word[:k]))
            if i is not None and i != skip:
                return i, m.word[k:]
        return None

    def lead_subact(self) -> acts.Subact:
        act = self.module.as_act()
        return acts.Subact(act, [acts.ActWord(m.coord - 1, tuple(x - 1 for x in m.word)) for m in self.leads])

    def degrees(self) -> list[int]:
        return [f.degree() for f in self.elements]

    def check(self) -> None:
        lms = list(self.leads)
        for a, b in itertools.permutations(lms, 2):
            if a.coord == b.coord and b.word[: len(a.word)] == a.word:
                raise AssertionError(f"leading monomials {a} and {b} are prefix-comparable")
        for f in self.elements:
            if f.lc() != 1:
                raise AssertionError("basis element is not monic")

    def __repr__(self):
        return "PrefixBasis[" + ", ".join(map(repr, self.elements)) + "]"


def _reduce(f: ModuleElement, basis: PrefixBasis, fcof: ModuleElement | None = None, skip: int | None = None):
    """Full prefix reduction of ``f``; ``fcof`` is updated alongside when given.

    Monomials are visited largest first.  Subtracting a right multiple only
    introduces smaller monomials, so a monomial found irreducible stays so.
    """
    module = f.module
    terms = dict(f.terms)
    cterms = dict(fcof.terms) if fcof is not None else None
    heap = [(module.heap_key(m), m) for m in terms]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        if m not in terms:
            continue
        hit = basis.find_prefix(m, skip)
        if hit is None:
            continue
        i, w = hit
        g = basis.elements[i]
        c = terms[m] / g.lc()
        for gm, gc in g.terms.items():
            nm = NCMonomial(gm.coord, gm.word + w)
            v = terms.get(nm)
            v = -c * gc if v is None else v - c * gc
            if v:
                if nm not in terms:
                    heapq.heappush(heap, (module.heap_key(nm), nm))
                terms[nm] = v
            else:
                terms.pop(nm, None)
        if cterms is not None:
            for cm, cc in basis.cofactors[i].terms.items():
                nm = NCMonomial(cm.coord, cm.word + w)
                v = cterms.get(nm)
                v = -c * cc if v is None else v - c * cc
                if v:
                    cterms[nm] = v
                else:
                    cterms.pop(nm, None)
    out = ModuleElement._raw(module, terms)
    if fcof is None:
        return out
    return out, ModuleElement._raw(fcof.module, cterms)


def reduce(f: ModuleElement, basis: PrefixBasis) -> ModuleElement:
    """Normal form of ``f``: no monomial has a basis leading monomial as prefix."""
    return _reduce(f, basis)


def interreduce(gens: Sequence[ModuleElement], track: bool = True, module: FreeModule | None = None) -> PrefixBasis:
    """Free basis of the submodule generated by ``gens``, fully interreduced.

    Generators are consumed in increasing leading-monomial order; a new
    element evicts (and requeues) every basis element whose leading monomial
    it prefixes.  With ``track`` every output element carries its expression
    through the inputs.
    """
    gens = list(gens)
    if module is None:
        if not gens:
            raise ValueError("module must be given when there are no generators")
        module = gens[0].module
    for g in gens:
        if not g.module.same(module):
            raise ValueError("generators live in different modules")
    cmod = FreeModule(max(len(gens), 1), module.r, module.field)
    counter = itertools.count()
    queue = []
    for j, g in enumerate(gens, start=1):
        if g:
            cof = cmod.monomial(j) if track else None
            heapq.heappush(queue, (module.key(g.lm()), next(counter), g, cof))
    elems: list[ModuleElement] = []
    cofs: list[ModuleElement | None] = []
    while queue:
        _, _, f, fcof = heapq.heappop(queue)
        basis = PrefixBasis(module, elems, cofs if track else None)
        if track:
            f, fcof = _reduce(f, basis, fcof)
        else:
            f = _reduce(f, basis)
        if not f:
            continue
        c = f.lc()
        f = f.monic()
        if track:
            fcof = fcof.scale(1 / c)
        lm = f.lm()
        keep_e, keep_c = [], []
        for g, gc in zip(elems, cofs):
            glm = g.lm()
            if glm.coord == lm.coord and glm.word[: len(lm.word)] == lm.word:
                heapq.heappush(queue, (module.key(glm), next(counter), g, gc))
            else:
                keep_e.append(g)
                keep_c.append(gc)
        elems, cofs = keep_e + [f], keep_c + [fcof]
    # tail reduction; leading monomials never change, so one pass suffices
    order = sorted(range(len(elems)), key=lambda i: module.key(elems[i].lm()))
    elems = [elems[i] for i in order]
    cofs = [cofs[i] for i in order]
    for i in range(len(elems)):
        basis = PrefixBasis(module, elems, cofs if track else None)
        if track:
            elems[i], cofs[i] = _reduce(elems[i], basis, cofs[i], skip=i)
        else:
            elems[i] = _reduce(elems[i], basis, skip=i)
    return PrefixBasis(module, elems, cofs if track else None, gens)


def expand_cofactor(cof: ModuleElement, gens: Sequence[ModuleElement]) -> ModuleElement:
    """``sum_j gens[j] * cof_j`` where ``cof_j`` is coordinate ``j`` of ``cof``."""
    out = gens[0].module.element()
    for m, c in cof.terms.items():
        out = out + gens[m.coord - 1].rmul(m.word).scale(c)
    return out


def normal_census(basis: PrefixBasis, module: FreeModule, cap: int) -> list[int]:
    """Normal monomials per degree, counted on the prefix tree of leading monomials."""
    if not basis.leads:
        sub = acts.Subact(module.as_act(), [])
    else:
        sub = basis.lead_subact()
    return acts.complement_census(sub, cap)


def brute_normal_census(basis: PrefixBasis, module: FreeModule, cap: int) -> list[int]:
    counts = [0] * (cap + 1)
    for i in range(1, module.s + 1):
        d0 = module.coord_degrees[i - 1]
        for n in range(0, cap - d0 + 1):
            for w in itertools.product(range(1, module.r + 1), repeat=n):
                if basis.find_prefix(NCMonomial(i, w)) is None:
                    counts[d0 + n] += 1
    return counts


def module_hilbert(basis: PrefixBasis, s: int, r: int, cap: int, module: FreeModule | None = None, brute_limit: int = 8) -> TruncSeries:
    """Hilbert series of ``M = F/N`` up to ``cap``; the low degrees are cross-checked by brute force."""
    if module is None:
        module = basis.module if basis.elements else FreeModule(s, r)
    if (module.s, module.r) != (s, r):
        raise ValueError("s, r do not match the module")
    census = normal_census(basis, module, cap)
    lim = min(cap, brute_limit)
    if lim >= 0 and brute_limit >= 0:
        brute = brute_normal_census(basis, module, lim)
        if brute != census[: lim + 1]:
            raise AssertionError(f"normal-monomial DP {census[:lim + 1]} disagrees with enumeration {brute}")
    return TruncSeries(census, cap)


def basis_series(basis: PrefixBasis, cap: int) -> TruncSeries:
    return TruncSeries.from_degrees(basis.degrees(), cap)


def dimension(basis: PrefixBasis, module: FreeModule) -> int | None:
    """``dim F/N`` when finite, else ``None``."""
    sub = basis.lead_subact() if basis.leads else acts.Subact(module.as_act(), [])
    if acts.complement_witness(sub) is not None:
        return None
    return len(acts.complement_elements(sub))


def tpsfm_report(gens: Sequence[ModuleElement], s: int, r: int, cap: int, module: FreeModule | None = None, brute_limit: int = 8) -> dict:
    if module is None:
        if not gens:
            raise ValueError("module must be given when there are no generators")
        module = gens[0].module
    basis = interreduce(gens, track=False, module=module)
    hm = module_hilbert(basis, s, r, cap, module, brute_limit)
    hb = basis_series(basis, cap)
    t = TruncSeries.variable(cap)
    coords = TruncSeries.from_degrees(module.coord_degrees, cap)
    rhs = hm * (r * t - 1) + coords
    dim = dimension(basis, module)
    lewin = None
    if dim is not None:
        lewin = len(basis) == (r - 1) * dim + s
    return {
        "basis": basis,
        "rank": len(basis),
        "H_M": hm,
        "H_B": hb,
        "rhs": rhs,
        "series_ok": hb == rhs,
        "dim": dim,
        "lewin_ok": lewin,
        "ok": hb == rhs and lewin is not False,
    }


def verify_tPSFM(gens: Sequence[ModuleElement], s: int, r: int, cap: int) -> bool:
    return tpsfm_report(gens, s, r, cap)["ok"]
