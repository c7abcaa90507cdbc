"""Module presentations over free associative and free group algebras.

A relator is stored as ``{(j, word): coeff}`` meaning ``sum coeff * u_j * word``
where ``word`` is a tuple of signed letter indices (negative letters only occur
over the free group algebra).  An affine presentation stores its relation
matrix with entries ``(c0, c1, ..., cr)`` meaning ``c0 + c1 z_1 + ... + cr z_r``,
where ``z_i = x_i`` over the free associative algebra and ``z_i = x_i - 1`` over
the group algebra.  The ``z_i`` are kept formal.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg, ncalg
from .fields import QQ, field_from_name

ASSOC = "assoc"
GROUP = "group"

Relator = dict  # {(gen_index, word): coeff}


def _reduce_group_word(w):
    out = []
    for a in w:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def _clean(rel: dict, algebra: str, fld) -> dict:
    out: dict = {}
    for (j, w), c in rel.items():
        if algebra == GROUP:
            w = _reduce_group_word(w)
        elif any(a < 0 for a in w):
            raise ValueError("inverse letters are only allowed over the group algebra")
        key = (j, tuple(w))
        out[key] = out.get(key, fld(0)) + fld(c)
        if not out[key]:
            del out[key]
    return out


@dataclass
class Presentation:
    algebra: str
    rank: int
    generators: list[str]
    relators: list[Relator]
    field: object = QQ

    def __post_init__(self):
        if self.algebra not in (ASSOC, GROUP):
            raise ValueError(f"unknown algebra kind {self.algebra!r}")
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator names must be distinct")
        p = len(self.generators)
        for rel in self.relators:
            for (j, w) in rel:
                if not 0 <= j < p:
                    raise ValueError(f"generator index {j} out of range")
                if any(not 1 <= abs(a) <= self.rank for a in w):
                    raise ValueError(f"word {w} uses letters outside rank {self.rank}")
        self.relators = [_clean(r, self.algebra, self.field) for r in self.relators]

    @property
    def p(self) -> int:
        return len(self.generators)

    @property
    def q(self) -> int:
        return len(self.relators)

    def is_affine(self) -> bool:
        return all(len(w) <= 1 and all(a > 0 for a in w) for rel in self.relators for (_, w) in rel)

    def to_ncalg(self, coord_degrees=None) -> tuple[ncalg.FreeModule, list[ncalg.ModuleElement]]:
        if self.algebra != ASSOC:
            raise ValueError("only free associative presentations map to ncalg")
        F = ncalg.FreeModule(self.p, self.rank, self.field, coord_degrees)
        return F, [F.element({(j + 1, w): c for (j, w), c in rel.items()}) for rel in self.relators]


def _zero_entry(r, fld):
    return (fld(0),) * (r + 1)


@dataclass
class AffinePresentation:
    """Relation matrix ``T`` (``q x p``) with entries of degree at most one in ``z``."""

    algebra: str
    rank: int
    generators: list[str]
    matrix: list[list[tuple]]
    field: object = QQ

    @property
    def p(self) -> int:
        return len(self.generators)

    @property
    def q(self) -> int:
        return len(self.matrix)

    def column(self, j: int) -> list[tuple]:
        return [row[j] for row in self.matrix]

    def is_constant_column(self, j: int) -> bool:
        return all(not any(e[1:]) for e in self.column(j))

    def is_zero_column(self, j: int) -> bool:
        return all(not any(e) for e in self.column(j))

    def check(self) -> None:
        for row in self.matrix:
            if len(row) != self.p:
                raise AssertionError("ragged relation matrix")
            for e in row:
                if len(e) != self.rank + 1:
                    raise AssertionError("matrix entry is not affine in z_1..z_r")

    def relator_in_z(self, i: int) -> dict:
        """Row ``i`` as ``{(j, zword): coeff}`` with formal ``z`` letters."""
        out = {}
        for j, e in enumerate(self.matrix[i]):
            if e[0]:
                out[(j, ())] = e[0]
            for k in range(1, self.rank + 1):
                if e[k]:
                    out[(j, (k,))] = e[k]
        return out

    def relator_in_x(self, i: int) -> dict:
        """Row ``i`` expanded with ``z_k = x_k`` (assoc) or ``z_k = x_k - 1`` (group)."""
        out: dict = {}
        for j, e in enumerate(self.matrix[i]):
            c0 = e[0]
            for k in range(1, self.rank + 1):
                if e[k]:
                    out[(j, (k,))] = out.get((j, (k,)), 0) + e[k]
                    if self.algebra == GROUP:
                        c0 = c0 - e[k]
            if c0:
                out[(j, ())] = out.get((j, ()), 0) + c0
        return {key: v for key, v in out.items() if v}

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "rank": self.rank,
            "generators": list(self.generators),
            "matrix": [[[_fmt(c) for c in e] for e in row] for row in self.matrix],
        }


def _fmt(c) -> str:
    return str(c)


def _letter_name(a: int) -> str:
    return f"x{a}" if a > 0 else f"X{-a}"


@dataclass
class AffinizationResult:
    affine: AffinePresentation
    added: int
    definitions: dict[str, tuple[str, int]]  # new generator -> (source generator, signed letter)
    expressions: list[dict]  # each generator as {(old_j, word): coeff} over the original generators


def higman_affinize(pres: Presentation) -> AffinizationResult:
    """Affine presentation of the same module with ``p + s`` generators and ``q + s`` relators.

    Long words are split leftmost letter first: ``u . l w`` becomes ``g . w``
    with a new generator ``g`` and relator ``g - u l``.  Over the group algebra
    an inverse letter is absorbed by ``g = u l^-1`` with relator ``u - g l``.
    Splits are shared between relators.
    """
    fld = pres.field
    gens = list(pres.generators)
    expr: list[dict] = [{(j, ()): fld(1)} for j in range(pres.p)]
    defs: dict[tuple[int, int], int] = {}
    definitions: dict[str, tuple[str, int]] = {}
    aux: list[dict] = []

    def split(j: int, a: int) -> int:
        if (j, a) in defs:
            return defs[(j, a)]
        g = len(gens)
        name = f"{gens[j]}_{_letter_name(a)}"
        while name in gens:
            name += "'"
        gens.append(name)
        defs[(j, a)] = g
        definitions[name] = (gens[j], a)
        e = {}
        for (o, w), c in expr[j].items():
            nw = _reduce_group_word(w + (a,)) if pres.algebra == GROUP else w + (a,)
            e[(o, nw)] = e.get((o, nw), 0) + c
        expr.append({k: v for k, v in e.items() if v})
        if a > 0:
            aux.append({(g, ()): fld(1), (j, (a,)): fld(-1)})
        else:
            aux.append({(j, ()): fld(1), (g, (-a,)): fld(-1)})
        return g

    rewritten = []
    for rel in pres.relators:
        new: dict = {}
        for (j, w), c in rel.items():
            while len(w) >= 2:
                j = split(j, w[0])
                w = w[1:]
            if len(w) == 1 and w[0] < 0:
                j = split(j, w[0])
                w = ()
            new[(j, w)] = new.get((j, w), fld(0)) + c
        rewritten.append({k: v for k, v in new.items() if v})
    rows = rewritten + aux
    p, r = len(gens), pres.rank
    matrix = []
    for rel in rows:
        row = [list(_zero_entry(r, fld)) for _ in range(p)]
        for (j, w), c in rel.items():
            if not w:
                row[j][0] += c
            else:
                (a,) = w
                row[j][a] += c
                if pres.algebra == GROUP:
                    row[j][0] += c  # x_a = z_a + 1
        matrix.append([tuple(e) for e in row])
    ap = AffinePresentation(pres.algebra, r, gens, matrix, fld)
    return AffinizationResult(ap, len(gens) - pres.p, definitions, expr)


def _mul_word(w, v, algebra):
    return _reduce_group_word(w + v) if algebra == GROUP else w + v


def substitution_check(pres: Presentation, result: AffinizationResult) -> bool:
    """Substituting each new generator by its defining expression turns the first
    ``q`` affine relators back into the original ones and the others into zero."""
    ap = result.affine
    for i in range(ap.q):
        total: dict = {}
        for (j, w), c in ap.relator_in_x(i).items():
            for (o, ew), ec in result.expressions[j].items():
                key = (o, _mul_word(ew, w, pres.algebra))
                total[key] = total.get(key, 0) + ec * c
        total = {k: v for k, v in total.items() if v}
        target = pres.relators[i] if i < pres.q else {}
        if total != {k: v for k, v in target.items() if v}:
            return False
    return True


def generator_degrees(pres: Presentation, result: AffinizationResult) -> list[int]:
    degs = [0] * pres.p
    for name in result.affine.generators[pres.p:]:
        src, _ = result.definitions[name]
        degs.append(degs[result.affine.generators.index(src)] + 1)
    return degs


def hilbert_of_presentation(pres: Presentation, cap: int, coord_degrees=None):
    F, rels = pres.to_ncalg(coord_degrees)
    basis = ncalg.interreduce(rels, track=False, module=F)
    return ncalg.module_hilbert(basis, F.s, F.r, cap, F, brute_limit=-1)


def affine_to_presentation(ap: AffinePresentation) -> Presentation:
    rels = []
    for i in range(ap.q):
        rels.append({(j, (k,) if k else ()): c for (j, w), c in ap.relator_in_x(i).items() for k in [w[0] if w else 0]})
    return Presentation(ap.algebra, ap.rank, list(ap.generators), rels, ap.field)


def hilbert_equivalence(pres: Presentation, result: AffinizationResult, cap: int = 8) -> bool:
    """Hilbert series of ``M`` from both presentations agree up to ``cap`` (assoc only).

    New generators carry the degree of the monomial they stand for.
    """
    if pres.algebra != ASSOC:
        raise ValueError("Hilbert-series comparison needs a free associative presentation")
    before = hilbert_of_presentation(pres, cap)
    after = hilbert_of_presentation(affine_to_presentation(result.affine), cap, generator_degrees(pres, result))
    return before == after


# -- largeness ----------------------------------------------------------------


class NotApplicable(ValueError):
    pass


@dataclass
class LargenessWitness:
    steps: list[dict]
    final: AffinePresentation
    free_generator: str
    free_generator_index: int
    expressions: list[dict]  # current generators as {(orig_j, zword): coeff}
    codim: int
    k: int
    original: AffinePresentation = field(repr=False, default=None)

    def to_json(self) -> dict:
        return {
            "codim": self.codim,
            "k": self.k,
            "free_generator": self.free_generator,
            "free_generator_expression": _fmt_expr(self.expressions[self.free_generator_index], self.original),
            "steps": self.steps,
            "final": self.final.to_json(),
        }


def _fmt_expr(e: dict, ap: AffinePresentation) -> str:
    parts = []
    for (o, zw), c in sorted(e.items(), key=lambda kv: (kv[0][0], len(kv[0][1]), kv[0][1])):
        mono = ap.generators[o] + "".join(f"z{k}" for k in zw)
        parts.append(f"{_fmt(c)}*{mono}")
    return " + ".join(parts) if parts else "0"


def largeness_witness(ap: AffinePresentation) -> LargenessWitness:
    """Run the column procedure until some generator is absent from every relator.

    Each round either finds a dependency among the constant columns (a zero
    column after a change of basis: stop) or clears the constant part of one
    column and replaces its generator ``u`` by ``u z_1, ..., u z_r``, which
    raises the codimension by at most one and the number of constant columns
    by ``r``.  At most ``q // r + 1`` expansions are needed.
    """
    p, q, r = ap.p, ap.q, ap.rank
    fld = ap.field
    if p - q <= 0:
        raise NotApplicable(f"largeness procedure needs p - q > 0 (p={p}, q={q})")
    k = q // r + 1
    names = list(ap.generators)
    cols = [ap.column(j) for j in range(p)]
    exprs = [{(j, ()): fld(1)} for j in range(p)]
    steps: list[dict] = []
    codim = 0

    def is_const(col):
        return all(not any(e[1:]) for e in col)

    def combine(f, lam):
        """Column ``f`` becomes ``sum lam_j col_j`` (``lam[f] == 1``); generators follow."""
        new_col = []
        for i in range(q):
            acc = [fld(0)] * (r + 1)
            for j, c in lam.items():
                for t in range(r + 1):
                    acc[t] += c * cols[j][i][t]
            new_col.append(tuple(acc))
        cols[f] = new_col
        changed = {}
        for j, c in lam.items():
            if j == f:
                continue
            e = dict(exprs[j])
            for key, v in exprs[f].items():
                e[key] = e.get(key, fld(0)) - c * v
            exprs[j] = {kk: vv for kk, vv in e.items() if vv}
            old = names[j]
            names[j] = old + "'"
            changed[names[j]] = f"{old} - ({_fmt(c)})*{names[f]}"
        pnow = len(cols)
        matrix = [[_fmt(fld(1) if a == b else fld(0)) for b in range(pnow)] for a in range(pnow)]
        for j, c in lam.items():
            matrix[j][f] = _fmt(c)
        steps.append({"kind": "basis_change", "pivot": names[f], "column_combination": {names[j] if j != f else names[f]: _fmt(c) for j, c in sorted(lam.items())}, "new_generators": changed, "matrix": matrix})

    while True:
        const = [j for j in range(len(cols)) if is_const(cols[j])]
        nonconst = [j for j in range(len(cols)) if j not in const]
        # 1. dependent constant columns -> a zero column after a change of basis
        rows = [[cols[j][i][0] for j in const] for i in range(q)]
        ker = linalg.nullspace(rows, len(const), fld) if const else []
        if ker:
            vec = ker[0]
            f_local = max(vec)  # the free column is the last nonzero entry
            lam = {const[t]: c for t, c in vec.items()}
            f = const[f_local]
            if len(lam) > 1:
                combine(f, lam)
            break
        # 2. a combination of columns with zero constant term
        order = const + nonconst
        rows0 = [[cols[j][i][0] for j in order] for i in range(q)]
        ker = linalg.nullspace(rows0, len(order), fld)
        assert ker, "p > q forces a dependency among constant parts"
        frees = [max(v) for v in ker]
        t_last = max(range(len(ker)), key=lambda t: frees[t])
        vec = ker[t_last]
        f = order[frees[t_last]]
        assert f in nonconst
        lam = {order[t]: c for t, c in vec.items()}
        if len(lam) > 1:
            combine(f, lam)
        if all(not any(e) for e in cols[f]):
            break
        # 3. expand the generator of column f into u z_1, ..., u z_r
        col = cols.pop(f)
        name = names.pop(f)
        e = exprs.pop(f)
        new_names = []
        for t in range(1, r + 1):
            cols.append([(e_[t],) + (fld(0),) * r for e_ in col])
            nm = f"{name}z{t}"
            names.append(nm)
            new_names.append(nm)
            exprs.append({(o, zw + (t,)): c for (o, zw), c in e.items()})
        codim += 1
        steps.append({"kind": "expand", "generator": name, "new_generators": new_names, "codim": codim})
        if codim > k:
            raise AssertionError("expansion count exceeded the guaranteed bound")
    zero = [j for j in range(len(cols)) if all(not any(e) for e in cols[j])]
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(q)]
    final = AffinePresentation(ap.algebra, r, names, matrix, fld)
    return LargenessWitness(steps, final, names[zero[0]], zero[0], exprs, codim, k, ap)


def check_witness(ap: AffinePresentation, w: LargenessWitness) -> dict:
    """Independent audit of a witness against the presentation it came from."""
    final = w.final
    zero_col = final.is_zero_column(w.free_generator_index)
    # every final relator, rewritten through the generator expressions, is the original one
    consistent = True
    for i in range(ap.q):
        total: dict = {}
        for (j, zw), c in final.relator_in_z(i).items():
            for (o, ew), ec in w.expressions[j].items():
                key = (o, ew + zw)
                total[key] = total.get(key, 0) + ec * c
        total = {kk: v for kk, v in total.items() if v}
        if total != ap.relator_in_z(i):
            consistent = False
    invertible = all(
        linalg.rank([[Fraction(x) if ap.field == QQ else ap.field(Fraction(x)) for x in row] for row in s["matrix"]], len(s["matrix"]), ap.field) == len(s["matrix"])
        for s in w.steps
        if s["kind"] == "basis_change"
    )
    expansions = [s for s in w.steps if s["kind"] == "expand"]
    full_expansions = all(len(s["new_generators"]) == ap.rank for s in expansions)
    return {
        "codim_ok": w.codim <= ap.q // ap.rank + 1 and w.codim == len(expansions),
        "zero_column": zero_col,
        "consistent": consistent,
        "invertible": invertible,
        "delta_power_inside": full_expansions,
        "ok": zero_col and consistent and invertible and full_expansions and w.codim <= ap.q // ap.rank + 1,
    }


def largeness(pres: Presentation) -> tuple[AffinizationResult, LargenessWitness]:
    """Affinize, then run the largeness procedure (requires ``p - q > 0``)."""
    if pres.p - pres.q <= 0:
        raise NotApplicable(f"presentation has p - q = {pres.p - pres.q} <= 0")
    res = higman_affinize(pres)
    return res, largeness_witness(res.affine)


# -- the bound-but-large example ---------------------------------------------------


def bound_example_presentation(s: int, r: int, fld=QQ) -> Presentation:
    if s < 1:
        raise ValueError("the example needs s >= 1")
    if r < 2:
        raise ValueError("the example needs r > 1")
    if s > r:
        raise ValueError("the relator uses x_1..x_s, so s <= r is required")
    rel = {(i, (i + 1,)): fld(1) for i in range(s)}
    return Presentation(ASSOC, r, [f"u{i + 1}" for i in range(s)], [rel], fld)


def linear_forms_solution_dim(s: int, r: int, d: int, fld=QQ) -> int:
    """Dimension of ``{(b_1..b_s) : deg b_i <= d, b_1 x_1 + ... + b_s x_s = 0}`` in the free algebra."""
    words = [w for n in range(d + 1) for w in itertools.product(range(1, r + 1), repeat=n)]
    index = {(i, w): t for t, (i, w) in enumerate((i, w) for i in range(1, s + 1) for w in words)}
    eqs: dict[tuple, dict] = {}
    for (i, w), t in index.items():
        eqs.setdefault(w + (i,), {})[t] = fld(1)
    return len(linalg.nullspace(list(eqs.values()), len(index), fld))


def bound_large_example(s: int, r: int, bound: int = 6, fld=QQ) -> tuple[Presentation, dict]:
    pres = bound_example_presentation(s, r, fld)
    report: dict = {"s": s, "r": r}
    # explicit submodule N = <u1 x1, ..., u1 xr, u2, ..., us> of F
    F = ncalg.FreeModule(s, r, fld)
    n_gens = [F.monomial(1, (t,)) for t in range(1, r + 1)] + [F.monomial(i) for i in range(2, s + 1)]
    nb = ncalg.interreduce(n_gens, track=False)
    relator = F.element({(i + 1, (i + 1,)): 1 for i in range(s)})
    report["N_rank"] = len(nb)
    report["N_codim"] = ncalg.dimension(nb, F)
    report["relator_in_N"] = not ncalg.reduce(relator, nb)
    # over the basis of N the relator reads e(u1x1) + sum_{i>=2} e(u_i) x_i, so e(u1x2) is untouched
    report["N_mod_relator_free_generator"] = "u1.x2"
    if pres.p - pres.q > 0:
        res, wit = largeness(pres)
        audit = check_witness(res.affine, wit)
        report["witness"] = wit.to_json()
        report["witness_ok"] = audit["ok"]
        report["codim"] = wit.codim
    else:
        report["witness"] = None
        report["witness_ok"] = None
        report["codim"] = report["N_codim"]
    report["solution_dims"] = {d: linear_forms_solution_dim(s, r, d, fld) for d in range(bound + 1)}
    report["no_surjection"] = all(v == 0 for v in report["solution_dims"].values())
    report["ok"] = (
        report["codim"] is not None
        and report["codim"] <= 1
        and report["N_codim"] == 1
        and report["relator_in_N"]
        and report["no_surjection"]
        and report["witness_ok"] is not False
    )
    return pres, report


# -- combinatorial ingredients of the nil-module construction ---------------------


def f_polynomials(k: int, j: Sequence[int]) -> ncalg.ModuleElement:
    """Coefficient of ``u_1^{j_1} ... u_k^{j_k}`` in ``(u_1 y_1 + ... + u_k y_k)^m``.

    That is the sum of all words in ``y_1..y_k`` with letter multiplicities
    ``j``, returned as an element of the rank-one free module (``y_i`` is ``x_i``).
    """
    j = tuple(j)
    if len(j) != k:
        raise ValueError("multidegree must have k entries")
    if any(x < 0 for x in j):
        raise ValueError("multidegree entries must be nonnegative")
    F = ncalg.FreeModule(1, max(k, 1))
    words = []

    def build(prefix, remaining):
        if not any(remaining):
            words.append(tuple(prefix))
            return
        for i, c in enumerate(remaining):
            if c:
                remaining[i] -= 1
                prefix.append(i + 1)
                build(prefix, remaining)
                prefix.pop()
                remaining[i] += 1

    build([], list(j))
    return F.element({(1, w): 1 for w in words})


def multinomial(j: Sequence[int]) -> int:
    out = math.factorial(sum(j))
    for x in j:
        out //= math.factorial(x)
    return out


def d_k(k: int, m: int) -> int:
    """Number of multidegrees of total degree ``m`` in ``k`` variables."""
    return math.comb(m + k - 1, k - 1)


def growth_gap(l: int, k: int, r: int) -> int:
    """Least ``m`` with ``d_k(l + m) < r^m``."""
    if r < 2 or k < 1 or l < 0:
        raise ValueError("need r >= 2, k >= 1, l >= 0")
    m = 0
    while d_k(k, l + m) >= r**m:
        m += 1
    return m


# -- JSON ------------------------------------------------------------------------------

_LETTER = re.compile(r"(x|X)(\d+)(\^-1)?")


def parse_group_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "1"):
        return ()
    out = []
    pos = 0
    while pos < len(text):
        m = _LETTER.match(text, pos)
        if not m:
            raise ValueError(f"bad letter at position {pos} in word {text!r}")
        a = int(m.group(2))
        if (m.group(1) == "X") != bool(m.group(3)):
            a = -a
        out.append(a)
        pos = m.end()
    return tuple(out)


def presentation_from_json(data: dict) -> Presentation:
    algebra = data.get("algebra", ASSOC)
    fld = field_from_name(data.get("field"))
    gens = list(data["generators"])
    gidx = {g: i for i, g in enumerate(gens)}
    rels = []
    for rel in data.get("relators", []):
        terms: dict = {}
        for term in rel:
            if len(term) == 2:
                g, w = term
                c = 1
            else:
                g, w, c = term
            if g not in gidx:
                raise ValueError(f"unknown generator {g!r} in relator")
            key = (gidx[g], parse_group_word(w))
            terms[key] = terms.get(key, 0) + fld(Fraction(c) if fld == QQ else Fraction(c))
        rels.append(terms)
    return Presentation(algebra, int(data["rank"]), gens, rels, fld)


def affine_from_json(data: dict) -> AffinePresentation:
    fld = field_from_name(data.get("field"))
    r = int(data["rank"])
    matrix = [[tuple(fld(Fraction(c)) for c in e) for e in row] for row in data["matrix"]]
    ap = AffinePresentation(data.get("algebra", ASSOC), r, list(data["generators"]), matrix, fld)
    ap.check()
    return ap
