"""Random instance builders shared by the property tests and the acceptance run."""

import random
from fractions import Fraction

from schreier import acts, ncalg, presentations
from schreier.fields import QQ


def random_act(rng: random.Random, max_letters=4, max_weight=3, max_basis=2) -> acts.FreeAct:
    n = rng.randint(1, max_letters)
    letters = "xyzw"[:n]
    alphabet = acts.WeightedAlphabet(letters, [rng.randint(1, max_weight) for _ in letters])
    m = rng.randint(1, max_basis)
    basis = acts.ActBasis("abc"[:m], [rng.randint(0, 1) for _ in range(m)])
    return acts.FreeAct(alphabet, basis)


def random_word_of_degree(rng, act, base, max_degree):
    """A forest vertex over ``base`` of degree at most ``max_degree``."""
    word = []
    d = act.basis.deg[base]
    while True:
        choices = [x for x, dx in enumerate(act.alphabet.deg) if d + dx <= max_degree]
        if not choices or rng.random() < 0.25:
            return acts.ActWord(base, tuple(word))
        x = rng.choice(choices)
        word.append(x)
        d += act.alphabet.deg[x]


def random_subact(rng, act, max_gens=4, max_degree=5) -> acts.Subact:
    gens = [random_word_of_degree(rng, act, rng.randrange(act.basis.rank), max_degree) for _ in range(rng.randint(1, max_gens))]
    return acts.Subact(act, gens)


def random_cofinite_subact(rng, act, depth=3) -> acts.Subact:
    """Cut every branch of the forest somewhere below ``depth``: the complement is finite."""
    gens = []

    def grow(base, word, level):
        if level >= depth or rng.random() < 0.45:
            gens.append(acts.ActWord(base, word))
            return
        for x in range(act.alphabet.rank):
            grow(base, word + (x,), level + 1)

    for b in range(act.basis.rank):
        grow(b, (), 0)
    return acts.Subact(act, gens)


def random_module_gens(rng, s, r, max_gens=4, max_degree=4, max_terms=3, fld=QQ):
    F = ncalg.FreeModule(s, r, fld)
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            w = tuple(rng.randint(1, r) for _ in range(rng.randint(0, max_degree)))
            terms[(rng.randint(1, s), w)] = rng.choice([1, -1, 2, Fraction(1, 2), 3])
        gens.append(F.element(terms))
    return F, gens


def random_presentation(rng, algebra="assoc", max_rank=3, max_p=3, max_q=3, max_len=3):
    r = rng.randint(1, max_rank)
    p = rng.randint(1, max_p)
    q = rng.randint(0, max_q)
    rels = []
    for _ in range(q):
        rel = {}
        for _ in range(rng.randint(1, 3)):
            letters = [rng.randint(1, r) for _ in range(rng.randint(0, max_len))]
            if algebra == "group":
                letters = [a if rng.random() < 0.6 else -a for a in letters]
            rel[(rng.randrange(p), tuple(letters))] = rng.choice([1, -1, 2])
        rels.append(rel)
    return presentations.Presentation(algebra, r, [f"u{i + 1}" for i in range(p)], rels)


def random_affine(rng, fld=QQ, max_q=6):
    r = rng.randint(2, 3)
    q = rng.randint(0, max_q)
    p = q + rng.randint(1, 3)
    vals = [0, 0, 0, 1, -1, 2, Fraction(1, 2)] if fld == QQ else [0, 0, 0, 1, 2, 3]
    matrix = [[tuple(fld(rng.choice(vals)) for _ in range(r + 1)) for _ in range(p)] for _ in range(q)]
    return presentations.AffinePresentation(rng.choice(["assoc", "group"]), r, [f"u{i + 1}" for i in range(p)], matrix, fld)
