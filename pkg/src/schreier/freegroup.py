"""Reduced words in a free group and folded subgroup graphs.

A symbol is a nonzero integer: ``i`` stands for the basis letter ``a_i`` and
``-i`` for its inverse.  In text form letters are ``x, y, z, a, b, ...`` and an
uppercase letter is the inverse, so ``"xyX"`` is ``x y x^-1``.

The fixed symbol order used for every tie-break is ``a_1, ..., a_r, a_1^-1, ...,
a_r^-1``.
"""

from __future__ import annotations

import random
from collections import deque
from typing import Iterable, Sequence

LETTERS = "xyzabcdefghijklmnopqrstuvw"

Word = tuple[int, ...]


def symbols(rank: int) -> list[int]:
    return list(range(1, rank + 1)) + [-i for i in range(1, rank + 1)]


def symbol_key(a: int, rank: int) -> int:
    return a - 1 if a > 0 else rank - a - 1


def reduce_word(w: Iterable[int]) -> Word:
    out: list[int] = []
    for a in w:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def inverse(w: Sequence[int]) -> Word:
    return tuple(-a for a in reversed(w))


def multiply(*ws: Sequence[int]) -> Word:
    return reduce_word(a for w in ws for a in w)


def parse_word(s: str, rank: int) -> Word:
    letters = LETTERS[:rank]
    out = []
    for pos, ch in enumerate(s):
        if ch in letters:
            out.append(letters.index(ch) + 1)
        elif ch.lower() in letters and ch.isupper():
            out.append(-(letters.index(ch.lower()) + 1))
        elif ch in " .*":
            continue
        else:
            raise ValueError(f"bad letter {ch!r} at position {pos} in word {s!r} (rank {rank})")
    return tuple(out)


def format_word(w: Sequence[int]) -> str:
    if not w:
        return "1"
    return "".join(LETTERS[a - 1] if a > 0 else LETTERS[-a - 1].upper() for a in w)


def format_symbol(a: int) -> str:
    return format_word((a,))


class CoreGraph:
    """Folded, connected graph with basepoint ``0``; loops at ``0`` read the subgroup.

    ``edges[(v, a)]`` is the target of the ``a``-edge leaving ``v``; the
    inverse edge is always present as ``edges[(target, -a)] == v``.
    """

    def __init__(self, rank: int, num_vertices: int, edges: dict[tuple[int, int], int]):
        self.rank = rank
        self.num_vertices = num_vertices
        self.edges = dict(edges)
        self.base = 0

    def target(self, v: int, a: int) -> int | None:
        return self.edges.get((v, a))

    def is_complete(self) -> bool:
        return len(self.edges) == 2 * self.rank * self.num_vertices

    def trace(self, w: Sequence[int]) -> int | None:
        v = self.base
        for a in w:
            v = self.edges.get((v, a))
            if v is None:
                return None
        return v

    def membership(self, w: Sequence[int]) -> bool:
        return self.trace(reduce_word(w)) == self.base

    def check(self) -> None:
        for (v, a), u in self.edges.items():
            if self.edges.get((u, -a)) != v:
                raise AssertionError(f"edge {(v, a)} -> {u} lacks its inverse")
        seen = {self.base}
        todo = [self.base]
        while todo:
            v = todo.pop()
            for a in symbols(self.rank):
                u = self.edges.get((v, a))
                if u is not None and u not in seen:
                    seen.add(u)
                    todo.append(u)
        if len(seen) != self.num_vertices:
            raise AssertionError("core graph is not connected")

    def to_dot(self, name: str = "core") -> str:
        lines = [f"digraph {name} {{", '  0 [shape=doublecircle];']
        for (v, a), u in sorted(self.edges.items()):
            if a > 0:
                lines.append(f'  {v} -> {u} [label="{format_symbol(a)}"];')
        lines.append("}")
        return "\n".join(lines)

    def __repr__(self):
        return f"CoreGraph(rank={self.rank}, vertices={self.num_vertices}, edges={len(self.edges) // 2})"


def _canonical(rank: int, base: int, adj: dict[int, dict[int, int]]) -> CoreGraph:
    order = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for a in symbols(rank):
            u = adj[v].get(a)
            if u is not None and u not in order:
                order[u] = len(order)
                queue.append(u)
    edges = {}
    for v, i in order.items():
        for a, u in adj[v].items():
            edges[(i, a)] = order[u]
    return CoreGraph(rank, len(order), edges)


def fold(generators: Iterable[Sequence[int]], rank: int) -> CoreGraph:
    """Stallings folding of the bouquet of the given words.

    Vertices are renumbered breadth-first from the basepoint in symbol order,
    so equal subgroups presented by the same words give identical graphs.
    """
    parent: list[int] = []
    adj: list[dict[int, int]] = []

    def new_vertex() -> int:
        parent.append(len(parent))
        adj.append({})
        return len(parent) - 1

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    pending: list[tuple[int, int, int]] = []

    def attach(u: int, a: int, v: int) -> None:
        u, v = find(u), find(v)
        t = adj[u].get(a)
        if t is None:
            adj[u][a] = v
        else:
            merge(t, v)
        s = adj[find(v)].get(-a)
        u = find(u)
        if s is None:
            adj[find(v)][-a] = u
        else:
            merge(s, u)

    def merge(x: int, y: int) -> None:
        x, y = find(x), find(y)
        if x == y:
            return
        if y < x:
            x, y = y, x
        parent[y] = x
        moved = adj[y]
        adj[y] = {}
        for a, t in moved.items():
            pending.append((x, a, t))

    base = new_vertex()
    for w in generators:
        w = reduce_word(w)
        if any(not 1 <= abs(a) <= rank for a in w):
            raise ValueError(f"word {w} uses symbols outside rank {rank}")
        if not w:
            continue
        cur = base
        for i, a in enumerate(w):
            nxt = base if i == len(w) - 1 else new_vertex()
            pending.append((cur, a, nxt))
            cur = nxt
        while pending:
            attach(*pending.pop())
    while pending:
        attach(*pending.pop())

    roots = {find(v) for v in range(len(parent))}
    resolved = {v: {a: find(t) for a, t in adj[v].items()} for v in roots}
    return _canonical(rank, find(base), resolved)


def subgroup_from_json(data: dict) -> CoreGraph:
    rank = int(data["rank"])
    if rank < 1:
        raise ValueError("rank must be >= 1")
    gens = [parse_word(s, rank) for s in data.get("generators", [])]
    return fold(gens, rank)


def from_permutations(perms: Sequence[Sequence[int]]) -> CoreGraph:
    """Coset graph of the stabilizer of point ``0`` in a transitive action.

    ``perms[i][p]`` is the image of point ``p`` under ``a_{i+1}``.
    """
    rank = len(perms)
    n = len(perms[0])
    adj = {p: {} for p in range(n)}
    for i, perm in enumerate(perms):
        for p, q in enumerate(perm):
            adj[p][i + 1] = q
            adj[q][-(i + 1)] = p
    g = _canonical(rank, 0, adj)
    if g.num_vertices != n:
        raise ValueError("action is not transitive")
    return g


def enumerate_subgroups(rank: int, max_index: int) -> list[CoreGraph]:
    """Every subgroup of index ``<= max_index`` in ``F_rank``, each exactly once.

    Low-index search over standardized coset tables: entries are filled in
    row-major symbol order and a new coset always receives the next number,
    so each conjugacy-at-the-basepoint class of transitive action appears once.
    """
    if max_index < 1:
        return []
    syms = symbols(rank)
    out: list[CoreGraph] = []
    table: list[dict[int, int]] = [{}]

    def first_gap():
        for v in range(len(table)):
            for a in syms:
                if a not in table[v]:
                    return v, a
        return None

    def search():
        gap = first_gap()
        if gap is None:
            edges = {(v, a): u for v, row in enumerate(table) for a, u in row.items()}
            out.append(CoreGraph(rank, len(table), edges))
            return
        v, a = gap
        for u in range(len(table)):
            if -a not in table[u]:
                table[v][a] = u
                table[u][-a] = v
                search()
                del table[v][a]
                del table[u][-a]
        if len(table) < max_index:
            table.append({})
            u = len(table) - 1
            table[v][a] = u
            table[u][-a] = v
            search()
            table.pop()
            del table[v][a]

    search()
    return out


def random_reduced_word(rng: random.Random, rank: int, length: int) -> Word:
    syms = symbols(rank)
    w: list[int] = []
    while len(w) < length:
        a = rng.choice(syms)
        if w and w[-1] == -a:
            continue
        w.append(a)
    return tuple(w)


def random_subgroup(rng: random.Random, rank: int, max_gens: int = 3, max_len: int = 6) -> tuple[list[Word], CoreGraph]:
    gens = [random_reduced_word(rng, rank, rng.randint(1, max_len)) for _ in range(rng.randint(1, max_gens))]
    return gens, fold(gens, rank)
