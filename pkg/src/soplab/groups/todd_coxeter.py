"""Coset enumeration: HLT strategy with lookahead.

Columns are ``2*i`` for generator ``i`` and ``2*i + 1`` for its inverse, so
the inverse column is ``col ^ 1``.  Cosets are numbered lowest-unused: the
numbers of cosets killed by coincidences are recycled through a min-heap.
The order in which cosets are scanned is the order of definition, kept in a
doubly linked list, so recycling a number never hides a coset from the scan.
Runs are fully deterministic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .words import Presentation, Word

UNDEF = -1


@dataclass(frozen=True)
class Closed:
    index: int

    def __str__(self):
        return f"Closed({self.index})"


@dataclass(frozen=True)
class Overflow:
    limit: int

    def __str__(self):
        return f"Overflow({self.limit})"


@dataclass
class CosetTable:
    """Result of an enumeration.

    ``rows[c][col]`` is the coset reached from coset ``c`` (numbered from 0,
    coset 0 is the subgroup itself) along column ``col``.  Only filled in
    when the enumeration closed; the table is then standardized.
    """

    generators: list
    status: object
    rows: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def closed(self) -> bool:
        return isinstance(self.status, Closed)

    @property
    def index(self) -> Optional[int]:
        return self.status.index if self.closed else None

    def column(self, gen: str, exp: int = 1) -> int:
        return 2 * self.generators.index(gen) + (0 if exp == 1 else 1)

    def trace(self, coset: int, word: Word) -> int:
        for g, e in word:
            coset = self.rows[coset][self.column(g, e)]
            if coset == UNDEF:
                raise ValueError("trace hit an undefined entry")
        return coset


def _columns(word: Word, gens: Sequence[str]) -> list[int]:
    pos = {g: i for i, g in enumerate(gens)}
    return [2 * pos[g] + (0 if e == 1 else 1) for g, e in word]


class _Enumerator:
    def __init__(self, pres: Presentation, subgroup: Sequence[Word], max_cosets: int):
        self.gens = pres.generators
        self.ncols = 2 * len(self.gens)
        self.rels = [_columns(r, self.gens) for r in pres.relators]
        # cyclic rotations are not needed by HLT, but one copy of each relator is
        self.sub = [_columns(w, self.gens) for w in subgroup]
        self.max = max_cosets
        self.table = [[UNDEF] * 64 for _ in range(self.ncols)]
        self.cap = 64
        self.parent = [0] * 64  # union-find; parent[c] == c for live cosets
        self.live = [False] * 64
        self.nxt = [UNDEF] * 64
        self.prv = [UNDEF] * 64
        self.tail = 0
        self.free: list[int] = []
        self.top = 1  # first never-used number
        self.n_live = 1
        self.total_defined = 1
        self.coincidences = 0
        self.lookaheads = 0
        self.live[0] = True

    # -- storage --------------------------------------------------------------
    def _grow(self):
        extra = self.cap
        for col in self.table:
            col.extend([UNDEF] * extra)
        self.parent.extend([0] * extra)
        self.live.extend([False] * extra)
        self.nxt.extend([UNDEF] * extra)
        self.prv.extend([UNDEF] * extra)
        self.cap += extra

    def _new(self) -> int:
        if self.free:
            c = heapq.heappop(self.free)
        else:
            c = self.top
            self.top += 1
            if c >= self.cap:
                self._grow()
        for col in self.table:
            col[c] = UNDEF
        self.parent[c] = c
        self.live[c] = True
        self.prv[c] = self.tail
        self.nxt[c] = UNDEF
        self.nxt[self.tail] = c
        self.tail = c
        self.n_live += 1
        self.total_defined += 1
        return c

    def define(self, c: int, col: int) -> int:
        d = self._new()
        self.table[col][c] = d
        self.table[col ^ 1][d] = c
        return d

    # -- coincidences ---------------------------------------------------------
    def _rep(self, c: int) -> int:
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def _merge(self, k: int, l: int, queue: list):
        k, l = self._rep(k), self._rep(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        self.parent[l] = k
        queue.append(l)

    def _unlink(self, c: int):
        p, n = self.prv[c], self.nxt[c]
        self.nxt[p] = n
        if n != UNDEF:
            self.prv[n] = p
        else:
            self.tail = p
        # keep nxt[c] as a forward pointer so a scan sitting on c can move on

    def coincidence(self, a: int, b: int):
        self.coincidences += 1
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        t = self.table
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = t[x][e]
                if f == UNDEF:
                    continue
                if t[x ^ 1][f] == e:
                    t[x ^ 1][f] = UNDEF
                e1, f1 = self._rep(e), self._rep(f)
                if t[x][e1] != UNDEF:
                    self._merge(f1, t[x][e1], queue)
                elif t[x ^ 1][f1] != UNDEF:
                    self._merge(e1, t[x ^ 1][f1], queue)
                else:
                    t[x][e1] = f1
                    t[x ^ 1][f1] = e1
        for e in queue:
            self.live[e] = False
            self._unlink(e)
            self.n_live -= 1
        # numbers are recycled only after the scan pointer has moved past them
        self._dead_pending.extend(queue)

    def _release_dead(self):
        for e in self._dead_pending:
            heapq.heappush(self.free, e)
        self._dead_pending.clear()

    def _next_live(self, c: int) -> int:
        """Successor of c in scan order, skipping cosets that died."""
        c = self.nxt[c]
        while c != UNDEF and not self.live[c]:
            c = self.nxt[c]
        return c

    # -- scanning -------------------------------------------------------------
    def scan_and_fill(self, alpha: int, rel: list[int]) -> bool:
        """Returns False when the coset limit stops a needed definition."""
        t = self.table
        n = len(rel)
        f, i = alpha, 0
        b, j = alpha, n - 1
        while True:
            while i <= j and t[rel[i]][f] != UNDEF:
                f = t[rel[i]][f]
                i += 1
            if i > j:
                if f != alpha:
                    self.coincidence(f, alpha)
                return True
            while j >= i and t[rel[j] ^ 1][b] != UNDEF:
                b = t[rel[j] ^ 1][b]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return True
            if i == j:
                t[rel[i]][f] = b
                t[rel[i] ^ 1][b] = f
                return True
            if self.n_live >= self.max:
                return False
            self.define(f, rel[i])

    def scan(self, alpha: int, rel: list[int]):
        """Scan without defining; records a deduction or coincidence if one appears."""
        t = self.table
        n = len(rel)
        f, i = alpha, 0
        while i < n and t[rel[i]][f] != UNDEF:
            f = t[rel[i]][f]
            i += 1
        if i == n:
            if f != alpha:
                self.coincidence(f, alpha)
            return
        b, j = alpha, n - 1
        while j >= i and t[rel[j] ^ 1][b] != UNDEF:
            b = t[rel[j] ^ 1][b]
            j -= 1
        if j < i:
            self.coincidence(f, b)
        elif i == j:
            t[rel[i]][f] = b
            t[rel[i] ^ 1][b] = f

    def lookahead(self):
        self.lookaheads += 1
        c = 0
        while c != UNDEF:
            for rel in self.rels:
                self.scan(c, rel)
                if not self.live[c]:
                    break
            c = self._next_live(c)
        self._release_dead()

    def run(self) -> bool:
        self._dead_pending: list[int] = []
        for w in self.sub:
            if w and not self._fill_with_retry(0, w):
                return False
        alpha = 0
        while alpha != UNDEF:
            for rel in self.rels:
                if not self._fill_with_retry(alpha, rel):
                    return False
                if not self.live[alpha]:
                    break
            if self.live[alpha]:
                for x in range(self.ncols):
                    if self.table[x][alpha] == UNDEF:
                        if self.n_live >= self.max:
                            self.lookahead()
                            if not self.live[alpha] or self.table[x][alpha] != UNDEF:
                                continue
                            if self.n_live >= self.max:
                                return False
                        self.define(alpha, x)
            alpha = self._next_live(alpha)
            self._release_dead()
        return True

    def _fill_with_retry(self, alpha: int, rel: list[int]) -> bool:
        if self.scan_and_fill(alpha, rel):
            return True
        self.lookahead()
        if not self.live[alpha]:
            return True
        return self.scan_and_fill(alpha, rel)

    def standardized_rows(self) -> list[list[int]]:
        """Renumber live cosets 0..N-1 in breadth-first order from coset 0."""
        t = self.table
        order = {0: 0}
        queue = [0]
        for c in queue:
            for x in range(self.ncols):
                d = self._rep(t[x][c])
                if d not in order:
                    order[d] = len(queue)
                    queue.append(d)
        return [[order[self._rep(t[x][c])] for x in range(self.ncols)] for c in queue]


def todd_coxeter(pres: Presentation, subgroup_gens: Sequence[Word] = (), max_cosets: int = 10**6) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by ``subgroup_gens``.

    Returns a table with status ``Closed(index)`` (soundness re-checked by
    :func:`verify_table`) or ``Overflow(max_cosets)`` when the live-coset
    bound is reached and lookahead frees nothing.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be at least 1")
    subgroup_gens = [w if isinstance(w, Word) else Word(w) for w in subgroup_gens]
    en = _Enumerator(pres, subgroup_gens, max_cosets)
    done = en.run()
    stats = {"total_defined": en.total_defined, "coincidences": en.coincidences,
             "lookaheads": en.lookaheads, "max_cosets": max_cosets}
    if not done:
        return CosetTable(list(pres.generators), Overflow(max_cosets), [], stats)
    rows = en.standardized_rows()
    table = CosetTable(list(pres.generators), Closed(len(rows)), rows, stats)
    problems = verify_table(table, pres, subgroup_gens)
    if problems:
        raise AssertionError(f"enumeration produced an unsound table: {problems[:3]}")
    return table


def verify_table(table: CosetTable, pres: Presentation, subgroup_gens: Sequence[Word] = ()) -> list[str]:
    """Independent soundness check of a closed table; returns the list of problems."""
    problems = []
    rows = table.rows
    n = len(rows)
    ncols = 2 * len(table.generators)
    for c, row in enumerate(rows):
        if len(row) != ncols:
            problems.append(f"coset {c}: wrong row length")
            continue
        for x, d in enumerate(row):
            if not 0 <= d < n:
                problems.append(f"coset {c}: entry {x} undefined")
            elif rows[d][x ^ 1] != c:
                problems.append(f"coset {c}: column {x} not inverted at {d}")
    if problems:
        return problems
    for c in range(n):
        for r in pres.relators:
            if table.trace(c, r) != c:
                problems.append(f"relator {r.to_text()} does not close at coset {c}")
    for w in subgroup_gens:
        if table.trace(0, w) != 0:
            problems.append(f"subgroup generator {w.to_text()} moves coset 0")
    return problems
