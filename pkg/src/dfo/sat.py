"""A small CDCL solver and a hash-consed Tseitin circuit builder.

Only what the bounded model finder needs: instances have a few thousand
variables at most, so clause deletion and preprocessing are left out.
"""

from __future__ import annotations

import heapq
from typing import Iterable, List, Optional

__all__ = ["Solver", "Circuit", "TRUE", "FALSE"]


def _luby(i: int) -> int:
    # i-th element (0-based) of the Luby sequence 1,1,2,1,1,2,4,...
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class Solver:
    """CDCL with two watched literals, 1UIP learning, VSIDS and phase saving.

    Literals are nonzero ints in DIMACS style.
    """

    def __init__(self):
        self.nvars = 0
        self.assign: List[int] = [0]
        self.level: List[int] = [0]
        self.reason: List[Optional[list]] = [None]
        self.activity: List[float] = [0.0]
        self.phase: List[int] = [-1]
        self.watches = {}
        self.trail: List[int] = []
        self.trail_lim: List[int] = []
        self.qhead = 0
        self.inc = 1.0
        self.heap: list = []
        self.ok = True
        self.conflicts = 0

    def new_var(self) -> int:
        self.nvars += 1
        v = self.nvars
        self.assign.append(0)
        self.level.append(0)
        self.reason.append(None)
        self.activity.append(0.0)
        self.phase.append(-1)
        self.watches[v] = []
        self.watches[-v] = []
        heapq.heappush(self.heap, (0.0, v))
        return v

    def value(self, lit: int) -> int:
        a = self.assign[abs(lit)]
        return a if lit > 0 else -a

    def add_clause(self, lits: Iterable[int]) -> bool:
        if not self.ok:
            return False
        assert not self.trail_lim, "clauses are only added at level 0"
        seen = set()
        clause = []
        for lit in lits:
            if -lit in seen:
                return True
            if lit in seen:
                continue
            val = self.value(lit)
            if val > 0:
                return True
            if val < 0:
                continue
            seen.add(lit)
            clause.append(lit)
        if not clause:
            self.ok = False
            return False
        if len(clause) == 1:
            self._enqueue(clause[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        self.watches[-clause[0]].append(clause)
        self.watches[-clause[1]].append(clause)
        return True

    def _enqueue(self, lit: int, reason):
        v = abs(lit)
        self.assign[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self):
        # watches[l] holds clauses that must be revisited once l becomes true
        assign, watches, trail = self.assign, self.watches, self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            false_lit = -p
            ws = watches[p]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                a = assign[abs(first)]
                if (a if first > 0 else -a) > 0:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lit = c[k]
                    a = assign[abs(lit)]
                    if (a if lit > 0 else -a) >= 0:
                        c[1], c[k] = lit, false_lit
                        watches[-lit].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    a = assign[abs(first)]
                    if (a if first > 0 else -a) < 0:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        return c
                    self._enqueue(first, c)
            del ws[j:]
        return None

    def _bump(self, v: int):
        self.activity[v] += self.inc
        if self.activity[v] > 1e100:
            for u in range(1, self.nvars + 1):
                self.activity[u] *= 1e-100
            self.inc *= 1e-100
        if self.assign[v] == 0:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, confl):
        seen = set()
        learnt = [0]
        counter = 0
        p = None
        idx = len(self.trail) - 1
        cur = len(self.trail_lim)
        while True:
            for lit in confl:
                if p is not None and lit == p:
                    continue
                v = abs(lit)
                if v in seen or self.level[v] == 0:
                    continue
                seen.add(v)
                self._bump(v)
                if self.level[v] >= cur:
                    counter += 1
                else:
                    learnt.append(lit)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            confl = self.reason[abs(p)]
            seen.discard(abs(p))
            counter -= 1
            if counter == 0:
                break
        learnt[0] = -p
        if len(learnt) == 1:
            back = 0
        else:
            best = max(range(1, len(learnt)), key=lambda k: self.level[abs(learnt[k])])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = self.level[abs(learnt[1])]
        return learnt, back

    def _backtrack(self, lvl: int):
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        for lit in reversed(self.trail[stop:]):
            v = abs(lit)
            self.phase[v] = 1 if lit > 0 else -1
            self.assign[v] = 0
            self.reason[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _pick(self) -> int:
        heap = self.heap
        while heap:
            _, v = heapq.heappop(heap)
            if self.assign[v] == 0:
                return v
        return 0

    def solve(self) -> bool:
        if not self.ok:
            return False
        if self._propagate() is not None:
            self.ok = False
            return False
        restart = 1
        budget = 100 * _luby(restart)
        since = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                since += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, back = self._analyze(confl)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self.watches[-learnt[0]].append(learnt)
                    self.watches[-learnt[1]].append(learnt)
                    self._enqueue(learnt[0], learnt)
                self.inc /= 0.95
                continue
            if since >= budget:
                since = 0
                restart += 1
                budget = 100 * _luby(restart)
                self._backtrack(0)
                continue
            v = self._pick()
            if v == 0:
                return True
            self.trail_lim.append(len(self.trail))
            self._enqueue(v if self.phase[v] > 0 else -v, None)

    def model_value(self, lit: int) -> bool:
        return self.value(lit) > 0


TRUE = "T"
FALSE = "F"


class Circuit:
    """Boolean gates over solver literals, flattened to CNF as they are built.

    The constants ``TRUE``/``FALSE`` are folded away; structurally equal
    gates share one output variable.
    """

    def __init__(self, solver: Optional[Solver] = None):
        self.solver = solver or Solver()
        self._gates = {}

    def var(self) -> int:
        return self.solver.new_var()

    @staticmethod
    def neg(a):
        if a == TRUE:
            return FALSE
        if a == FALSE:
            return TRUE
        return -a

    def and_(self, items) -> object:
        lits = set()
        for a in items:
            if a == FALSE:
                return FALSE
            if a == TRUE:
                continue
            if -a in lits:
                return FALSE
            lits.add(a)
        if not lits:
            return TRUE
        if len(lits) == 1:
            return next(iter(lits))
        key = tuple(sorted(lits))
        g = self._gates.get(key)
        if g is None:
            g = self.var()
            add = self.solver.add_clause
            for a in key:
                add((-g, a))
            add([g] + [-a for a in key])
            self._gates[key] = g
        return g

    def or_(self, items) -> object:
        return self.neg(self.and_(self.neg(a) for a in items))

    def implies(self, a, b):
        return self.or_((self.neg(a), b))

    def assert_(self, a) -> None:
        if a == TRUE:
            return
        if a == FALSE:
            self.solver.add_clause(())
            return
        self.solver.add_clause((a,))

    def value(self, a) -> bool:
        if a == TRUE:
            return True
        if a == FALSE:
            return False
        return self.solver.model_value(a)
