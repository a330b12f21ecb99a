"""Bounded backward proof search over the calculus, plus the deadlock
reproduction for the distributivity sequent.

Search is depth-first iterative deepening over backward rule applications
in the cut-free fragment.  Loop pruning uses a per-branch ancestor set
(complete: any proof revisiting a sequent on one branch has a shorter one
that does not) plus a cross-branch failure memo recorded only for subtrees
whose failure did not depend on ancestor pruning.  Contraction and the
growing direction of the circled-S rules are the only sources of
non-termination and are capped or disabled.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from . import rules as R
from .kernel import Derivation, check
from .syntax import (
    Cap, CapOp, Cup, CupOp, Dot, DotOp, MtType, Sequent, SLeaf, Structure,
    print_sequent, struct_args, struct_sort, term_args,
)


class LoopKey(Enum):
    EXACT = "exact"
    MODULO_AE = "modulo-ae"


# Order used when proving: residuation, re-association and the unit rules
# are omitted because no translated goal needs them and their invertible
# orbits blow up the state space; the full order below restores them for
# deadlock analysis, where residuation dead ends belong in the frontier.
DEFAULT_RULE_ORDER: tuple[str, ...] = (
    "Id", "Top_right", "Bot_left",
    "Cap_left", "Cup_right", "WBox_left", "WDia_left", "BDia_left",
    "BBox_left", "Top_left", "Bot_right",
    "D_PL_left", "D_PL_right",
    "WBox_right", "WDia_right", "BDia_right", "BBox_right",
    "E_left", "E_right", "W_left", "W_right",
    "Cap_right", "Cup_left",
    "C_left", "C_right", "IW",
)

FULL_RULE_ORDER: tuple[str, ...] = DEFAULT_RULE_ORDER + (
    "A_left", "A_right", "D_P_left", "D_P_right",
    "SCirc_left", "SCirc_right",
)


_FAMILIES = {
    "D_P_left": "Residuation", "D_P_right": "Residuation",
    "E_left": "Exchange", "E_right": "Exchange",
    "W_left": "Weakening", "W_right": "Weakening", "IW": "Weakening",
    "D_PL_left": "Display", "D_PL_right": "Display",
    "C_left": "Contraction", "C_right": "Contraction",
    "A_left": "Associativity", "A_right": "Associativity",
    "SCirc_left": "Unit", "SCirc_right": "Unit",
}


def rule_family(name: str) -> str:
    return _FAMILIES.get(name, "Operational")


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int = 20
    max_nodes: int = 10**6
    rule_order: tuple[str, ...] = DEFAULT_RULE_ORDER
    loop_key: LoopKey = LoopKey.MODULO_AE
    contraction_cap: int = 2
    allow_cut: bool = False          # analytic cut over goal subterms
    allow_unit_growth: bool = False  # growing direction of the S0 rules
    semantic_prune: bool = False     # prune subgoals falsified on chain2/chain3


@dataclass(frozen=True)
class DeadEnd:
    sequent: Sequent
    last_rule: str
    reason: str

    @property
    def family(self) -> str:
        return rule_family(self.last_rule) if self.last_rule else "Start"


@dataclass
class Proved:
    derivation: Derivation


@dataclass
class Exhausted:
    deadends: list[DeadEnd]
    nodes: int
    depth: int


@dataclass
class ResourceOut:
    nodes: int


SearchOutcome = Proved | Exhausted | ResourceOut


def _ae_key(s: Structure):
    """Structure key normalising Dot chains modulo assoc/comm and sorting
    cap/cup arguments; used for visited-set keys only."""

    def term_key(t):
        kids = tuple(term_key(a) for a in term_args(t))
        if isinstance(t, (Cap, Cup, CapOp, CupOp)):
            kids = tuple(sorted(kids))
        return (type(t).__name__, getattr(t, "name", ""), kids)

    def go(x: Structure):
        if isinstance(x, SLeaf):
            return ("leaf", term_key(x.term))
        if isinstance(x, (Dot, DotOp)):
            parts = []

            def flat(y):
                if type(y) is type(x):
                    flat(y.left), flat(y.right)
                else:
                    parts.append(go(y))

            flat(x)
            return (type(x).__name__, tuple(sorted(parts)))
        return (type(x).__name__,) + tuple(go(a) for a in struct_args(x))

    return go(s)


def sequent_key(s: Sequent, loop_key: LoopKey):
    if loop_key is LoopKey.EXACT:
        return s
    return (_ae_key(s.left), _ae_key(s.right))


class _Searcher:
    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        self.nodes = 0
        self.memo: dict = {}  # (key, ccap) -> max remaining depth failed
        self.deadends: dict = {}  # key -> DeadEnd
        self.moves_cache: dict = {}
        self.valid_cache: dict = {}
        if cfg.semantic_prune:
            from .semantics import chain, heterogenize
            self._prune_algebras = [heterogenize(chain(2)), heterogenize(chain(3))]
        else:
            self._prune_algebras = []

    def _semantically_possible(self, goal: Sequent) -> bool:
        cached = self.valid_cache.get(goal)
        if cached is None:
            from .semantics import sequent_valid
            cached = all(sequent_valid(goal, h) for h in self._prune_algebras)
            self.valid_cache[goal] = cached
        return cached

    # -- move generation ----------------------------------------------------

    def moves(self, goal: Sequent) -> list[tuple[str, bool, tuple[Sequent, ...]]]:
        """Deterministic list of (rule, backward, premises) applications."""
        key = goal
        cached = self.moves_cache.get(key)
        if cached is not None:
            return cached
        out: list[tuple[str, bool, tuple[Sequent, ...]]] = []
        for name in self.cfg.rule_order:
            schema = R.rule_named(name)
            if schema.group is R.RuleGroup.CUT and not self.cfg.allow_cut:
                continue
            directions = [False]
            if schema.invertible:
                grows = name.startswith("SCirc")
                if not grows or self.cfg.allow_unit_growth:
                    directions.append(True)
            for backward in directions:
                sch = R.inverse_schema(schema) if backward else schema
                for sub in R.match(sch, goal):
                    if sch.cut_var is not None:
                        out.extend(self._cut_moves(name, sch, sub, goal))
                        continue
                    try:
                        prems, _ = R.instantiate(sch, sub)
                    except Exception:  # noqa: BLE001
                        continue
                    out.append((name, backward, tuple(prems)))
        self.moves_cache[key] = out
        return out

    def _cut_moves(self, name, schema, sub, goal):
        from .syntax import struct_terms, subterms

        want = MtType.L if name == "Cut_L" else None
        pool = []
        for t in struct_terms(goal.left):
            pool.extend(subterms(t))
        for t in struct_terms(goal.right):
            pool.extend(subterms(t))
        seen = set()
        out = []
        for t in pool:
            if t in seen:
                continue
            seen.add(t)
            from .syntax import term_sort
            if want is not None and term_sort(t) is not want:
                continue
            if want is None and term_sort(t) is MtType.L:
                continue
            b = dict(sub.bindings)
            b[schema.cut_var] = t
            try:
                prems, _ = R.instantiate(schema, R.Substitution(b, sub.uniform))
            except Exception:  # noqa: BLE001
                continue
            out.append((name, False, tuple(prems)))
        return out

    # -- the DFS ------------------------------------------------------------

    def prove(self, goal: Sequent, depth: int, ccap: int,
              last_rule: str) -> Derivation | None:
        """Depth-bounded DFS; failures are absolute relative to the bound.

        There is no ancestor pruning: loops simply burn depth, and the
        (key, contraction budget) -> depth failure memo is then sound, so
        each state is re-explored at most once per remaining-depth value.
        """
        self.nodes += 1
        if self.nodes > self.cfg.max_nodes:
            raise _OutOfNodes
        skey = sequent_key(goal, self.cfg.loop_key)
        # a failure recorded with a larger contraction budget covers this one
        for cc in range(ccap, self.cfg.contraction_cap + 1):
            if self.memo.get((skey, cc), -1) >= depth:
                return None
        if self._prune_algebras and not self._semantically_possible(goal):
            return None  # sound rules cannot prove an invalid sequent
        moves = self.moves(goal)
        available = 0
        for name, backward, prems in moves:
            if not prems:
                return Derivation(name, goal, (), backward)
            cc = ccap - 1 if name in ("C_left", "C_right") else ccap
            if cc < 0:
                continue
            available += 1
            if depth <= 0:
                continue
            children = []
            ok = True
            for p in prems:
                child = self.prove(p, depth - 1, cc, name)
                if child is None:
                    ok = False
                    break
                children.append(child)
            if ok:
                return Derivation(name, goal, tuple(children), backward)
        if available == 0 and skey not in self.deadends:
            reason = ("no rule applies" if not moves
                      else "remaining moves need contraction budget")
            self.deadends[skey] = DeadEnd(goal, last_rule, reason)
        key = (skey, ccap)
        if depth > self.memo.get(key, -1):
            self.memo[key] = depth
        return None


class _OutOfNodes(Exception):
    pass


def backward_search(goal: Sequent, cfg: SearchConfig | None = None) -> SearchOutcome:
    cfg = cfg or SearchConfig()
    searcher = _Searcher(cfg)
    try:
        for depth in range(1, cfg.max_depth + 1):
            searcher.deadends.clear()
            d = searcher.prove(goal, depth, cfg.contraction_cap, "")
            if d is not None:
                rep = check(d)
                assert rep.ok, f"search produced an invalid proof: {rep.failures[:1]}"
                return Proved(d)
    except _OutOfNodes:
        return ResourceOut(searcher.nodes)
    return Exhausted(sorted(searcher.deadends.values(),
                            key=lambda de: print_sequent(de.sequent)),
                     searcher.nodes, cfg.max_depth)


@dataclass
class DeadlockReport:
    goal: Sequent
    outcome: SearchOutcome
    families: dict[str, list[DeadEnd]] = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = []
        for family in sorted(self.families):
            for de in self.families[family]:
                out.append(f"DEADEND {print_sequent(de.sequent)} {family}")
        return out


def deadlock_report(goal: Sequent, cfg: SearchConfig | None = None) -> DeadlockReport:
    """Replays an exhausted search and groups dead ends by the family of
    the last structural move; empty for proved goals."""
    cfg = cfg or SearchConfig(rule_order=FULL_RULE_ORDER)
    outcome = backward_search(goal, cfg)
    report = DeadlockReport(goal, outcome)
    if isinstance(outcome, Exhausted):
        for de in outcome.deadends:
            report.families.setdefault(de.family, []).append(de)
    return report


def pool_max_from_env(default: int = 5) -> int:
    try:
        return int(os.environ.get("DLL_POOL_MAX", default))
    except ValueError:
        return default
