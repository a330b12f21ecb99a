"""Principal-cut reductions and an iterated cut-elimination driver.

Principal cuts are rewritten by the shape-directed figures (atoms and
constants vanish, binary cuts split into two smaller ones wired through
residuation and exchange, unary multi-type cuts become one smaller cut
wired through the matching display postulate).  Parametric cuts are pushed
upward by substituting the parametric congruence class of the cut formula
throughout the offending premise: every rule of the calculus is closed
under substitution of parametric structure occurrences, and the class is
computed structurally from the rule schemas, so the rewrite re-cuts only
at the positions where the formula was introduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import rules as R
from .kernel import (
    Derivation, HYP, apply_rule, display_at, hyp, invert_display,
    replace_node,
)
from .syntax import (
    BBox, BDia, Cap, CapOp, Cup, CupOp, MtTerm, MtType, Path, PathError,
    SLeaf, Sequent, TmAtom, TmBot, TmTop, WBox, WDia, node_at, replace_at,
    term_args, term_sort,
)


class NotPrincipal(Exception):
    pass


class CutClass(Enum):
    PRINCIPAL = "Principal"
    LEFT_PARAMETRIC = "LeftParametric"
    RIGHT_PARAMETRIC = "RightParametric"


@dataclass(frozen=True)
class CutSite:
    path: tuple[int, ...]
    classification: CutClass
    formula: MtTerm


@dataclass
class BudgetExceeded(Exception):
    partial: Derivation
    steps: int

    def __str__(self) -> str:
        return f"cut elimination exceeded its budget after {self.steps} steps"


# rule that introduces each head constructor as the whole succedent /
# precedent of its conclusion
_INTRO_RIGHT = {
    TmAtom: "Id", TmTop: "Top_right", TmBot: "Bot_right",
    Cap: "Cap_right", CapOp: "Cap_right", Cup: "Cup_right", CupOp: "Cup_right",
    WBox: "WBox_left", WDia: "WDia_right", BDia: "BDia_right", BBox: "BBox_left",
}
_INTRO_LEFT = {
    TmAtom: "Id", TmTop: "Top_left", TmBot: "Bot_left",
    Cap: "Cap_left", CapOp: "Cap_left", Cup: "Cup_left", CupOp: "Cup_left",
    WBox: "WBox_right", WDia: "WDia_left", BDia: "BDia_left", BBox: "BBox_right",
}


def cut_formula(d: Derivation) -> MtTerm:
    if d.rule not in ("Cut_L", "Cut_P"):
        raise NotPrincipal(f"not a cut node: {d.rule}")
    left = d.premises[0].conclusion.right
    if not isinstance(left, SLeaf):
        raise NotPrincipal("malformed cut: left premise succedent not a term")
    return left.term


def _left_principal(d: Derivation, t: MtTerm) -> bool:
    l = d.premises[0]
    return l.rule == _INTRO_RIGHT[type(t)] and not l.backward


def _right_principal(d: Derivation, t: MtTerm) -> bool:
    r = d.premises[1]
    return r.rule == _INTRO_LEFT[type(t)] and not r.backward


def classify_cut(d: Derivation, path: tuple[int, ...]) -> CutSite:
    node = d.at(path)
    t = cut_formula(node)
    if not _left_principal(node, t):
        cls = CutClass.LEFT_PARAMETRIC
    elif not _right_principal(node, t):
        cls = CutClass.RIGHT_PARAMETRIC
    else:
        cls = CutClass.PRINCIPAL
    return CutSite(path, cls, t)


def cut_sites(d: Derivation) -> list[tuple[tuple[int, ...], Derivation]]:
    return [(p, n) for p, n in d.nodes() if n.rule in ("Cut_L", "Cut_P")]


def term_size(t: MtTerm) -> int:
    return 1 + sum(term_size(a) for a in term_args(t))


def _mk_cut(left: Derivation, right: Derivation) -> Derivation:
    t = left.conclusion.right
    assert isinstance(t, SLeaf)
    name = "Cut_L" if term_sort(t.term) is MtType.L else "Cut_P"
    return apply_rule(name, left, right)


# ---------------------------------------------------------------------------
# Principal figures


def _reduce_principal_node(node: Derivation) -> Derivation:
    t = cut_formula(node)
    if not (_left_principal(node, t) and _right_principal(node, t)):
        raise NotPrincipal(f"cut on {t} is not principal on both sides")
    l, r = node.premises
    match t:
        case TmAtom(_):
            return l  # Id against Id
        case TmTop():
            return r.premises[0]  # I |- X stands on its own
        case TmBot():
            return l.premises[0]  # X |- I stands on its own
        case Cap(_, _) | CapOp(_, _):
            p1, p2 = l.premises  # S |- s, T |- t
            p3 = r.premises[0]   # s ; t |- U
            d = apply_rule("D_P_left", p3)
            d = apply_rule("Cut_P", p2, d)
            d = apply_rule("D_P_left", d, backward=True)
            d = apply_rule("E_left", d)
            d = apply_rule("D_P_left", d)
            d = apply_rule("Cut_P", p1, d)
            d = apply_rule("D_P_left", d, backward=True)
            d = apply_rule("E_left", d)
            return d
        case Cup(_, _) | CupOp(_, _):
            p3 = l.premises[0]   # S |- s ; t
            p1, p2 = r.premises  # s |- S', t |- T'
            d = apply_rule("D_P_right", p3)
            d = apply_rule("Cut_P", d, p2)
            d = apply_rule("D_P_right", d, backward=True)
            d = apply_rule("E_right", d)
            d = apply_rule("D_P_right", d)
            d = apply_rule("Cut_P", d, p1)
            d = apply_rule("D_P_right", d, backward=True)
            d = apply_rule("E_right", d)
            return d
        case WDia(_):
            p1 = l.premises[0]   # X |- A
            p2 = r.premises[0]   # o A |- Pi
            d = apply_rule("D_PL_right", p2)
            d = apply_rule("Cut_L", p1, d)
            d = apply_rule("D_PL_right", d, backward=True)
            return d
        case WBox(_):
            p1 = l.premises[0]   # G |- o A
            p2 = r.premises[0]   # A |- X
            d = apply_rule("D_PL_left", p1)
            d = apply_rule("Cut_L", d, p2)
            d = apply_rule("D_PL_left", d, backward=True)
            return d
        case BDia(_):
            p1 = l.premises[0]   # G |- alpha
            p2 = r.premises[0]   # * alpha |- X
            d = apply_rule("D_PL_left", p2, backward=True)
            d = apply_rule("Cut_P", p1, d)
            d = apply_rule("D_PL_left", d)
            return d
        case BBox(_):
            p1 = l.premises[0]   # X |- * xi
            p2 = r.premises[0]   # xi |- Pi
            d = apply_rule("D_PL_right", p1, backward=True)
            d = apply_rule("Cut_P", d, p2)
            d = apply_rule("D_PL_right", d)
            return d
    raise NotPrincipal(f"no figure for {t}")


def reduce_principal(d: Derivation, path: tuple[int, ...]) -> Derivation:
    node = d.at(path)
    before = sorted(term_size(cut_formula(n)) for _, n in cut_sites(node))
    new = _reduce_principal_node(node)
    after = sorted(term_size(cut_formula(n)) for _, n in cut_sites(new))
    assert _multiset_lt(after, before), "principal step must shrink the measure"
    if new.conclusion != node.conclusion:
        raise NotPrincipal("figure changed the end-sequent")  # defensive
    return replace_node(d, path, new)


def _multiset_lt(a: list[int], b: list[int]) -> bool:
    """Dershowitz-Manna comparison for multisets of naturals."""
    if a == b:
        return False
    ca, cb = dict(), dict()
    for x in a:
        ca[x] = ca.get(x, 0) + 1
    for x in b:
        cb[x] = cb.get(x, 0) + 1
    extra = [x for x in ca if ca.get(x, 0) > cb.get(x, 0)]
    return all(any(y > x for y in cb if cb.get(y, 0) > ca.get(y, 0)) for x in extra)


# ---------------------------------------------------------------------------
# Parametric moves: substitute the congruence class of the cut formula


def _pattern_children(pat) -> tuple:
    match pat:
        case R.PCirc(a) | R.PCircOp(a) | R.PBullet(a) | R.PBulletOp(a):
            return (a,)
        case R.PDot(l, r) | R.PSup(l, r):
            return (l, r)
        case _:
            return ()


def _var_positions(pat, prefix: tuple = ()) -> dict[str, list[tuple]]:
    out: dict[str, list[tuple]] = {}
    if isinstance(pat, R.SVar):
        out.setdefault(pat.name, []).append(prefix)
        return out
    for i, child in enumerate(_pattern_children(pat)):
        for k, v in _var_positions(child, prefix + (i,)).items():
            out.setdefault(k, []).extend(v)
    return out


def _descend_pattern(pat, rel: tuple):
    """Follow a structure path into a pattern; returns (pattern-node, tail)
    where the tail is the remainder once a variable is hit."""
    for k, i in enumerate(rel):
        if isinstance(pat, R.SVar):
            return pat, rel[k:]
        kids = _pattern_children(pat)
        if not kids:
            return pat, rel[k:]
        pat = kids[i]
    return pat, ()


def _premise_occurrences(node: Derivation, occ: Path) -> list[list[Path]] | None:
    """Map a conclusion occurrence to congruent premise occurrences.

    Returns one position list per premise, or None when the occurrence is
    the principal slot of the rule (or an axiom's own formula).
    """
    schema = R.rule_named(node.rule)
    if node.backward:
        schema = R.inverse_schema(schema)
    side, rel = occ[0], tuple(occ[1:])
    concl_pat = schema.conclusion.left if side == "left" else schema.conclusion.right
    pat, tail = _descend_pattern(concl_pat, rel)
    if not isinstance(pat, R.SVar):
        return None  # landed in the schema's fixed part: principal slot
    name = pat.name
    out: list[list[Path]] = []
    for prem in schema.premises:
        positions: list[Path] = []
        for pside, ppat in (("left", prem.left), ("right", prem.right)):
            for pos in _var_positions(ppat).get(name, []):
                positions.append((pside, *pos, *tail))
        out.append(positions)
    return out


def _graft(display: Derivation, base: Derivation) -> Derivation:
    """Replace the HYP leaf of a display chain with a real derivation."""
    if display.rule == HYP:
        return base
    (p,) = display.premises
    return Derivation(display.rule, display.conclusion,
                      (_graft(p, base),), display.backward)


def _subst_class(pi: Derivation, occ: Path, partner: Derivation,
                 succedent_side: bool) -> Derivation:
    """Replace the congruence class of the cut formula at ``occ`` in
    ``pi.conclusion`` with the appropriate side of ``partner``, cutting at
    the introduction points.

    succedent_side: the traced class is the succedent occurrence (the cut's
    left premise); partner is then the cut's right premise.
    """
    target = node_at(pi.conclusion, occ)
    assert isinstance(target, SLeaf)
    replacement = partner.conclusion.right if succedent_side else partner.conclusion.left
    new_concl = replace_at(pi.conclusion, occ, replacement)

    def place_cut(sub: Derivation) -> Derivation:
        if occ == (("right",) if succedent_side else ("left",)):
            return _mk_cut(sub, partner) if succedent_side else _mk_cut(partner, sub)
        # occurrence not displayed (hypothesis leaf): display, cut, replay
        chain = display_at(sub.conclusion, occ)
        top = _graft(chain, sub)
        cut = _mk_cut(top, partner) if succedent_side else _mk_cut(partner, top)
        return invert_display(chain, cut)

    if pi.rule == HYP:
        return place_cut(pi)
    mapping = _premise_occurrences(pi, occ)
    if mapping is None:
        return place_cut(pi)  # principal introduction point: cut here
    new_prems = []
    for prem, positions in zip(pi.premises, mapping):
        cur = prem
        for pos in positions:
            cur = _subst_class(cur, pos, partner, succedent_side)
        new_prems.append(cur)
    return Derivation(pi.rule, new_concl, tuple(new_prems), pi.backward)


# ---------------------------------------------------------------------------
# Driver


def _eliminate(d: Derivation, budget: list[int]) -> Derivation:
    prems = tuple(_eliminate(p, budget) for p in d.premises)
    node = Derivation(d.rule, d.conclusion, prems, d.backward)
    if node.rule not in ("Cut_L", "Cut_P"):
        return node
    return _eliminate_cut(node, budget)


def _eliminate_cut(node: Derivation, budget: list[int]) -> Derivation:
    """Eliminate one cut whose premises are already cut-free."""
    t = cut_formula(node)
    budget[0] -= 1
    if budget[0] <= 0:
        raise BudgetExceeded(node, budget[0])
    if node.premises[0].rule == HYP or node.premises[1].rule == HYP:
        raise NotPrincipal("cannot eliminate a cut against a hypothesis leaf")
    if _left_principal(node, t) and _right_principal(node, t):
        reduced = _reduce_principal_node(node)
        return _eliminate(reduced, budget)
    if not _right_principal(node, t):
        lifted = _subst_class(node.premises[1], ("left",), node.premises[0],
                              succedent_side=False)
    else:
        lifted = _subst_class(node.premises[0], ("right",), node.premises[1],
                              succedent_side=True)
    assert lifted.conclusion == node.conclusion
    return _eliminate(lifted, budget)


def eliminate_cuts(d: Derivation, budget: int = 10**6) -> Derivation:
    """Rewrite ``d`` into a cut-free derivation of the same end-sequent.

    ``d`` must be a checked full proof (no hypothesis leaves).  Raises
    BudgetExceeded (carrying the intermediate tree) if the step budget runs
    out.
    """
    box = [budget]
    out = _eliminate(d, box)
    assert out.conclusion == d.conclusion
    return out


# ---------------------------------------------------------------------------
# Subformula property spot-check


def subterms_of_sequent(s: Sequent) -> set[MtTerm]:
    from .syntax import struct_terms, subterms

    out: set[MtTerm] = set()
    for t in struct_terms(s.left):
        out.update(subterms(t))
    for t in struct_terms(s.right):
        out.update(subterms(t))
    return out


def subformula_check(d: Derivation) -> bool:
    """Every operational term anywhere in the tree is a subterm of a term
    of the end-sequent."""
    allowed = subterms_of_sequent(d.conclusion)
    return all(
        subterms_of_sequent(n.conclusion) <= allowed for _, n in d.nodes())
