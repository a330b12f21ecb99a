"""The D.LL rule set as data: schemas, pattern matching, instantiation.

Patterns mirror the structure/term constructors, with two extra leaf kinds
(structure and term metavariables) and sort-generic variants of the
connectives that the rules use uniformly at P and P^op.  Matching is purely
syntactic; associativity and commutativity are rules (A, E), never built
into the matcher.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .syntax import (
    Bullet, BulletOp, Cap, CapOp, Circ, CircOp, Cup, CupOp, Dot, DotOp,
    IConst, MtTerm, MtType, SCirc, SCircOp, SLeaf, Sequent, SortError,
    Structure, Sup, SupOp, TmAtom, TmBot, TmTop, WBox, WDia, BBox, BDia,
    struct_sort, term_sort,
)


class Kind(Enum):
    STRUCT_L = "StructL"
    STRUCT_P = "StructP"
    STRUCT_POP = "StructPop"
    STRUCT_UNIFORM = "StructUniform"
    TERM_L = "TermL"
    TERM_P = "TermP"
    TERM_POP = "TermPop"
    TERM_UNIFORM = "TermUniform"
    ATOM = "AtomVar"


@dataclass(frozen=True)
class MetaVar:
    name: str
    kind: Kind


class KindError(Exception):
    pass


# -- pattern nodes -----------------------------------------------------------


@dataclass(frozen=True)
class SVar:
    """Structure metavariable."""

    name: str
    kind: Kind


@dataclass(frozen=True)
class TVar:
    """Term metavariable (appears under PLeaf or inside term patterns)."""

    name: str
    kind: Kind


@dataclass(frozen=True)
class PLeaf:
    pat: object  # term pattern


@dataclass(frozen=True)
class PI:
    pass


@dataclass(frozen=True)
class PSCirc:  # sort-generic circled-S
    pass


@dataclass(frozen=True)
class PCirc:
    arg: object


@dataclass(frozen=True)
class PCircOp:
    arg: object


@dataclass(frozen=True)
class PBullet:
    arg: object


@dataclass(frozen=True)
class PBulletOp:
    arg: object


@dataclass(frozen=True)
class PDot:  # sort-generic ;
    left: object
    right: object


@dataclass(frozen=True)
class PSup:  # sort-generic >
    left: object
    right: object


@dataclass(frozen=True)
class PTop:
    pass


@dataclass(frozen=True)
class PBot:
    pass


@dataclass(frozen=True)
class PCap:  # sort-generic cap
    left: object
    right: object


@dataclass(frozen=True)
class PCup:  # sort-generic cup
    left: object
    right: object


@dataclass(frozen=True)
class PWBox:
    arg: object


@dataclass(frozen=True)
class PWDia:
    arg: object


@dataclass(frozen=True)
class PBDia:
    arg: object


@dataclass(frozen=True)
class PBBox:
    arg: object


@dataclass(frozen=True)
class PatSequent:
    left: object
    right: object


@dataclass(frozen=True)
class Substitution:
    """Kind-respecting assignment of metavariables, plus the resolved sort
    shared by all Uniform variables of one rule instance."""

    bindings: dict
    uniform: MtType | None = None

    def get(self, name: str):
        return self.bindings.get(name)


class RuleGroup(Enum):
    DISPLAY = "Display"
    STRUCTURAL = "Structural"
    OPERATIONAL = "OperationalIntro"
    IDENTITY = "Identity"
    CUT = "Cut"


@dataclass(frozen=True)
class RuleSchema:
    name: str
    premises: tuple
    conclusion: PatSequent
    invertible: bool = False
    group: RuleGroup = RuleGroup.STRUCTURAL
    # metavariables appearing in the conclusion only (W's U, IW's Y)
    fresh_in_conclusion: frozenset = frozenset()
    # premise-only metavariable (the cut formula), to be supplied by callers
    cut_var: str | None = None

    def variables(self) -> dict[str, Kind]:
        out: dict[str, Kind] = {}

        def walk(p) -> None:
            if isinstance(p, (SVar, TVar)):
                out[p.name] = p.kind
            elif isinstance(p, PatSequent):
                walk(p.left), walk(p.right)
            elif isinstance(p, PLeaf):
                walk(p.pat)
            else:
                for f in getattr(p, "__dataclass_fields__", {}):
                    v = getattr(p, f)
                    if not isinstance(v, (str, Kind)):
                        walk(v)

        for pr in self.premises:
            walk(pr)
        walk(self.conclusion)
        return out


# -- matching ----------------------------------------------------------------


def _kind_ok(kind: Kind, value, uniform: MtType | None) -> MtType | None:
    """Check a binding against its kind; return the updated uniform sort."""
    if isinstance(value, Structure):
        sort = struct_sort(value)
        if kind is Kind.STRUCT_L:
            ok = sort is MtType.L
        elif kind is Kind.STRUCT_P:
            ok = sort is MtType.P
        elif kind is Kind.STRUCT_POP:
            ok = sort is MtType.POP
        elif kind is Kind.STRUCT_UNIFORM:
            if sort is MtType.L:
                return _fail()
            if uniform is None:
                return sort
            return uniform if uniform is sort else _fail()
        else:
            return _fail()
        return uniform if ok else _fail()
    if isinstance(value, MtTerm):
        sort = term_sort(value)
        if kind is Kind.TERM_L:
            ok = sort is MtType.L
        elif kind is Kind.TERM_P:
            ok = sort is MtType.P
        elif kind is Kind.TERM_POP:
            ok = sort is MtType.POP
        elif kind is Kind.ATOM:
            ok = isinstance(value, TmAtom)
        elif kind is Kind.TERM_UNIFORM:
            if sort is MtType.L:
                return _fail()
            if uniform is None:
                return sort
            return uniform if uniform is sort else _fail()
        else:
            return _fail()
        return uniform if ok else _fail()
    return _fail()


class _MatchFail(Exception):
    pass


def _fail():
    raise _MatchFail


def _match_term(pat, t: MtTerm, b: dict, uniform):
    match pat:
        case TVar(name, kind):
            if name in b:
                if b[name] != t:
                    _fail()
                return uniform
            uniform = _kind_ok(kind, t, uniform)
            b[name] = t
            return uniform
        case PTop():
            return uniform if isinstance(t, TmTop) else _fail()
        case PBot():
            return uniform if isinstance(t, TmBot) else _fail()
        case PWBox(a):
            if not isinstance(t, WBox):
                _fail()
            return _match_term(a, t.arg, b, uniform)
        case PWDia(a):
            if not isinstance(t, WDia):
                _fail()
            return _match_term(a, t.arg, b, uniform)
        case PBDia(a):
            if not isinstance(t, BDia):
                _fail()
            return _match_term(a, t.arg, b, uniform)
        case PBBox(a):
            if not isinstance(t, BBox):
                _fail()
            return _match_term(a, t.arg, b, uniform)
        case PCap(l, r):
            if isinstance(t, Cap):
                new = MtType.P
            elif isinstance(t, CapOp):
                new = MtType.POP
            else:
                _fail()
            if uniform is not None and uniform is not new:
                _fail()
            uniform = _match_term(l, t.left, b, new)
            return _match_term(r, t.right, b, uniform)
        case PCup(l, r):
            if isinstance(t, Cup):
                new = MtType.P
            elif isinstance(t, CupOp):
                new = MtType.POP
            else:
                _fail()
            if uniform is not None and uniform is not new:
                _fail()
            uniform = _match_term(l, t.left, b, new)
            return _match_term(r, t.right, b, uniform)
    raise TypeError(pat)


def _match_struct(pat, s: Structure, b: dict, uniform):
    match pat:
        case SVar(name, kind):
            if name in b:
                if b[name] != s:
                    _fail()
                return uniform
            uniform = _kind_ok(kind, s, uniform)
            b[name] = s
            return uniform
        case PLeaf(tp):
            if not isinstance(s, SLeaf):
                _fail()
            return _match_term(tp, s.term, b, uniform)
        case PI():
            return uniform if isinstance(s, IConst) else _fail()
        case PSCirc():
            if isinstance(s, SCirc):
                new = MtType.P
            elif isinstance(s, SCircOp):
                new = MtType.POP
            else:
                _fail()
            if uniform is not None and uniform is not new:
                _fail()
            return new
        case PCirc(a):
            if not isinstance(s, Circ):
                _fail()
            return _match_struct(a, s.arg, b, uniform)
        case PCircOp(a):
            if not isinstance(s, CircOp):
                _fail()
            return _match_struct(a, s.arg, b, uniform)
        case PBullet(a):
            if not isinstance(s, Bullet):
                _fail()
            return _match_struct(a, s.arg, b, uniform)
        case PBulletOp(a):
            if not isinstance(s, BulletOp):
                _fail()
            return _match_struct(a, s.arg, b, uniform)
        case PDot(l, r):
            if isinstance(s, Dot):
                new = MtType.P
            elif isinstance(s, DotOp):
                new = MtType.POP
            else:
                _fail()
            if uniform is not None and uniform is not new:
                _fail()
            uniform = _match_struct(l, s.left, b, new)
            return _match_struct(r, s.right, b, uniform)
        case PSup(l, r):
            if isinstance(s, Sup):
                new = MtType.P
            elif isinstance(s, SupOp):
                new = MtType.POP
            else:
                _fail()
            if uniform is not None and uniform is not new:
                _fail()
            uniform = _match_struct(l, s.left, b, new)
            return _match_struct(r, s.right, b, uniform)
    raise TypeError(pat)


def match_pattern(pat: PatSequent, seq: Sequent, bindings: dict | None = None,
                  uniform: MtType | None = None) -> Substitution | None:
    """Match one sequent pattern; extends ``bindings`` if given."""
    b = dict(bindings) if bindings else {}
    try:
        uniform = _match_struct(pat.left, seq.left, b, uniform)
        uniform = _match_struct(pat.right, seq.right, b, uniform)
    except _MatchFail:
        return None
    return Substitution(b, uniform)


def match(schema: RuleSchema, conclusion: Sequent) -> list[Substitution]:
    """All substitutions with sigma(schema.conclusion) == conclusion.

    Premise-only variables (the cut formula) are left unbound; callers
    supply them.  Patterns are rigid, so the result has length 0 or 1.
    """
    sub = match_pattern(schema.conclusion, conclusion)
    return [sub] if sub is not None else []


# -- instantiation -----------------------------------------------------------


def _build_term(pat, sub: Substitution) -> MtTerm:
    uniform = sub.uniform
    match pat:
        case TVar(name, kind):
            v = sub.get(name)
            if v is None or not isinstance(v, MtTerm):
                raise KindError(f"no term binding for {name}")
            _check_binding(kind, v, uniform)
            return v
        case PTop():
            return TmTop()
        case PBot():
            return TmBot()
        case PWBox(a):
            return WBox(_build_term(a, sub))
        case PWDia(a):
            return WDia(_build_term(a, sub))
        case PBDia(a):
            return BDia(_build_term(a, sub))
        case PBBox(a):
            return BBox(_build_term(a, sub))
        case PCap(l, r):
            ctor = Cap if uniform is MtType.P else CapOp
            return ctor(_build_term(l, sub), _build_term(r, sub))
        case PCup(l, r):
            ctor = Cup if uniform is MtType.P else CupOp
            return ctor(_build_term(l, sub), _build_term(r, sub))
    raise TypeError(pat)


def _build_struct(pat, sub: Substitution) -> Structure:
    uniform = sub.uniform
    match pat:
        case SVar(name, kind):
            v = sub.get(name)
            if v is None or not isinstance(v, Structure):
                raise KindError(f"no structure binding for {name}")
            _check_binding(kind, v, uniform)
            return v
        case PLeaf(tp):
            return SLeaf(_build_term(tp, sub))
        case PI():
            return IConst()
        case PSCirc():
            return SCirc() if uniform is MtType.P else SCircOp()
        case PCirc(a):
            return Circ(_build_struct(a, sub))
        case PCircOp(a):
            return CircOp(_build_struct(a, sub))
        case PBullet(a):
            return Bullet(_build_struct(a, sub))
        case PBulletOp(a):
            return BulletOp(_build_struct(a, sub))
        case PDot(l, r):
            ctor = Dot if uniform is MtType.P else DotOp
            return ctor(_build_struct(l, sub), _build_struct(r, sub))
        case PSup(l, r):
            ctor = Sup if uniform is MtType.P else SupOp
            return ctor(_build_struct(l, sub), _build_struct(r, sub))
    raise TypeError(pat)


def _check_binding(kind: Kind, value, uniform: MtType | None) -> None:
    try:
        _kind_ok(kind, value, uniform)
    except _MatchFail:
        got = struct_sort(value) if isinstance(value, Structure) else term_sort(value)
        raise SortError(f"binding of kind {kind.value} has sort {got.value}") from None


def _needs_uniform(schema: RuleSchema) -> bool:
    return any(k in (Kind.STRUCT_UNIFORM, Kind.TERM_UNIFORM)
               for k in schema.variables().values())


def instantiate(schema: RuleSchema, sub: Substitution) -> tuple[list[Sequent], Sequent]:
    """Build (premises, conclusion); raises KindError/SortError on bad subs."""
    if _needs_uniform(schema) and sub.uniform is None:
        # infer the shared sort from any uniform binding
        uniform = None
        for name, kind in schema.variables().items():
            v = sub.get(name)
            if v is None:
                continue
            if kind in (Kind.STRUCT_UNIFORM, Kind.TERM_UNIFORM):
                uniform = struct_sort(v) if isinstance(v, Structure) else term_sort(v)
                break
        if uniform is None:
            raise KindError(f"{schema.name}: uniform sort unresolved")
        sub = Substitution(sub.bindings, uniform)
    prems = [Sequent(_build_struct(p.left, sub), _build_struct(p.right, sub))
             for p in schema.premises]
    concl = Sequent(_build_struct(schema.conclusion.left, sub),
                    _build_struct(schema.conclusion.right, sub))
    return prems, concl


# -- the rule inventory ------------------------------------------------------


def _sv(name: str, kind: Kind = Kind.STRUCT_UNIFORM) -> SVar:
    return SVar(name, kind)


def _tv(name: str, kind: Kind = Kind.TERM_UNIFORM) -> TVar:
    return TVar(name, kind)


def _mk_rules() -> list[RuleSchema]:
    SL, SP, SPOP = Kind.STRUCT_L, Kind.STRUCT_P, Kind.STRUCT_POP
    TL = Kind.TERM_L
    X, Y = _sv("X", SL), _sv("Y", SL)
    G = _sv("G", SP)
    Pi = _sv("Pi", SPOP)
    S, T, U, V = _sv("S"), _sv("T"), _sv("U"), _sv("V")
    s, t = _tv("s"), _tv("t")
    A = _tv("A", TL)
    alpha = _tv("alpha", Kind.TERM_P)
    xi = _tv("xi", Kind.TERM_POP)

    def seq(l, r) -> PatSequent:
        return PatSequent(l, r)

    R = RuleSchema
    rules = [
        # multi-type display rules
        R("D_PL_left", (seq(G, PCirc(X)),), seq(PBullet(G), X),
          invertible=True, group=RuleGroup.DISPLAY),
        R("D_PL_right", (seq(PCircOp(X), Pi),), seq(X, PBulletOp(Pi)),
          invertible=True, group=RuleGroup.DISPLAY),
        # pure P/Pop display rules
        R("D_P_left", (seq(PDot(S, T), U),), seq(T, PSup(S, U)),
          invertible=True, group=RuleGroup.DISPLAY),
        R("D_P_right", (seq(S, PDot(T, U)),), seq(PSup(T, S), U),
          invertible=True, group=RuleGroup.DISPLAY),
        # pure P/Pop structural rules
        R("SCirc_left", (seq(S, T),), seq(PDot(S, PSCirc()), T), invertible=True),
        R("SCirc_right", (seq(S, T),), seq(S, PDot(T, PSCirc())), invertible=True),
        R("E_left", (seq(PDot(S, T), U),), seq(PDot(T, S), U)),
        R("E_right", (seq(S, PDot(T, U)),), seq(S, PDot(U, T))),
        R("A_left", (seq(PDot(PDot(S, T), U), V),), seq(PDot(S, PDot(T, U)), V),
          invertible=True),
        R("A_right", (seq(S, PDot(PDot(T, U), V)),), seq(S, PDot(T, PDot(U, V))),
          invertible=True),
        R("W_left", (seq(S, T),), seq(PDot(S, U), T),
          fresh_in_conclusion=frozenset({"U"})),
        R("W_right", (seq(S, T),), seq(S, PDot(T, U)),
          fresh_in_conclusion=frozenset({"U"})),
        R("C_left", (seq(PDot(S, S), T),), seq(S, T)),
        R("C_right", (seq(S, PDot(T, T)),), seq(S, T)),
        R("Cut_P", (seq(S, PLeaf(s)), seq(PLeaf(s), T)), seq(S, T),
          group=RuleGroup.CUT, cut_var="s"),
        # pure P/Pop operational rules
        R("Cap_left", (seq(PDot(PLeaf(s), PLeaf(t)), S),),
          seq(PLeaf(PCap(s, t)), S), group=RuleGroup.OPERATIONAL),
        R("Cap_right", (seq(S, PLeaf(s)), seq(T, PLeaf(t))),
          seq(PDot(S, T), PLeaf(PCap(s, t))), group=RuleGroup.OPERATIONAL),
        R("Cup_left", (seq(PLeaf(s), S), seq(PLeaf(t), T)),
          seq(PLeaf(PCup(s, t)), PDot(S, T)), group=RuleGroup.OPERATIONAL),
        R("Cup_right", (seq(S, PDot(PLeaf(s), PLeaf(t))),),
          seq(S, PLeaf(PCup(s, t))), group=RuleGroup.OPERATIONAL),
        # pure L rules
        R("Id", (), seq(PLeaf(TVar("p", Kind.ATOM)), PLeaf(TVar("p", Kind.ATOM))),
          group=RuleGroup.IDENTITY),
        R("Cut_L", (seq(X, PLeaf(A)), seq(PLeaf(A), Y)), seq(X, Y),
          group=RuleGroup.CUT, cut_var="A"),
        R("IW", (seq(PI(), X),), seq(Y, X),
          fresh_in_conclusion=frozenset({"Y"})),
        R("Top_left", (seq(PI(), X),), seq(PLeaf(PTop()), X),
          group=RuleGroup.OPERATIONAL),
        R("Top_right", (), seq(PI(), PLeaf(PTop())), group=RuleGroup.OPERATIONAL),
        R("Bot_left", (), seq(PLeaf(PBot()), PI()), group=RuleGroup.OPERATIONAL),
        R("Bot_right", (seq(X, PI()),), seq(X, PLeaf(PBot())),
          group=RuleGroup.OPERATIONAL),
        # operational rules for the multi-type connectives
        R("WDia_left", (seq(PCircOp(PLeaf(A)), Pi),), seq(PLeaf(PWDia(A)), Pi),
          group=RuleGroup.OPERATIONAL),
        R("WDia_right", (seq(X, PLeaf(A)),), seq(PCircOp(X), PLeaf(PWDia(A))),
          group=RuleGroup.OPERATIONAL),
        R("BBox_left", (seq(X, PBulletOp(PLeaf(xi))),), seq(X, PLeaf(PBBox(xi))),
          group=RuleGroup.OPERATIONAL),
        R("BBox_right", (seq(PLeaf(xi), Pi),), seq(PLeaf(PBBox(xi)), PBulletOp(Pi)),
          group=RuleGroup.OPERATIONAL),
        R("BDia_left", (seq(PBullet(PLeaf(alpha)), X),), seq(PLeaf(PBDia(alpha)), X),
          group=RuleGroup.OPERATIONAL),
        R("BDia_right", (seq(G, PLeaf(alpha)),), seq(PBullet(G), PLeaf(PBDia(alpha))),
          group=RuleGroup.OPERATIONAL),
        R("WBox_left", (seq(G, PCirc(PLeaf(A))),), seq(G, PLeaf(PWBox(A))),
          group=RuleGroup.OPERATIONAL),
        R("WBox_right", (seq(PLeaf(A), X),), seq(PLeaf(PWBox(A)), PCirc(X)),
          group=RuleGroup.OPERATIONAL),
    ]
    return rules


_RULES: list[RuleSchema] = _mk_rules()
_BY_NAME: dict[str, RuleSchema] = {r.name: r for r in _RULES}


def builtin_rules() -> list[RuleSchema]:
    return list(_RULES)


def rule_named(name: str) -> RuleSchema:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise KeyError(f"unknown rule {name!r}") from None


def inverse_schema(schema: RuleSchema) -> RuleSchema:
    """Premise/conclusion swap of a (single-premise) invertible rule."""
    if not schema.invertible:
        raise KindError(f"{schema.name} is not invertible")
    (prem,) = schema.premises
    return RuleSchema(
        name=schema.name + "~",
        premises=(schema.conclusion,),
        conclusion=prem,
        invertible=True,
        group=schema.group,
    )
