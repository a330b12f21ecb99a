"""ASTs, parsers and printers for the single-type and multi-type languages.

Three layers share this module:

* lattice-logic formulas (``/\\``, ``\\/``, ``T``, ``F``, atoms);
* operational multi-type terms in three sorts (L, P, P^op);
* structures and sequents built over the terms.

The concrete syntax is ASCII and sort-overloaded: ``cap``, ``cup``, ``o``,
``*``, ``;``, ``>`` and ``S0`` stand for either the P- or the P^op-variant
of the connective, and the parser recovers the sorts by constraint
propagation over the whole sequent.  Residual ambiguity defaults to P.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Union


class MtType(Enum):
    """The three sorts: Lattice, Left (P) and Right (P^op)."""

    L = "L"
    P = "P"
    POP = "Pop"

    def __repr__(self) -> str:
        return self.value


class SyntaxError_(Exception):
    """Malformed input; carries the byte offset of the offending token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class SortError(Exception):
    """Ill-sorted term or structure; names the offending subterm."""


class PathError(Exception):
    """A path that does not address a node of the given sequent."""


# ---------------------------------------------------------------------------
# Lattice-logic formulas


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    __match_args__ = ("name",)
    name: str

    def __post_init__(self) -> None:
        if not re.fullmatch(r"[a-z][a-zA-Z0-9_]*", self.name):
            raise SyntaxError_(f"bad atom name {self.name!r}", 0)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    __match_args__ = ("left", "right")
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    __match_args__ = ("left", "right")
    left: Formula
    right: Formula


def formula_size(a: Formula) -> int:
    match a:
        case And(l, r) | Or(l, r):
            return 1 + formula_size(l) + formula_size(r)
        case _:
            return 1


def formula_atoms(a: Formula) -> set[str]:
    match a:
        case Atom(name):
            return {name}
        case And(l, r) | Or(l, r):
            return formula_atoms(l) | formula_atoms(r)
        case _:
            return set()


def dual_formula(a: Formula) -> Formula:
    """Swap meets with joins and top with bottom."""
    match a:
        case Atom(_):
            return a
        case Top():
            return Bot()
        case Bot():
            return Top()
        case And(l, r):
            return Or(dual_formula(l), dual_formula(r))
        case Or(l, r):
            return And(dual_formula(l), dual_formula(r))
    raise TypeError(a)


# ---------------------------------------------------------------------------
# Operational multi-type terms


class MtTerm:
    __slots__ = ()

    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class TmAtom(MtTerm):
    __match_args__ = ("name",)
    name: str


@dataclass(frozen=True)
class TmTop(MtTerm):
    pass


@dataclass(frozen=True)
class TmBot(MtTerm):
    pass


@dataclass(frozen=True)
class BDia(MtTerm):  # filled diamond, P -> L
    __match_args__ = ("arg",)
    arg: MtTerm


@dataclass(frozen=True)
class BBox(MtTerm):  # filled box, Pop -> L
    __match_args__ = ("arg",)
    arg: MtTerm


@dataclass(frozen=True)
class WBox(MtTerm):  # white box, L -> P
    __match_args__ = ("arg",)
    arg: MtTerm


@dataclass(frozen=True)
class WDia(MtTerm):  # white diamond, L -> Pop
    __match_args__ = ("arg",)
    arg: MtTerm


@dataclass(frozen=True)
class Cap(MtTerm):
    __match_args__ = ("left", "right")
    left: MtTerm
    right: MtTerm


@dataclass(frozen=True)
class Cup(MtTerm):
    __match_args__ = ("left", "right")
    left: MtTerm
    right: MtTerm


@dataclass(frozen=True)
class CapOp(MtTerm):
    __match_args__ = ("left", "right")
    left: MtTerm
    right: MtTerm


@dataclass(frozen=True)
class CupOp(MtTerm):
    __match_args__ = ("left", "right")
    left: MtTerm
    right: MtTerm


_TERM_SORTS = {
    TmAtom: MtType.L,
    TmTop: MtType.L,
    TmBot: MtType.L,
    BDia: MtType.L,
    BBox: MtType.L,
    WBox: MtType.P,
    Cap: MtType.P,
    Cup: MtType.P,
    WDia: MtType.POP,
    CapOp: MtType.POP,
    CupOp: MtType.POP,
}

_TERM_ARG_SORTS = {
    BDia: (MtType.P,),
    BBox: (MtType.POP,),
    WBox: (MtType.L,),
    WDia: (MtType.L,),
    Cap: (MtType.P, MtType.P),
    Cup: (MtType.P, MtType.P),
    CapOp: (MtType.POP, MtType.POP),
    CupOp: (MtType.POP, MtType.POP),
}


def term_sort(t: MtTerm) -> MtType:
    return _TERM_SORTS[type(t)]


def check_term(t: MtTerm) -> MtType:
    """Verify well-sortedness of every constructor application in ``t``."""
    expected = _TERM_ARG_SORTS.get(type(t), ())
    args = term_args(t)
    for want, arg in zip(expected, args):
        got = check_term(arg)
        if got is not want:
            raise SortError(f"in {t}: argument {arg} has sort {got.value}, expected {want.value}")
    return term_sort(t)


def term_args(t: MtTerm) -> tuple[MtTerm, ...]:
    match t:
        case BDia(a) | BBox(a) | WBox(a) | WDia(a):
            return (a,)
        case Cap(l, r) | Cup(l, r) | CapOp(l, r) | CupOp(l, r):
            return (l, r)
        case _:
            return ()


def subterms(t: MtTerm) -> Iterator[MtTerm]:
    yield t
    for a in term_args(t):
        yield from subterms(a)


def dual_term(t: MtTerm) -> MtTerm:
    match t:
        case TmAtom(_):
            return t
        case TmTop():
            return TmBot()
        case TmBot():
            return TmTop()
        case BDia(a):
            return BBox(dual_term(a))
        case BBox(a):
            return BDia(dual_term(a))
        case WBox(a):
            return WDia(dual_term(a))
        case WDia(a):
            return WBox(dual_term(a))
        case Cap(l, r):
            return CupOp(dual_term(l), dual_term(r))
        case Cup(l, r):
            return CapOp(dual_term(l), dual_term(r))
        case CapOp(l, r):
            return Cup(dual_term(l), dual_term(r))
        case CupOp(l, r):
            return Cap(dual_term(l), dual_term(r))
    raise TypeError(t)


# ---------------------------------------------------------------------------
# Structures


class Structure:
    __slots__ = ()

    def __str__(self) -> str:
        return print_structure(self)


@dataclass(frozen=True)
class SLeaf(Structure):
    """An operational term used as a structure."""

    __match_args__ = ("term",)
    term: MtTerm


@dataclass(frozen=True)
class IConst(Structure):  # I, L-sort structural constant
    pass


@dataclass(frozen=True)
class Bullet(Structure):  # P -> L
    __match_args__ = ("arg",)
    arg: Structure


@dataclass(frozen=True)
class BulletOp(Structure):  # Pop -> L
    __match_args__ = ("arg",)
    arg: Structure


@dataclass(frozen=True)
class Circ(Structure):  # L -> P
    __match_args__ = ("arg",)
    arg: Structure


@dataclass(frozen=True)
class CircOp(Structure):  # L -> Pop
    __match_args__ = ("arg",)
    arg: Structure


@dataclass(frozen=True)
class SCirc(Structure):  # circled-S constant, P
    pass


@dataclass(frozen=True)
class SCircOp(Structure):  # circled-S constant, Pop
    pass


@dataclass(frozen=True)
class Dot(Structure):
    __match_args__ = ("left", "right")
    left: Structure
    right: Structure


@dataclass(frozen=True)
class DotOp(Structure):
    __match_args__ = ("left", "right")
    left: Structure
    right: Structure


@dataclass(frozen=True)
class Sup(Structure):  # first coordinate is negative
    __match_args__ = ("left", "right")
    left: Structure
    right: Structure


@dataclass(frozen=True)
class SupOp(Structure):
    __match_args__ = ("left", "right")
    left: Structure
    right: Structure


_STRUCT_SORTS = {
    IConst: MtType.L,
    Bullet: MtType.L,
    BulletOp: MtType.L,
    Circ: MtType.P,
    SCirc: MtType.P,
    Dot: MtType.P,
    Sup: MtType.P,
    CircOp: MtType.POP,
    SCircOp: MtType.POP,
    DotOp: MtType.POP,
    SupOp: MtType.POP,
}

_STRUCT_ARG_SORTS = {
    Bullet: (MtType.P,),
    BulletOp: (MtType.POP,),
    Circ: (MtType.L,),
    CircOp: (MtType.L,),
    Dot: (MtType.P, MtType.P),
    Sup: (MtType.P, MtType.P),
    DotOp: (MtType.POP, MtType.POP),
    SupOp: (MtType.POP, MtType.POP),
}


def struct_sort(s: Structure) -> MtType:
    if isinstance(s, SLeaf):
        return term_sort(s.term)
    return _STRUCT_SORTS[type(s)]


def check_structure(s: Structure) -> MtType:
    if isinstance(s, SLeaf):
        return check_term(s.term)
    expected = _STRUCT_ARG_SORTS.get(type(s), ())
    for want, arg in zip(expected, struct_args(s)):
        got = check_structure(arg)
        if got is not want:
            raise SortError(f"in {s}: argument {arg} has sort {got.value}, expected {want.value}")
    return struct_sort(s)


def struct_args(s: Structure) -> tuple[Structure, ...]:
    match s:
        case Bullet(a) | BulletOp(a) | Circ(a) | CircOp(a):
            return (a,)
        case Dot(l, r) | DotOp(l, r) | Sup(l, r) | SupOp(l, r):
            return (l, r)
        case _:
            return ()


def struct_terms(s: Structure) -> Iterator[MtTerm]:
    """All operational terms sitting at the leaves of ``s``."""
    if isinstance(s, SLeaf):
        yield s.term
    for a in struct_args(s):
        yield from struct_terms(a)


def struct_atoms(s: Structure) -> set[str]:
    names: set[str] = set()
    for t in struct_terms(s):
        names.update(u.name for u in subterms(t) if isinstance(u, TmAtom))
    return names


def dual_structure(s: Structure) -> Structure:
    match s:
        case SLeaf(t):
            return SLeaf(dual_term(t))
        case IConst():
            return s
        case Bullet(a):
            return BulletOp(dual_structure(a))
        case BulletOp(a):
            return Bullet(dual_structure(a))
        case Circ(a):
            return CircOp(dual_structure(a))
        case CircOp(a):
            return Circ(dual_structure(a))
        case SCirc():
            return SCircOp()
        case SCircOp():
            return SCirc()
        case Dot(l, r):
            return DotOp(dual_structure(l), dual_structure(r))
        case DotOp(l, r):
            return Dot(dual_structure(l), dual_structure(r))
        case Sup(l, r):
            return SupOp(dual_structure(l), dual_structure(r))
        case SupOp(l, r):
            return Sup(dual_structure(l), dual_structure(r))
    raise TypeError(s)


# ---------------------------------------------------------------------------
# Sequents, paths, polarity


@dataclass(frozen=True)
class Sequent:
    __match_args__ = ("left", "right")
    left: Structure
    right: Structure

    def __post_init__(self) -> None:
        ls, rs = check_structure(self.left), check_structure(self.right)
        if ls is not rs:
            raise SortError(
                f"sequent sides have different sorts: {ls.value} |- {rs.value}"
            )

    @property
    def sort(self) -> MtType:
        return struct_sort(self.left)

    def __str__(self) -> str:
        return print_sequent(self)

    def dual(self) -> "Sequent":
        return Sequent(dual_structure(self.right), dual_structure(self.left))


class Polarity(Enum):
    PRECEDENT = "precedent"
    SUCCEDENT = "succedent"

    def flip(self) -> "Polarity":
        return Polarity.SUCCEDENT if self is Polarity.PRECEDENT else Polarity.PRECEDENT


Path = tuple[Union[str, int], ...]  # ('left'|'right', i, j, ...)


def node_at(s: Sequent, path: Path) -> Structure:
    if not path or path[0] not in ("left", "right"):
        raise PathError(f"path must start with 'left' or 'right': {path!r}")
    node = s.left if path[0] == "left" else s.right
    for i in path[1:]:
        args = struct_args(node)
        if not isinstance(i, int) or not 0 <= i < len(args):
            raise PathError(f"dangling path {path!r} at {node}")
        node = args[i]
    return node


def polarity_at(s: Sequent, path: Path) -> Polarity:
    """Sign of the node addressed by ``path``, propagated from the root.

    The root of the left side is positive (precedent), the right side is
    negative (succedent).  Every structural coordinate is positive except
    the first coordinate of ``>``.
    """
    node = node_at(s, path)  # validate early; raises PathError on bad paths
    del node
    pol = Polarity.PRECEDENT if path[0] == "left" else Polarity.SUCCEDENT
    node = s.left if path[0] == "left" else s.right
    for i in path[1:]:
        if isinstance(node, (Sup, SupOp)) and i == 0:
            pol = pol.flip()
        node = struct_args(node)[i]
    return pol


def all_paths(s: Sequent) -> Iterator[Path]:
    def walk(node: Structure, prefix: Path) -> Iterator[Path]:
        yield prefix
        for i, a in enumerate(struct_args(node)):
            yield from walk(a, prefix + (i,))

    yield from walk(s.left, ("left",))
    yield from walk(s.right, ("right",))


def replace_at(s: Sequent, path: Path, new: Structure) -> Sequent:
    def go(node: Structure, rest: Path) -> Structure:
        if not rest:
            return new
        i = rest[0]
        args = list(struct_args(node))
        args[i] = go(args[i], rest[1:])
        return type(node)(*args)

    if path[0] == "left":
        return Sequent(go(s.left, path[1:]), s.right)
    return Sequent(s.left, go(s.right, path[1:]))


# ---------------------------------------------------------------------------
# Formula parser / printer


_FORMULA_TOKEN = re.compile(r"\s*(/\\|\\/|\(|\)|[a-z][a-zA-Z0-9_]*|T|F)")


def _tokenize_formula(text: str) -> list[tuple[str, int]]:
    toks, pos = [], 0
    while pos < len(text):
        m = _FORMULA_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise SyntaxError_(f"unexpected character {text[pos]!r}", pos)
            break
        toks.append((m.group(1), m.start(1)))
        pos = m.end()
    return toks


def parse_formula(text: str) -> Formula:
    toks = _tokenize_formula(text)
    pos = 0

    def peek() -> str | None:
        return toks[pos][0] if pos < len(toks) else None

    def err(msg: str) -> SyntaxError_:
        off = toks[pos][1] if pos < len(toks) else len(text)
        return SyntaxError_(msg, off)

    def atom() -> Formula:
        nonlocal pos
        tok = peek()
        if tok is None:
            raise err("unexpected end of input")
        pos += 1
        if tok == "(":
            f = disj()
            if peek() != ")":
                raise err("expected ')'")
            pos += 1
            return f
        if tok == "T":
            return Top()
        if tok == "F":
            return Bot()
        if re.fullmatch(r"[a-z][a-zA-Z0-9_]*", tok):
            return Atom(tok)
        raise err(f"unexpected token {tok!r}")

    def conj() -> Formula:
        nonlocal pos
        f = atom()
        while peek() == "/\\":
            pos += 1
            f = And(f, atom())
        return f

    def disj() -> Formula:
        nonlocal pos
        f = conj()
        while peek() == "\\/":
            pos += 1
            f = Or(f, conj())
        return f

    f = disj()
    if pos != len(toks):
        raise err("trailing input")
    return f


def print_formula(a: Formula, full_parens: bool = False) -> str:
    def go(f: Formula, ctx: int) -> str:
        # ctx: 0 top, 1 under \/ (right needs parens for Or? no, left-assoc), 2 under /\
        match f:
            case Atom(name):
                return name
            case Top():
                return "T"
            case Bot():
                return "F"
            case And(l, r):
                s = f"{go(l, 2)} /\\ {go(r, 3)}"
                return f"({s})" if full_parens or ctx >= 3 else s
            case Or(l, r):
                s = f"{go(l, 1)} \\/ {go(r, 2)}"
                return f"({s})" if full_parens or ctx >= 2 else s
        raise TypeError(f)

    return go(a, 0)


# ---------------------------------------------------------------------------
# Sequent parser

_KEYWORDS = {
    "T", "F", "I", "S0", "S0op", "o", "oop",
    "wbox", "wdia", "fdia", "fbox", "cap", "cup", "capop", "cupop",
}

_SEQ_TOKEN = re.compile(r"\s*(\|-|;|>|\*|\(|\)|[a-zA-Z][a-zA-Z0-9_]*)")


def _tokenize_sequent(text: str) -> list[tuple[str, int]]:
    toks, pos = [], 0
    while pos < len(text):
        m = _SEQ_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise SyntaxError_(f"unexpected character {text[pos]!r}", pos)
            break
        toks.append((m.group(1), m.start(1)))
        pos = m.end()
    return toks


class _SortVar:
    """Union-find node tracking an unresolved P/Pop sort."""

    __slots__ = ("parent", "value")

    def __init__(self) -> None:
        self.parent: _SortVar | None = None
        self.value: MtType | None = None

    def find(self) -> "_SortVar":
        v = self
        while v.parent is not None:
            v = v.parent
        if self is not v:
            self.parent = v
        return v


def _unify(a: _SortVar, b: _SortVar, where: str) -> None:
    ra, rb = a.find(), b.find()
    if ra is rb:
        return
    if ra.value is not None and rb.value is not None and ra.value is not rb.value:
        raise SortError(f"sort clash at {where}: {ra.value.value} vs {rb.value.value}")
    if ra.value is None:
        ra.parent = rb
    else:
        rb.parent = ra


def _assign(v: _SortVar, sort: MtType, where: str) -> None:
    r = v.find()
    if r.value is None:
        r.value = sort
    elif r.value is not sort:
        raise SortError(f"sort clash at {where}: {r.value.value} vs {sort.value}")


# Raw parse nodes carry (op, children, offset) and are elaborated afterwards.
_RawNode = tuple


def _parse_struct_tokens(toks: list[tuple[str, int]], text_len: int) -> tuple[_RawNode, int]:
    pos = 0

    def peek() -> str | None:
        return toks[pos][0] if pos < len(toks) else None

    def off() -> int:
        return toks[pos][1] if pos < len(toks) else text_len

    def unary() -> _RawNode:
        nonlocal pos
        tok = peek()
        o = off()
        if tok is None:
            raise SyntaxError_("unexpected end of input", o)
        if tok in ("wbox", "wdia", "fdia", "fbox", "o", "oop", "*"):
            pos += 1
            return (tok, [unary()], o)
        if tok == "(":
            pos += 1
            n = supexpr()
            if peek() != ")":
                raise SyntaxError_("expected ')'", off())
            pos += 1
            return n
        if tok in ("T", "F", "I", "S0", "S0op"):
            pos += 1
            return (tok, [], o)
        if tok is not None and re.fullmatch(r"[a-z][a-zA-Z0-9_]*", tok) and tok not in _KEYWORDS:
            pos += 1
            return ("atom", [tok], o)
        raise SyntaxError_(f"unexpected token {tok!r}", o)

    def capexpr() -> _RawNode:
        nonlocal pos
        n = unary()
        while peek() in ("cap", "cup", "capop", "cupop"):
            op = peek()
            o = off()
            pos += 1
            n = (op, [n, unary()], o)
        return n

    def dotexpr() -> _RawNode:
        nonlocal pos
        n = capexpr()
        while peek() == ";":
            o = off()
            pos += 1
            n = (";", [n, capexpr()], o)
        return n

    def supexpr() -> _RawNode:
        nonlocal pos
        n = dotexpr()
        if peek() == ">":
            o = off()
            pos += 1
            return (">", [n, supexpr()], o)  # right-associative
        return n

    node = supexpr()
    return node, pos


def _elaborate(node: _RawNode):
    """Return (is_term, sortvar, build) for a raw node.

    ``build()`` is called once sorts are resolved and produces either an
    MtTerm (if the subtree is purely operational) or a Structure.
    """
    op, children, o = node

    def fixed(sort: MtType) -> _SortVar:
        v = _SortVar()
        v.value = sort
        return v

    if op == "atom":
        return True, fixed(MtType.L), lambda: TmAtom(children[0])
    if op == "T":
        return True, fixed(MtType.L), lambda: TmTop()
    if op == "F":
        return True, fixed(MtType.L), lambda: TmBot()
    if op in ("wbox", "wdia", "fdia", "fbox"):
        is_t, sv, build = _elaborate(children[0])
        if not is_t:
            raise SortError(f"{op} must be applied to an operational term")
        arg_sort, res_sort, ctor = {
            "wbox": (MtType.L, MtType.P, WBox),
            "wdia": (MtType.L, MtType.POP, WDia),
            "fdia": (MtType.P, MtType.L, BDia),
            "fbox": (MtType.POP, MtType.L, BBox),
        }[op]
        _assign(sv, arg_sort, f"argument of {op}")
        return True, fixed(res_sort), lambda: ctor(build())
    if op in ("cap", "cup", "capop", "cupop"):
        lt, lv, lbuild = _elaborate(children[0])
        rt, rv, rbuild = _elaborate(children[1])
        if lt and rt:
            _unify(lv, rv, op)
            if op in ("capop", "cupop"):
                _assign(lv, MtType.POP, op)
            sv = lv

            def build_term(lv=lv, lbuild=lbuild, rbuild=rbuild, op=op):
                sort = lv.find().value or MtType.P
                ctor = {
                    ("cap", MtType.P): Cap, ("cup", MtType.P): Cup,
                    ("cap", MtType.POP): CapOp, ("cup", MtType.POP): CupOp,
                    ("capop", MtType.POP): CapOp, ("cupop", MtType.POP): CupOp,
                }.get((op, sort))
                if ctor is None:
                    raise SortError(f"{op} at sort {sort.value}")
                return ctor(lbuild(), rbuild())

            return True, sv, build_term
        raise SortError(f"{op} must join two operational terms")
    # structural operators: result is a Structure
    if op in (";", ">"):
        lt, lv, lbuild = _elaborate(children[0])
        rt, rv, rbuild = _elaborate(children[1])
        _unify(lv, rv, op)
        sv = lv

        def build_bin(lv=lv, lt=lt, rt=rt, lbuild=lbuild, rbuild=rbuild, op=op):
            sort = lv.find().value or MtType.P
            ctor = {(";", MtType.P): Dot, (";", MtType.POP): DotOp,
                    (">", MtType.P): Sup, (">", MtType.POP): SupOp}.get((op, sort))
            if ctor is None:
                raise SortError(f"{op!r} at sort {sort.value}")
            l = lbuild() if not lt else SLeaf(lbuild())
            r = rbuild() if not rt else SLeaf(rbuild())
            return ctor(l, r)

        return False, sv, build_bin
    if op in ("o", "oop"):
        is_t, sv, build = _elaborate(children[0])
        _assign(sv, MtType.L, f"argument of {op}")
        res = _SortVar()
        if op == "oop":
            res.value = MtType.POP

        def build_circ(res=res, is_t=is_t, build=build):
            sort = res.find().value or MtType.P
            arg = SLeaf(build()) if is_t else build()
            return Circ(arg) if sort is MtType.P else CircOp(arg)

        return False, res, build_circ
    if op == "*":
        is_t, sv, build = _elaborate(children[0])

        def build_bullet(sv=sv, is_t=is_t, build=build):
            sort = sv.find().value or MtType.P
            arg = SLeaf(build()) if is_t else build()
            return Bullet(arg) if sort is MtType.P else BulletOp(arg)

        return False, fixed(MtType.L), build_bullet
    if op == "I":
        return False, fixed(MtType.L), lambda: IConst()
    if op in ("S0", "S0op"):
        sv = _SortVar()
        if op == "S0op":
            sv.value = MtType.POP

        def build_sc(sv=sv):
            sort = sv.find().value or MtType.P
            return SCirc() if sort is MtType.P else SCircOp()

        return False, sv, build_sc
    raise SyntaxError_(f"unknown node {op!r}", o)


def parse_structure(text: str, sort: MtType | None = None) -> Structure:
    toks = _tokenize_sequent(text)
    node, used = _parse_struct_tokens(toks, len(text))
    if used != len(toks):
        raise SyntaxError_("trailing input", toks[used][1])
    is_t, sv, build = _elaborate(node)
    if sort is not None:
        _assign(sv, sort, "structure")
    s = SLeaf(build()) if is_t else build()
    check_structure(s)
    return s


def parse_term(text: str, sort: MtType | None = None) -> MtTerm:
    toks = _tokenize_sequent(text)
    node, used = _parse_struct_tokens(toks, len(text))
    if used != len(toks):
        raise SyntaxError_("trailing input", toks[used][1])
    is_t, sv, build = _elaborate(node)
    if not is_t:
        raise SortError("not an operational term")
    if sort is not None:
        _assign(sv, sort, "term")
    t = build()
    check_term(t)
    return t


def parse_sequent(text: str) -> Sequent:
    toks = _tokenize_sequent(text)
    split = [i for i, (tok, _) in enumerate(toks) if tok == "|-"]
    if len(split) != 1:
        raise SyntaxError_("sequent needs exactly one '|-'", 0 if not split else toks[split[1]][1])
    i = split[0]
    lnode, lused = _parse_struct_tokens(toks[:i], len(text))
    if lused != i:
        raise SyntaxError_("trailing input before '|-'", toks[lused][1])
    rnode, rused = _parse_struct_tokens(toks[i + 1:], len(text))
    if i + 1 + rused != len(toks):
        raise SyntaxError_("trailing input", toks[i + 1 + rused][1])
    lt, lv, lbuild = _elaborate(lnode)
    rt, rv, rbuild = _elaborate(rnode)
    _unify(lv, rv, "'|-'")
    left = SLeaf(lbuild()) if lt else lbuild()
    right = SLeaf(rbuild()) if rt else rbuild()
    return Sequent(left, right)


# ---------------------------------------------------------------------------
# Printers

# Precedence levels: 0 top, 1 ">", 2 ";", 3 cap/cup, 4 unary/atomic.


def print_term(t: MtTerm, full_parens: bool = False) -> str:
    def arg(u: MtTerm) -> str:
        txt = go(u, 0)
        return f"({txt})" if term_args(u) and not full_parens else txt

    def go(u: MtTerm, ctx: int) -> str:
        match u:
            case TmAtom(name):
                return name
            case TmTop():
                return "T"
            case TmBot():
                return "F"
            case WBox(a):
                return wrap(f"wbox {arg(a)}", 4, ctx)
            case WDia(a):
                return wrap(f"wdia {arg(a)}", 4, ctx)
            case BDia(a):
                return wrap(f"fdia {arg(a)}", 4, ctx)
            case BBox(a):
                return wrap(f"fbox {arg(a)}", 4, ctx)
            case Cap(l, r):
                return wrap(f"{go(l, 3)} cap {go(r, 4)}", 3, ctx)
            case Cup(l, r):
                return wrap(f"{go(l, 3)} cup {go(r, 4)}", 3, ctx)
            case CapOp(l, r):
                return wrap(f"{go(l, 3)} capop {go(r, 4)}", 3, ctx)
            case CupOp(l, r):
                return wrap(f"{go(l, 3)} cupop {go(r, 4)}", 3, ctx)
        raise TypeError(u)

    def wrap(s: str, level: int, ctx: int) -> str:
        return f"({s})" if full_parens or ctx > level else s

    return go(t, 0)


def _print_struct(s: Structure, ctx: int, full_parens: bool, mark_ops: bool) -> str:
    def wrap(txt: str, level: int) -> str:
        return f"({txt})" if full_parens or ctx > level else txt

    go = lambda n, c: _print_struct(n, c, full_parens, mark_ops)

    def uarg(a: Structure) -> str:
        txt = go(a, 0)
        compound = bool(struct_args(a)) or (isinstance(a, SLeaf) and term_args(a.term))
        return f"({txt})" if compound and not full_parens else txt

    match s:
        case SLeaf(t):
            return print_term(t, full_parens)
        case IConst():
            return "I"
        case SCirc():
            return "S0"
        case SCircOp():
            return "S0op" if mark_ops else "S0"
        case Circ(a):
            return wrap(f"o {uarg(a)}", 4)
        case CircOp(a):
            return wrap(f"{'oop' if mark_ops else 'o'} {uarg(a)}", 4)
        case Bullet(a) | BulletOp(a):
            return wrap(f"* {uarg(a)}", 4)
        case Dot(l, r) | DotOp(l, r):
            return wrap(f"{go(l, 2)} ; {go(r, 3)}", 2)
        case Sup(l, r) | SupOp(l, r):
            return wrap(f"{go(l, 2)} > {go(r, 1)}", 1)
    raise TypeError(s)


def print_structure(s: Structure, full_parens: bool = False) -> str:
    txt = _print_struct(s, 0, full_parens, mark_ops=False)
    try:
        if parse_structure(txt, struct_sort(s)) == s:
            return txt
    except (SyntaxError_, SortError):
        pass
    return _print_struct(s, 0, full_parens, mark_ops=True)


def print_sequent(s: Sequent, full_parens: bool = False) -> str:
    txt = (
        f"{_print_struct(s.left, 0, full_parens, False)} |- "
        f"{_print_struct(s.right, 0, full_parens, False)}"
    )
    try:
        if parse_sequent(txt) == s:
            return txt
    except (SyntaxError_, SortError):
        pass
    # P/Pop ambiguity not forced by any leaf: re-render with explicit markers
    return (
        f"{_print_struct(s.left, 0, full_parens, True)} |- "
        f"{_print_struct(s.right, 0, full_parens, True)}"
    )
