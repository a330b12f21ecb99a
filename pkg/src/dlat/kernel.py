"""Derivation trees, local proof checking, and the display-property engine.

Proof trees store rule names only; substitutions are re-derived at check
time by matching, so the kernel stays the single source of truth.  Partial
proofs (HYP leaves) are first class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from . import rules as R
from .syntax import (
    Bullet, BulletOp, Circ, CircOp, Dot, DotOp, MtType, Polarity, Sequent,
    SLeaf, Structure, Sup, SupOp, Path, PathError, node_at, polarity_at,
    print_sequent, parse_sequent, struct_args,
)

HYP = "HYP"


@dataclass(frozen=True)
class Derivation:
    rule: str  # rule name, or HYP for an unproved hypothesis leaf
    conclusion: Sequent
    premises: tuple["Derivation", ...] = ()
    backward: bool = False  # invertible rule applied premise-ward

    def __post_init__(self) -> None:
        if self.rule == HYP and self.premises:
            raise ValueError("hypothesis leaves have no premises")

    def nodes(self, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], "Derivation"]]:
        yield path, self
        for i, p in enumerate(self.premises):
            yield from p.nodes(path + (i,))

    def at(self, path: tuple[int, ...]) -> "Derivation":
        d = self
        for i in path:
            if not 0 <= i < len(d.premises):
                raise PathError(f"no derivation node at {path}")
            d = d.premises[i]
        return d

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def __str__(self) -> str:
        return to_proof_text(self)


def replace_node(d: Derivation, path: tuple[int, ...], new: Derivation) -> Derivation:
    if not path:
        return new
    i = path[0]
    prems = list(d.premises)
    prems[i] = replace_node(prems[i], path[1:], new)
    return Derivation(d.rule, d.conclusion, tuple(prems), d.backward)


@dataclass
class CheckFailure:
    path: tuple[int, ...]
    message: str
    expected: list[Sequent] = field(default_factory=list)
    found: list[Sequent] = field(default_factory=list)

    def __str__(self) -> str:
        s = f"at node {list(self.path)}: {self.message}"
        if self.expected:
            s += "; expected premises: " + " / ".join(map(str, self.expected))
        if self.found:
            s += "; found: " + " / ".join(map(str, self.found))
        return s


@dataclass
class CheckReport:
    ok: bool
    failures: list[CheckFailure] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _schema_for(rule: str, backward: bool) -> R.RuleSchema:
    schema = R.rule_named(rule)
    if backward:
        schema = R.inverse_schema(schema)
    return schema


def _node_matches(d: Derivation) -> str | None:
    """None if the node is a correct rule application, else a message."""
    try:
        schema = _schema_for(d.rule, d.backward)
    except (KeyError, R.KindError) as e:
        return str(e)
    subs = R.match(schema, d.conclusion)
    if not subs:
        return f"conclusion does not match {schema.name}"
    sub = subs[0]
    if len(schema.premises) != len(d.premises):
        return (f"{schema.name} needs {len(schema.premises)} premises, "
                f"found {len(d.premises)}")
    # cut formula and other premise-only variables: read them off the premises
    bindings = dict(sub.bindings)
    uniform = sub.uniform
    for pat, prem in zip(schema.premises, d.premises):
        got = R.match_pattern(pat, prem.conclusion, bindings, uniform)
        if got is None:
            return f"premise mismatch for {schema.name}"
        bindings, uniform = got.bindings, got.uniform
    try:
        prems, concl = R.instantiate(schema, R.Substitution(bindings, uniform))
    except Exception as e:  # noqa: BLE001 - report, never throw
        return f"instantiation failed: {e}"
    if concl != d.conclusion:
        return "instantiated conclusion differs"
    if [p.conclusion for p in d.premises] != prems:
        return "instantiated premises differ"
    return None


def check(d: Derivation, allow_hypotheses: bool = False) -> CheckReport:
    """Locally verify every node; reports the first failure per subtree."""
    failures: list[CheckFailure] = []
    for path, node in d.nodes():
        if node.rule == HYP:
            if not allow_hypotheses:
                failures.append(CheckFailure(path, "unproved hypothesis leaf"))
            continue
        msg = _node_matches(node)
        if msg is not None:
            try:
                schema = _schema_for(node.rule, node.backward)
                subs = R.match(schema, node.conclusion)
                expected = []
                if subs is not None and subs:
                    bindings = dict(subs[0].bindings)
                    uniform = subs[0].uniform
                    for pat, prem in zip(schema.premises, node.premises):
                        got = R.match_pattern(pat, prem.conclusion, bindings, uniform)
                        if got is not None:
                            bindings, uniform = got.bindings, got.uniform
                    expected, _ = R.instantiate(schema, R.Substitution(bindings, uniform))
            except Exception:  # noqa: BLE001
                expected = []
            failures.append(CheckFailure(
                path, msg, expected, [p.conclusion for p in node.premises]))
    return CheckReport(not failures, failures)


def is_cut_free(d: Derivation) -> bool:
    return all(node.rule not in ("Cut_L", "Cut_P") for _, node in d.nodes())


def uses_rule(d: Derivation, name: str) -> bool:
    return any(node.rule == name for _, node in d.nodes())


# ---------------------------------------------------------------------------
# Forward construction helpers (used by the generators)


def hyp(s: Sequent) -> Derivation:
    return Derivation(HYP, s)


def apply_rule(name: str, *premises: Derivation, backward: bool = False,
               **extra: object) -> Derivation:
    """Apply a rule forward: premises in, conclusion computed.

    ``extra`` supplies conclusion-only metavariables (e.g. ``U`` for W,
    ``Y`` for IW) as Structures.
    """
    schema = _schema_for(name, backward)
    if len(premises) != len(schema.premises):
        raise R.KindError(f"{name} needs {len(schema.premises)} premises")
    bindings: dict = dict(extra)
    uniform = None
    for pat, prem in zip(schema.premises, premises):
        got = R.match_pattern(pat, prem.conclusion, bindings, uniform)
        if got is None:
            raise R.KindError(
                f"premise {prem.conclusion} does not fit {name}")
        bindings, uniform = got.bindings, got.uniform
    _, concl = R.instantiate(schema, R.Substitution(bindings, uniform))
    return Derivation(name, concl, tuple(premises), backward)


# ---------------------------------------------------------------------------
# Display engine


class DisplayError(Exception):
    """The addressed occurrence cannot be displayed (position-incoherent)."""


def display_at(s: Sequent, path: Path) -> Derivation:
    """Isolate the substructure at ``path`` via display postulates only.

    Returns a derivation whose single leaf is HYP(s) and whose conclusion
    has the target as the whole precedent (if its polarity is precedent)
    or the whole succedent.  Deterministic: peels the outermost context
    connective at each step; E is inserted exactly when the target sits in
    the left argument of a Dot.
    """
    node_at(s, path)  # raises PathError if dangling
    d = hyp(s)
    side = path[0]
    rest = list(path[1:])
    while rest:
        here = d.conclusion.left if side == "left" else d.conclusion.right
        i = rest.pop(0)
        if side == "left":
            match here:
                case Bullet(_):
                    d = apply_rule("D_PL_left", d, backward=True)
                case BulletOp(_):
                    raise DisplayError(f"bullet-op in precedent position: {here}")
                case CircOp(_):
                    d = apply_rule("D_PL_right", d)
                case Circ(_):
                    raise DisplayError(f"circ in precedent position: {here}")
                case Dot(_, _) | DotOp(_, _):
                    if i == 0:
                        d = apply_rule("E_left", d)
                    d = apply_rule("D_P_left", d)
                case Sup(_, _) | SupOp(_, _):
                    # T>S |- U  ~>  S |- T;U : S is displayed, T moves right
                    d = apply_rule("D_P_right", d, backward=True)
                    if i == 0:
                        side = "right"
                        rest.insert(0, 0)
                case _:
                    raise PathError(f"cannot descend into {here}")
        else:
            match here:
                case BulletOp(_):
                    d = apply_rule("D_PL_right", d, backward=True)
                case Bullet(_):
                    raise DisplayError(f"bullet in succedent position: {here}")
                case Circ(_):
                    d = apply_rule("D_PL_left", d)
                case CircOp(_):
                    raise DisplayError(f"circ-op in succedent position: {here}")
                case Dot(_, _) | DotOp(_, _):
                    if i == 0:
                        d = apply_rule("E_right", d)
                    d = apply_rule("D_P_right", d)
                case Sup(_, _) | SupOp(_, _):
                    # T |- S>U  ~>  S;T |- U : U is displayed, S moves left
                    d = apply_rule("D_P_left", d, backward=True)
                    if i == 0:
                        side = "left"
                        rest.insert(0, 0)
                case _:
                    raise PathError(f"cannot descend into {here}")
    return d


def display_leaf_and_steps(d: Derivation) -> tuple[Sequent, list[Derivation]]:
    """The HYP leaf and the chain of display steps of a display derivation."""
    steps = []
    node = d
    while node.rule != HYP:
        steps.append(node)
        (node,) = node.premises
    return node.conclusion, steps


def invert_display(d: Derivation, new_leaf: Derivation) -> Derivation:
    """Replay a display derivation's steps downward from ``new_leaf``.

    ``d`` must be a chain of display/E steps over a HYP leaf, as produced
    by :func:`display_at`.  The replay starts from ``new_leaf`` (whose
    conclusion plays the role of d's conclusion with the displayed slot
    replaced) and re-applies the inverted steps in reverse order, ending in
    a sequent shaped like d's original leaf.
    """
    _, steps = display_leaf_and_steps(d)  # root (last step) first
    out = new_leaf
    for step in steps:
        name = step.rule
        if name in ("E_left", "E_right"):
            out = apply_rule(name, out)
        else:
            out = apply_rule(name, out, backward=not step.backward)
    return out


# ---------------------------------------------------------------------------
# Proof file format (s-expressions with quoted sequents)


def to_proof_text(d: Derivation, indent: int = 0) -> str:
    pad = "  " * indent
    seq = print_sequent(d.conclusion)
    if d.rule == HYP:
        return f'{pad}(HYP "{seq}")'
    name = d.rule + ("~" if d.backward else "")
    if not d.premises:
        return f'{pad}({name} "{seq}")'
    inner = "\n".join(to_proof_text(p, indent + 1) for p in d.premises)
    return f'{pad}({name} "{seq}"\n{inner})'


class ProofParseError(Exception):
    pass


def _sexp_tokens(text: str) -> Iterator[str]:
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            yield c
            i += 1
        elif c == '"':
            j = text.index('"', i + 1)
            yield text[i : j + 1]
            i = j + 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in '()"':
                j += 1
            yield text[i:j]
            i = j


def from_proof_text(text: str) -> Derivation:
    toks = list(_sexp_tokens(text))
    pos = 0

    def parse() -> Derivation:
        nonlocal pos
        if pos >= len(toks) or toks[pos] != "(":
            raise ProofParseError(f"expected '(' at token {pos}")
        pos += 1
        name = toks[pos]
        pos += 1
        if not (toks[pos].startswith('"') and toks[pos].endswith('"')):
            raise ProofParseError(f"expected quoted sequent after {name}")
        seq = parse_sequent(toks[pos][1:-1])
        pos += 1
        prems = []
        while pos < len(toks) and toks[pos] == "(":
            prems.append(parse())
        if pos >= len(toks) or toks[pos] != ")":
            raise ProofParseError(f"expected ')' at token {pos}")
        pos += 1
        backward = name.endswith("~")
        if backward:
            name = name[:-1]
        return Derivation(name, seq, tuple(prems), backward)

    d = parse()
    if pos != len(toks):
        raise ProofParseError("trailing input in proof file")
    return d
