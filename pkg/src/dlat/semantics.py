"""Finite bounded lattices, their heterogeneous double representation,
term/structure evaluation, rule soundness checks, and countermodel search.

Elements of a lattice are integers 0..n-1 listed in some linear extension,
so 0 is always bottom and n-1 top.  The two powerset components of the
double representation are plain frozensets of element indices: the
down-set algebra is ordered by inclusion, the up-set algebra by reverse
inclusion (so its meet is set union and its join set intersection).
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from . import rules as R
from .syntax import (
    And, Atom, BBox, BDia, Bot, Bullet, BulletOp, Cap, CapOp, Circ, CircOp,
    Cup, CupOp, Dot, DotOp, Formula, IConst, MtTerm, MtType, Or, Polarity,
    SCirc, SCircOp, SLeaf, Sequent, Structure, Sup, SupOp, TmAtom, TmBot,
    TmTop, Top, WBox, WDia, struct_atoms, struct_sort,
)


class LatticeError(Exception):
    pass


@dataclass(frozen=True)
class FiniteLattice:
    name: str
    n: int
    leq: tuple[tuple[bool, ...], ...]

    def __post_init__(self) -> None:
        n, leq = self.n, self.leq
        for i in range(n):
            if not leq[i][i]:
                raise LatticeError("leq not reflexive")
            for j in range(n):
                if leq[i][j] and leq[j][i] and i != j:
                    raise LatticeError("leq not antisymmetric")
                for k in range(n):
                    if leq[i][j] and leq[j][k] and not leq[i][k]:
                        raise LatticeError("leq not transitive")
        object.__setattr__(self, "_meet", _op_table(leq, lower=True))
        object.__setattr__(self, "_join", _op_table(leq, lower=False))

    # tables are attached in __post_init__
    def meet(self, a: int, b: int) -> int:
        return self._meet[a][b]  # type: ignore[attr-defined]

    def join(self, a: int, b: int) -> int:
        return self._join[a][b]  # type: ignore[attr-defined]

    @property
    def bot(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.n - 1

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def down(self, a: int) -> frozenset[int]:
        return frozenset(b for b in range(self.n) if self.leq[b][a])

    def up(self, a: int) -> frozenset[int]:
        return frozenset(b for b in range(self.n) if self.leq[a][b])

    def join_set(self, s: Iterable[int]) -> int:
        out = 0
        for a in s:
            out = self.join(out, a)
        return out

    def meet_set(self, s: Iterable[int]) -> int:
        out = self.n - 1
        for a in s:
            out = self.meet(out, a)
        return out

    def is_distributive(self) -> bool:
        rng = range(self.n)
        return all(
            self.meet(a, self.join(b, c))
            == self.join(self.meet(a, b), self.meet(a, c))
            for a in rng for b in rng for c in rng
        )

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for a in range(self.n):
            for b in range(self.n):
                if a != b and self.leq[a][b]:
                    if not any(self.leq[a][c] and self.leq[c][b]
                               and c not in (a, b) for c in range(self.n)):
                        out.append((a, b))
        return out

    def __repr__(self) -> str:
        return f"FiniteLattice({self.name}, n={self.n})"


def _op_table(leq, lower: bool):
    n = len(leq)
    table = []
    for a in range(n):
        row = []
        for b in range(n):
            if lower:
                bounds = [c for c in range(n) if leq[c][a] and leq[c][b]]
                best = [c for c in bounds if all(leq[d][c] for d in bounds)]
            else:
                bounds = [c for c in range(n) if leq[a][c] and leq[b][c]]
                best = [c for c in bounds if all(leq[c][d] for d in bounds)]
            if len(best) != 1:
                kind = "meet" if lower else "join"
                raise LatticeError(f"no {kind} for {a},{b}")
            row.append(best[0])
        table.append(tuple(row))
    return tuple(table)


def lattice_from_pairs(name: str, n: int, pairs: Iterable[tuple[int, int]]) -> FiniteLattice:
    """Build from a covering-or-order relation given as (lower, upper) pairs;
    the reflexive-transitive closure is taken automatically."""
    leq = [[i == j for j in range(n)] for i in range(n)]
    for a, b in pairs:
        leq[a][b] = True
    for k in range(n):
        for i in range(n):
            if leq[i][k]:
                for j in range(n):
                    if leq[k][j]:
                        leq[i][j] = True
    return FiniteLattice(name, n, tuple(tuple(row) for row in leq))


def chain(n: int) -> FiniteLattice:
    return lattice_from_pairs(f"chain{n}", n, [(i, i + 1) for i in range(n - 1)])


def m3() -> FiniteLattice:
    # 0 bottom, 1/2/3 atoms, 4 top
    return lattice_from_pairs("m3", 5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])


def n5() -> FiniteLattice:
    # 0 < 1 < 3 < 4 and 0 < 2 < 4, with 1,3 incomparable to 2
    return lattice_from_pairs("n5", 5, [(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)])


_NAMED = {
    "chain2": lambda: chain(2),
    "chain3": lambda: chain(3),
    "m3": m3,
    "n5": n5,
}


def named_lattice(name: str) -> FiniteLattice:
    try:
        return _NAMED[name]()
    except KeyError:
        raise LatticeError(f"unknown lattice {name!r}; known: {sorted(_NAMED)}") from None


def lattice_from_json(text: str) -> FiniteLattice:
    data = json.loads(text)
    elems = data["elements"]
    index = {e: i for i, e in enumerate(elems)}
    pairs = [(index[a], index[b]) for a, b in data["leq"]]
    return lattice_from_pairs(data.get("name", "file"), len(elems), pairs)


def lattice_to_json(l: FiniteLattice) -> str:
    pairs = [[a, b] for a, b in l.covers()]
    return json.dumps({"name": l.name, "elements": list(range(l.n)), "leq": pairs})


# ---------------------------------------------------------------------------
# Enumeration of all bounded lattices up to isomorphism


def _canonical_key(leq: tuple[tuple[bool, ...], ...]) -> tuple:
    """Minimum of the relation matrix over all permutations; invariants
    (down-set and up-set sizes) prune the permutation search."""
    n = len(leq)
    downs = [sum(leq[j][i] for j in range(n)) for i in range(n)]
    ups = [sum(leq[i][j] for j in range(n)) for i in range(n)]
    sig = [(downs[i], ups[i]) for i in range(n)]
    best: tuple | None = None
    groups: dict[tuple[int, int], list[int]] = {}
    for i in range(n):
        groups.setdefault(sig[i], []).append(i)
    ordered = sorted(groups)
    perms_per_group = [list(itertools.permutations(groups[s])) for s in ordered]
    for combo in itertools.product(*perms_per_group):
        perm: list[int] = [0] * n
        slot = 0
        for g in combo:
            for orig in g:
                perm[slot] = orig
                slot += 1
        key = tuple(leq[perm[i]][perm[j]] for i in range(n) for j in range(n))
        if best is None or key < best:
            best = key
    assert best is not None
    return best


def _labelled_lattices(n: int) -> Iterator[tuple[tuple[bool, ...], ...]]:
    """All labelled lattices on 0..n-1 whose identity is a linear extension.

    Elements are added in order; each new element picks the down-set of the
    already-placed elements it dominates.  Meets of existing pairs must
    already exist (a meet precedes both arguments in any linear extension),
    which prunes hard; joins and bounds are checked at the end.
    """
    if n == 1:
        yield ((True,),)
        return

    leq = [[i == j for j in range(n)] for i in range(n)]

    def glb_exists(j: int) -> bool:
        # after adding j, every pair (i, j) needs a glb among 0..j
        for i in range(j):
            lows = [c for c in range(j + 1) if leq[c][i] and leq[c][j]]
            if not any(all(leq[d][c] for d in lows) for c in lows):
                return False
        return True

    def downsets(j: int) -> Iterator[frozenset[int]]:
        # down-closed subsets of 0..j-1 containing bottom 0
        base = list(range(1, j))
        for bits in itertools.product((False, True), repeat=len(base)):
            ds = {0} | {base[k] for k in range(len(base)) if bits[k]}
            if all(all(leq[c][i] <= (c in ds) for c in range(j)) for i in ds):
                # down-closure: c <= i in ds implies c in ds
                if all((c in ds) for i in ds for c in range(j) if leq[c][i]):
                    yield frozenset(ds)

    def place(j: int) -> Iterator[None]:
        if j == n:
            yield None
            return
        for ds in downsets(j):
            if j == n - 1 and len(ds) != n - 1:
                continue  # top must dominate everything
            for i in ds:
                leq[i][j] = True
            if glb_exists(j):
                yield from place(j + 1)
            for i in ds:
                leq[i][j] = False

    for _ in place(1):
        # final checks: all joins exist (glbs hold by construction)
        ok = True
        for a in range(n):
            for b in range(a + 1, n):
                ups = [c for c in range(n) if leq[a][c] and leq[b][c]]
                if not any(all(leq[c][d] for d in ups) for c in ups):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield tuple(tuple(row) for row in leq)


@lru_cache(maxsize=None)
def _lattices_of_size(n: int) -> tuple[FiniteLattice, ...]:
    seen: set[tuple] = set()
    out = []
    for leq in _labelled_lattices(n):
        key = _canonical_key(leq)
        if key in seen:
            continue
        seen.add(key)
        out.append(FiniteLattice(f"lat{n}_{len(out)}", n, leq))
    return tuple(out)


def enumerate_lattices(max_size: int) -> Iterator[FiniteLattice]:
    """All non-isomorphic bounded lattices with at most ``max_size``
    elements (max_size <= 7), smallest first."""
    if max_size > 7:
        raise LatticeError("enumeration capped at 7 elements")
    for n in range(1, max_size + 1):
        yield from _lattices_of_size(n)


def default_pool(max_size: int = 5) -> list[FiniteLattice]:
    return list(enumerate_lattices(max_size))


# ---------------------------------------------------------------------------
# Heterogeneous double representation


class HeterogeneousAlgebra:
    """A finite lattice together with its down-set and up-set powerset
    components and the four adjoint maps between them."""

    def __init__(self, lattice: FiniteLattice):
        self.lattice = lattice
        self.carrier = frozenset(range(lattice.n))

    # D side (ordered by inclusion)
    def e_ell(self, a: int) -> frozenset[int]:
        return self.lattice.down(a)

    def gamma(self, s: frozenset[int]) -> int:
        return self.lattice.join_set(s)

    # E side (ordered by reverse inclusion)
    def e_r(self, a: int) -> frozenset[int]:
        return self.lattice.up(a)

    def iota(self, s: frozenset[int]) -> int:
        return self.lattice.meet_set(s)

    def le_d(self, x: frozenset[int], y: frozenset[int]) -> bool:
        return x <= y

    def le_e(self, x: frozenset[int], y: frozenset[int]) -> bool:
        return x >= y

    def subsets(self) -> Iterator[frozenset[int]]:
        elems = sorted(self.carrier)
        for k in range(len(elems) + 1):
            for combo in itertools.combinations(elems, k):
                yield frozenset(combo)

    def le(self, sort: MtType, x, y) -> bool:
        if sort is MtType.L:
            return self.lattice.le(x, y)
        if sort is MtType.P:
            return self.le_d(x, y)
        return self.le_e(x, y)


def heterogenize(lattice: FiniteLattice) -> HeterogeneousAlgebra:
    return HeterogeneousAlgebra(lattice)


Valuation = Mapping[str, int]


def eval_formula(a: Formula, lat: FiniteLattice, v: Valuation) -> int:
    match a:
        case Atom(name):
            return v[name]
        case Top():
            return lat.top
        case Bot():
            return lat.bot
        case And(l, r):
            return lat.meet(eval_formula(l, lat, v), eval_formula(r, lat, v))
        case Or(l, r):
            return lat.join(eval_formula(l, lat, v), eval_formula(r, lat, v))
    raise TypeError(a)


def eval_term(t: MtTerm, h: HeterogeneousAlgebra, v: Valuation):
    match t:
        case TmAtom(name):
            return v[name]
        case TmTop():
            return h.lattice.top
        case TmBot():
            return h.lattice.bot
        case BDia(a):
            return h.gamma(eval_term(a, h, v))
        case BBox(a):
            return h.iota(eval_term(a, h, v))
        case WBox(a):
            return h.e_ell(eval_term(a, h, v))
        case WDia(a):
            return h.e_r(eval_term(a, h, v))
        case Cap(l, r):
            return eval_term(l, h, v) & eval_term(r, h, v)
        case Cup(l, r):
            return eval_term(l, h, v) | eval_term(r, h, v)
        case CapOp(l, r):  # meet of the reverse-inclusion order
            return eval_term(l, h, v) | eval_term(r, h, v)
        case CupOp(l, r):
            return eval_term(l, h, v) & eval_term(r, h, v)
    raise TypeError(t)


def eval_structure(s: Structure, pol: Polarity, h: HeterogeneousAlgebra, v: Valuation):
    """Interpret a structure at a position.

    Leaves and the unary multi-type connectives are read off their sorts
    (the unique reading making the display rules adjunctions); the
    position decides only the constants and the binary slot assignment.
    """
    pre = pol is Polarity.PRECEDENT
    match s:
        case SLeaf(t):
            return eval_term(t, h, v)
        case IConst():
            return h.lattice.top if pre else h.lattice.bot
        case Bullet(a):
            return h.gamma(eval_structure(a, pol, h, v))
        case BulletOp(a):
            return h.iota(eval_structure(a, pol, h, v))
        case Circ(a):
            return h.e_ell(eval_structure(a, pol, h, v))
        case CircOp(a):
            return h.e_r(eval_structure(a, pol, h, v))
        case SCirc():  # units of cap / cup in the down-set algebra
            return h.carrier if pre else frozenset()
        case SCircOp():  # units of the reverse-inclusion meet / join
            return frozenset() if pre else h.carrier
        case Dot(l, r):
            x, y = eval_structure(l, pol, h, v), eval_structure(r, pol, h, v)
            return (x & y) if pre else (x | y)
        case DotOp(l, r):
            x, y = eval_structure(l, pol, h, v), eval_structure(r, pol, h, v)
            return (x | y) if pre else (x & y)
        case Sup(l, r):
            x = eval_structure(l, pol.flip(), h, v)  # negative coordinate
            y = eval_structure(r, pol, h, v)
            if pre:
                return y - x  # co-residual of the join
            return (h.carrier - x) | y  # residual of the meet
        case SupOp(l, r):
            x = eval_structure(l, pol.flip(), h, v)
            y = eval_structure(r, pol, h, v)
            if pre:
                return y | (h.carrier - x)
            return y - x
    raise TypeError(s)


def valuations(atoms: Iterable[str], lat: FiniteLattice) -> Iterator[dict[str, int]]:
    names = sorted(set(atoms))
    for combo in itertools.product(range(lat.n), repeat=len(names)):
        yield dict(zip(names, combo))


def sequent_holds(s: Sequent, h: HeterogeneousAlgebra, v: Valuation) -> bool:
    lhs = eval_structure(s.left, Polarity.PRECEDENT, h, v)
    rhs = eval_structure(s.right, Polarity.SUCCEDENT, h, v)
    return h.le(s.sort, lhs, rhs)


def sequent_valid(s: Sequent, h: HeterogeneousAlgebra) -> bool:
    atoms = struct_atoms(s.left) | struct_atoms(s.right)
    return all(sequent_holds(s, h, v) for v in valuations(atoms, h.lattice))


def falsifying_valuation(s: Sequent, h: HeterogeneousAlgebra) -> Valuation | None:
    atoms = struct_atoms(s.left) | struct_atoms(s.right)
    for v in valuations(atoms, h.lattice):
        if not sequent_holds(s, h, v):
            return v
    return None


def countermodel(s: Sequent, pool: Iterable[FiniteLattice]
                 ) -> tuple[FiniteLattice, Valuation] | None:
    for lat in pool:
        v = falsifying_valuation(s, heterogenize(lat))
        if v is not None:
            return lat, v
    return None


# ---------------------------------------------------------------------------
# Rule soundness


def _instance_pool(depth: int, atoms: list[str]):
    """Small exhaustive pools of terms and position-coherent structures,
    per sort, for instantiating rule schemas."""
    terms: dict[MtType, list[MtTerm]] = {MtType.L: [], MtType.P: [], MtType.POP: []}
    terms[MtType.L] = [TmAtom(a) for a in atoms] + [TmTop(), TmBot()]
    for _ in range(depth - 1):
        new_p = [WBox(t) for t in terms[MtType.L]]
        new_pop = [WDia(t) for t in terms[MtType.L]]
        new_l = [BDia(t) for t in terms[MtType.P][:2]] + [BBox(t) for t in terms[MtType.POP][:2]]
        terms[MtType.P] += [t for t in new_p if t not in terms[MtType.P]]
        terms[MtType.POP] += [t for t in new_pop if t not in terms[MtType.POP]]
        terms[MtType.L] += [t for t in new_l if t not in terms[MtType.L]]
    structs: dict[MtType, list[Structure]] = {}
    structs[MtType.L] = [SLeaf(t) for t in terms[MtType.L][:3]] + [IConst()]
    structs[MtType.P] = ([SLeaf(t) for t in terms[MtType.P][:3]]
                         + [SCirc(), Circ(SLeaf(TmAtom(atoms[0])))])
    structs[MtType.POP] = ([SLeaf(t) for t in terms[MtType.POP][:3]]
                          + [SCircOp(), CircOp(SLeaf(TmAtom(atoms[0])))])
    structs[MtType.L] += [Bullet(structs[MtType.P][0]), BulletOp(structs[MtType.POP][0])]
    structs[MtType.P] += [Dot(SLeaf(terms[MtType.P][0]), SCirc())]
    structs[MtType.POP] += [DotOp(SLeaf(terms[MtType.POP][0]), SCircOp())]
    return terms, structs


def rule_instances(schema: R.RuleSchema, depth: int = 2, atoms: tuple[str, ...] = ("p", "q")
                   ) -> Iterator[tuple[list[Sequent], Sequent]]:
    """Exhaustively instantiate a schema over the small pools."""
    terms, structs = _instance_pool(depth, list(atoms))
    variables = schema.variables()
    uniform_needed = any(k in (R.Kind.STRUCT_UNIFORM, R.Kind.TERM_UNIFORM)
                         for k in variables.values())
    sorts = [MtType.P, MtType.POP] if uniform_needed else [None]
    for uniform in sorts:
        domains = []
        names = sorted(variables)
        for name in names:
            kind = variables[name]
            if kind is R.Kind.STRUCT_L:
                domains.append(structs[MtType.L])
            elif kind is R.Kind.STRUCT_P:
                domains.append(structs[MtType.P])
            elif kind is R.Kind.STRUCT_POP:
                domains.append(structs[MtType.POP])
            elif kind is R.Kind.STRUCT_UNIFORM:
                domains.append(structs[uniform])
            elif kind is R.Kind.TERM_L:
                domains.append(terms[MtType.L])
            elif kind is R.Kind.TERM_P:
                domains.append(terms[MtType.P])
            elif kind is R.Kind.TERM_POP:
                domains.append(terms[MtType.POP])
            elif kind is R.Kind.TERM_UNIFORM:
                domains.append(terms[uniform])
            else:  # atom variable
                domains.append([TmAtom(a) for a in atoms])
        for combo in itertools.product(*domains):
            sub = R.Substitution(dict(zip(names, combo)), uniform)
            try:
                yield R.instantiate(schema, sub)
            except Exception:  # noqa: BLE001 - skip ill-kinded combinations
                continue


def rule_sound(schema: R.RuleSchema, h: HeterogeneousAlgebra, trials: int = 200,
               rng: random.Random | None = None, exhaustive: bool = False,
               depth: int = 2, atoms: tuple[str, ...] = ("p", "q")) -> bool:
    """Premises valid at a valuation imply the conclusion at the same one
    (and conversely for invertible rules), over sampled or exhaustive
    small instances."""
    rng = rng or random.Random(0)
    instances = rule_instances(schema, depth, atoms)
    if not exhaustive:
        pool = list(instances)
        instances = iter(rng.sample(pool, min(trials, len(pool))))
    for prems, concl in instances:
        names = set()
        for sq in [concl, *prems]:
            names |= struct_atoms(sq.left) | struct_atoms(sq.right)
        for v in valuations(names, h.lattice):
            if all(sequent_holds(p, h, v) for p in prems) and not sequent_holds(concl, h, v):
                return False
            if schema.invertible and sequent_holds(concl, h, v) and \
                    not all(sequent_holds(p, h, v) for p in prems):
                return False
    return True


# ---------------------------------------------------------------------------
# Transfer of consequence across the translation


def consequence_equiv_check(a: Formula, b: Formula,
                            pool: Iterable[FiniteLattice]) -> bool:
    """On every pool member: a <= b holds under all valuations in the
    lattice iff the translated sequent holds in its double representation."""
    from .translate import ell, rr

    seq = Sequent(SLeaf(ell(a)), SLeaf(rr(b)))
    names = sorted((formula_atoms_of(a) | formula_atoms_of(b)))
    for lat in pool:
        h = heterogenize(lat)
        plain = all(
            lat.le(eval_formula(a, lat, v), eval_formula(b, lat, v))
            for v in valuations(names, lat))
        translated = sequent_valid(seq, h)
        if plain != translated:
            return False
    return True


def formula_atoms_of(a: Formula) -> set[str]:
    from .syntax import formula_atoms

    return formula_atoms(a)
