"""Program representation: expressions, instructions, actions and commands.

Programs are trees of indivisible actions composed by parallelized
sequential composition (``Pseq``), nondeterministic choice and
parallelized iteration.  Shared-variable accesses carry sets of ordering
constraints; fences carry a fence kind plus constraints.  Everything here
is immutable and safe to share between explorations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

# ---------------------------------------------------------------------------
# ordering constraints and variables
# ---------------------------------------------------------------------------

RELAXED = "rlx"
RELEASE = "rel"
ACQUIRE = "acq"
CONSUME = "con"
SEQCST = "sc"

ORDERING_CONSTRAINTS = (RELAXED, RELEASE, ACQUIRE, CONSUME, SEQCST)

# acq_rel is not a constraint of its own: it denotes the set {acquire, release}
ACQ_REL = frozenset({ACQUIRE, RELEASE})

EMPTY_OCS: frozenset = frozenset()
RLX_OCS = frozenset({RELAXED})

LOCAL = "local"
SHARED = "shared"

# fence kinds
STORE_FENCE = "store"
LOAD_FENCE = "load"
FULL_FENCE = "full"


@dataclass(frozen=True)
class VarId:
    name: str
    kind: str  # LOCAL or SHARED

    def __post_init__(self):
        if self.kind not in (LOCAL, SHARED):
            raise ValueError(f"bad variable kind {self.kind!r}")

    @property
    def is_shared(self) -> bool:
        return self.kind == SHARED

    def __str__(self) -> str:
        return self.name


def shared(name: str) -> VarId:
    return VarId(name, SHARED)


def local(name: str) -> VarId:
    return VarId(name, LOCAL)


# Values are plain Python ints and bools; bools and ints are distinct tags
# (``type(v) is bool`` discriminates, since bool subclasses int).
Value = Union[int, bool]


def is_bool_value(v: Value) -> bool:
    return type(v) is bool


# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Value

    def __str__(self) -> str:
        if type(self.value) is bool:
            return "true" if self.value else "false"
        return str(self.value)


@dataclass(frozen=True)
class VarRef:
    var: VarId
    ocs: frozenset = EMPTY_OCS

    def __post_init__(self):
        bad = set(self.ocs) - set(ORDERING_CONSTRAINTS)
        if bad:
            raise ValueError(f"unknown ordering constraints {bad}")
        if self.var.kind == LOCAL and self.ocs:
            raise ValueError(f"local variable {self.var} cannot carry constraints")

    def __str__(self) -> str:
        return render_annotated(self.var, self.ocs)


@dataclass(frozen=True)
class UnOp:
    op: str  # '-' or '!'
    operand: "Expr"

    def __str__(self) -> str:
        return f"{self.op}{_paren(self.operand)}"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"

    def __str__(self) -> str:
        return f"{_paren(self.left)} {self.op} {_paren(self.right)}"


Expr = Union[Const, VarRef, UnOp, BinOp]

#: fixed operator set; no division (undefined cases never exercised)
BIN_OPS = ("+", "-", "*", "==", "!=", "<", "<=", ">", ">=", "&&", "||")
UN_OPS = ("-", "!")

COMPARISONS = ("==", "!=", "<", "<=", ">", ">=")
_NEGATED_CMP = {"==": "!=", "!=": "==", "<": ">=", "<=": ">", ">": "<=", ">=": "<"}


def _paren(e: Expr) -> str:
    if isinstance(e, (Const, VarRef)):
        return str(e)
    return f"({e})"


def render_annotated(var: VarId, ocs: frozenset) -> str:
    """`x` for locals and bare relaxed shared accesses, `x.acq` etc otherwise."""
    if not ocs or ocs == RLX_OCS:
        return var.name
    if ocs == ACQ_REL:
        return f"{var.name}.ar"
    return var.name + "." + ".".join(sorted(ocs))


def ref(var: VarId, ocs: Optional[Iterable[str]] = None) -> VarRef:
    """Reference a variable; shared references default to {relaxed}."""
    if var.kind == LOCAL:
        return VarRef(var, EMPTY_OCS)
    return VarRef(var, frozenset(ocs) if ocs else RLX_OCS)


def negate(e: Expr) -> Expr:
    """Structural boolean negation; flips comparisons so guards stay readable."""
    if isinstance(e, Const) and type(e.value) is bool:
        return Const(not e.value)
    if isinstance(e, UnOp) and e.op == "!":
        return e.operand
    if isinstance(e, BinOp) and e.op in _NEGATED_CMP:
        return BinOp(_NEGATED_CMP[e.op], e.left, e.right)
    return UnOp("!", e)


TRUE = Const(True)
FALSE = Const(False)


def expr_vars(e: Expr) -> frozenset:
    """Free variables of an expression (ordering constraints excluded)."""
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, VarRef):
        return frozenset({e.var})
    if isinstance(e, UnOp):
        return expr_vars(e.operand)
    if isinstance(e, BinOp):
        return expr_vars(e.left) | expr_vars(e.right)
    raise TypeError(e)


def expr_ocs(e: Expr) -> frozenset:
    """getocs over expression syntax."""
    if isinstance(e, Const):
        return EMPTY_OCS
    if isinstance(e, VarRef):
        return e.ocs
    if isinstance(e, UnOp):
        return expr_ocs(e.operand)
    if isinstance(e, BinOp):
        return expr_ocs(e.left) | expr_ocs(e.right)
    raise TypeError(e)


def subst_var(e: Expr, var: VarId, replacement: Expr) -> Expr:
    """Replace every reference to `var` (any constraint set) by `replacement`."""
    if isinstance(e, Const):
        return e
    if isinstance(e, VarRef):
        return replacement if e.var == var else e
    if isinstance(e, UnOp):
        return UnOp(e.op, subst_var(e.operand, var, replacement))
    if isinstance(e, BinOp):
        return BinOp(e.op, subst_var(e.left, var, replacement),
                     subst_var(e.right, var, replacement))
    raise TypeError(e)


def node_count(e: Expr) -> int:
    if isinstance(e, (Const, VarRef)):
        return 1
    if isinstance(e, UnOp):
        return 1 + node_count(e.operand)
    if isinstance(e, BinOp):
        return 1 + node_count(e.left) + node_count(e.right)
    raise TypeError(e)


def var_occurrences(e: Expr) -> int:
    if isinstance(e, Const):
        return 0
    if isinstance(e, VarRef):
        return 1
    if isinstance(e, UnOp):
        return var_occurrences(e.operand)
    if isinstance(e, BinOp):
        return var_occurrences(e.left) + var_occurrences(e.right)
    raise TypeError(e)


# ---------------------------------------------------------------------------
# instructions and actions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Assign:
    target: VarId
    ocs: frozenset
    rhs: Expr

    def __post_init__(self):
        if self.target.kind == LOCAL and self.ocs:
            raise ValueError(f"local target {self.target} cannot carry constraints")

    def __str__(self) -> str:
        return f"{render_annotated(self.target, self.ocs)} := {self.rhs}"


@dataclass(frozen=True)
class Guard:
    cond: Expr

    def __str__(self) -> str:
        return f"<{self.cond}>"


@dataclass(frozen=True)
class Fence:
    fkind: str  # STORE_FENCE | LOAD_FENCE | FULL_FENCE
    ocs: frozenset = EMPTY_OCS

    def __post_init__(self):
        if self.fkind not in (STORE_FENCE, LOAD_FENCE, FULL_FENCE):
            raise ValueError(f"bad fence kind {self.fkind!r}")

    def __str__(self) -> str:
        names = {
            (STORE_FENCE, frozenset({RELEASE})): "rel_fence",
            (LOAD_FENCE, frozenset({ACQUIRE})): "acq_fence",
            (FULL_FENCE, frozenset({SEQCST})): "sc_fence",
        }
        short = names.get((self.fkind, self.ocs))
        if short:
            return short
        if self.ocs:
            return f"fence.{self.fkind}." + ".".join(sorted(self.ocs))
        return f"fence.{self.fkind}"


Instr = Union[Assign, Guard, Fence]

TAU = Guard(TRUE)  # τ: the silent true guard
MAGIC = Guard(FALSE)  # the everywhere-infeasible guard


def assign(var: VarId, rhs: Expr, ocs: Optional[Iterable[str]] = None) -> Assign:
    """Build an assignment; shared targets default to {relaxed}."""
    if var.kind == LOCAL:
        return Assign(var, EMPTY_OCS, rhs)
    return Assign(var, frozenset(ocs) if ocs else RLX_OCS, rhs)


def rel_fence() -> Fence:
    return Fence(STORE_FENCE, frozenset({RELEASE}))


def acq_fence() -> Fence:
    return Fence(LOAD_FENCE, frozenset({ACQUIRE}))


def sc_fence() -> Fence:
    return Fence(FULL_FENCE, frozenset({SEQCST}))


#: an Action is a non-empty sequence of instructions executed as one step
Action = tuple


def action(*instrs: Instr) -> Action:
    if not instrs:
        raise ValueError("actions are non-empty")
    return tuple(instrs)


def render_action(a: Action) -> str:
    return "; ".join(str(i) for i in a)


@dataclass(frozen=True)
class SpecInstr:
    """An instruction paired with its divisibility designation."""

    instr: Instr
    divisible: bool = True

    def __str__(self) -> str:
        return str(self.instr)


# ---------------------------------------------------------------------------
# variable / constraint extraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VarSets:
    wv: frozenset
    rv: frozenset

    @property
    def fv(self) -> frozenset:
        return self.wv | self.rv

    @property
    def sv(self) -> frozenset:
        return frozenset(v for v in self.fv if v.is_shared)

    @property
    def rsv(self) -> frozenset:
        return frozenset(v for v in self.rv if v.is_shared)

    @property
    def wsv(self) -> frozenset:
        return frozenset(v for v in self.wv if v.is_shared)


_EMPTY_VS = VarSets(frozenset(), frozenset())


def var_sets(item) -> VarSets:
    """wv/rv (and derived fv/sv/rsv/wsv) of an instruction, action or command.

    Assignments write their target and read their rhs; guards read their
    condition; fences read and write nothing.  Lifted over actions and
    commands by union.
    """
    if isinstance(item, Assign):
        return VarSets(frozenset({item.target}), expr_vars(item.rhs))
    if isinstance(item, Guard):
        return VarSets(frozenset(), expr_vars(item.cond))
    if isinstance(item, Fence):
        return _EMPTY_VS
    if isinstance(item, SpecInstr):
        return var_sets(item.instr)
    if isinstance(item, tuple):  # Action
        return _union_varsets(var_sets(i) for i in item)
    if isinstance(item, CommandBase):
        return _union_varsets(var_sets(i) for i in item.instructions())
    raise TypeError(item)


def _union_varsets(parts: Iterable[VarSets]) -> VarSets:
    wv: frozenset = frozenset()
    rv: frozenset = frozenset()
    for p in parts:
        wv |= p.wv
        rv |= p.rv
    return VarSets(wv, rv)


def is_store(item) -> bool:
    return bool(var_sets(item).wsv)


def is_load(item) -> bool:
    return bool(var_sets(item).rsv)


@dataclass(frozen=True)
class ConstraintSets:
    ocs: frozenset
    fences: frozenset


def constraint_sets(item) -> ConstraintSets:
    """getocs / getfences over expressions, instructions, actions, commands."""
    if isinstance(item, (Const, VarRef, UnOp, BinOp)):
        return ConstraintSets(expr_ocs(item), frozenset())
    if isinstance(item, Assign):
        return ConstraintSets(item.ocs | expr_ocs(item.rhs), frozenset())
    if isinstance(item, Guard):
        return ConstraintSets(expr_ocs(item.cond), frozenset())
    if isinstance(item, Fence):
        return ConstraintSets(item.ocs, frozenset({item.fkind}))
    if isinstance(item, SpecInstr):
        return constraint_sets(item.instr)
    if isinstance(item, tuple):
        return _union_constraints(constraint_sets(i) for i in item)
    if isinstance(item, CommandBase):
        return _union_constraints(constraint_sets(i) for i in item.instructions())
    raise TypeError(item)


def _union_constraints(parts: Iterable[ConstraintSets]) -> ConstraintSets:
    ocs: frozenset = frozenset()
    fences: frozenset = frozenset()
    for p in parts:
        ocs |= p.ocs
        fences |= p.fences
    return ConstraintSets(ocs, fences)


def get_ocs(item) -> frozenset:
    return constraint_sets(item).ocs


@dataclass(frozen=True)
class DepRelations:
    datadep: bool
    interference_free: bool
    load_indep: bool
    is_store_a: bool
    is_load_a: bool


def dep_relations(a, b) -> DepRelations:
    """Purely syntactic dependency relations between two instructions/actions."""
    va, vb = var_sets(a), var_sets(b)
    return DepRelations(
        datadep=bool(va.wv & vb.rv),
        interference_free=not (va.wv & vb.fv) and not (vb.wv & va.fv),
        load_indep=not (va.rsv & vb.rsv),
        is_store_a=bool(va.wsv),
        is_load_a=bool(va.rsv),
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

SC = "sc"
PAR = "par"
C11 = "c11"  # the configured model

MODEL_REFS = (SC, PAR, C11)


class CommandBase:
    """Common behaviour for command nodes."""

    def instructions(self) -> Iterator[Instr]:
        yield from ()

    def pretty(self, outer: str = "") -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.pretty()


@dataclass(frozen=True)
class Nil(CommandBase):
    def pretty(self, outer: str = "") -> str:
        return "nil"


@dataclass(frozen=True)
class Stmt(CommandBase):
    instrs: tuple  # non-empty tuple of SpecInstr

    def __post_init__(self):
        if not self.instrs:
            raise ValueError("statements are non-empty")

    def instructions(self) -> Iterator[Instr]:
        for si in self.instrs:
            yield si.instr

    def pretty(self, outer: str = "") -> str:
        if len(self.instrs) == 1:
            return str(self.instrs[0])
        return "[" + "; ".join(str(i) for i in self.instrs) + "]"


@dataclass(frozen=True)
class Pseq(CommandBase):
    model: str
    left: "Command"
    right: "Command"

    def __post_init__(self):
        if self.model not in MODEL_REFS:
            raise ValueError(f"bad model ref {self.model!r}")

    def instructions(self) -> Iterator[Instr]:
        yield from self.left.instructions()
        yield from self.right.instructions()

    def pretty(self, outer: str = "") -> str:
        sep = {SC: " ;; ", PAR: " ||| ", C11: " ; "}[self.model]
        s = self.left.pretty("pseq") + sep + self.right.pretty("pseq")
        return f"({s})" if outer else s


@dataclass(frozen=True)
class Choice(CommandBase):
    left: "Command"
    right: "Command"

    def instructions(self) -> Iterator[Instr]:
        yield from self.left.instructions()
        yield from self.right.instructions()

    def pretty(self, outer: str = "") -> str:
        return f"({self.left.pretty('c')} [] {self.right.pretty('c')})"


@dataclass(frozen=True)
class Iterate(CommandBase):
    model: str
    body: "Command"
    #: runtime unfold count; not part of the canonical form
    depth: int = 0

    def __post_init__(self):
        if self.model not in MODEL_REFS:
            raise ValueError(f"bad model ref {self.model!r}")

    def instructions(self) -> Iterator[Instr]:
        yield from self.body.instructions()

    def pretty(self, outer: str = "") -> str:
        return f"({self.body.pretty('i')})*{self.model}"


Command = Union[Nil, Stmt, Pseq, Choice, Iterate]

NIL = Nil()


def stmt(*instrs: Instr, divisible: bool = True) -> Stmt:
    return Stmt(tuple(SpecInstr(i, divisible) for i in instrs))


def pseq(model: str, left: Command, right: Command) -> Command:
    """Pseq constructor erasing Nil units (Nil ⨟m c ≡ c ≡ c ⨟m Nil)."""
    if isinstance(left, Nil):
        return right
    if isinstance(right, Nil):
        return left
    return Pseq(model, left, right)


def seq(model: str, *cmds: Command) -> Command:
    """Right-nested Pseq chain over `cmds`."""
    out: Command = NIL
    for c in reversed(cmds):
        out = pseq(model, c, out)
    return out


def seq_left(model: str, *cmds: Command) -> Command:
    """Left-nested Pseq chain, for the associativity experiments."""
    out: Command = NIL
    for c in cmds:
        out = pseq(model, out, c)
    return out


def canonical(c: Command) -> Command:
    """Erase Nil units recursively; used for duplicate-configuration keys."""
    if isinstance(c, (Nil, Stmt)):
        return c
    if isinstance(c, Pseq):
        return pseq(c.model, canonical(c.left), canonical(c.right))
    if isinstance(c, Choice):
        return Choice(canonical(c.left), canonical(c.right))
    if isinstance(c, Iterate):
        body = canonical(c.body)
        if isinstance(body, Nil):
            return NIL
        return Iterate(c.model, body, c.depth)
    raise TypeError(c)


def erase_depths(c: Command) -> Command:
    if isinstance(c, (Nil, Stmt)):
        return c
    if isinstance(c, Pseq):
        return Pseq(c.model, erase_depths(c.left), erase_depths(c.right))
    if isinstance(c, Choice):
        return Choice(erase_depths(c.left), erase_depths(c.right))
    if isinstance(c, Iterate):
        return Iterate(c.model, erase_depths(c.body), 0)
    raise TypeError(c)


def iterate_depths(c: Command) -> tuple:
    """Unfold depths of all Iterate nodes, in preorder."""
    if isinstance(c, (Nil, Stmt)):
        return ()
    if isinstance(c, (Pseq, Choice)):
        return iterate_depths(c.left) + iterate_depths(c.right)
    if isinstance(c, Iterate):
        return (c.depth,) + iterate_depths(c.body)
    raise TypeError(c)


# ---------------------------------------------------------------------------
# derived constructs (desugar targets contain only core constructors)
# ---------------------------------------------------------------------------


def if_then_else(model: str, cond: Expr, then: Command, els: Command = NIL) -> Command:
    """if^m b then c1 else c2 = (<b> ;m c1) [] (<!b> ;m c2)"""
    return Choice(
        pseq(model, stmt(Guard(cond)), then),
        pseq(model, stmt(Guard(negate(cond))), els),
    )


def while_do(model: str, cond: Expr, body: Command) -> Command:
    """while^m b do c = (<b> ;m c)*m ;m <!b>"""
    return pseq(
        model,
        Iterate(model, pseq(model, stmt(Guard(cond)), body)),
        stmt(Guard(negate(cond))),
    )


def repeat_until(model: str, body: Command, cond: Expr) -> Command:
    """repeat^m c until b = c ;m (<!b> ;m c)*m ;m <b>"""
    return pseq(
        model,
        body,
        pseq(
            model,
            Iterate(model, pseq(model, stmt(Guard(negate(cond))), body)),
            stmt(Guard(cond)),
        ),
    )


def cas(x: VarId, expect: Expr, update: Expr,
        load_ocs: Optional[frozenset] = None,
        store_ocs: Optional[frozenset] = None) -> Command:
    """cas(x,e,e') = [<x=e>; x:=e'] [] [<x!=e>]; `.ar` uses acq/rel accesses."""
    lo = load_ocs if load_ocs is not None else RLX_OCS
    so = store_ocs if store_ocs is not None else RLX_OCS
    xl = VarRef(x, lo)
    success = stmt(Guard(BinOp("==", xl, expect)), Assign(x, so, update))
    failure = stmt(Guard(BinOp("!=", xl, expect)))
    return Choice(success, failure)


def cas_with_result(model: str, result: VarId, x: VarId, expect: Expr, update: Expr,
                    load_ocs: Optional[frozenset] = None,
                    store_ocs: Optional[frozenset] = None) -> Command:
    """r := cas(x,e,e'), recording success in r (result capture in strict order)."""
    lo = load_ocs if load_ocs is not None else RLX_OCS
    so = store_ocs if store_ocs is not None else RLX_OCS
    xl = VarRef(x, lo)
    success = pseq(
        SC,
        stmt(Guard(BinOp("==", xl, expect)), Assign(x, so, update)),
        stmt(assign(result, TRUE)),
    )
    failure = pseq(
        SC,
        stmt(Guard(BinOp("!=", xl, expect))),
        stmt(assign(result, FALSE)),
    )
    return Choice(success, failure)


def faa(result: VarId, x: VarId, addend: Expr,
        load_ocs: Optional[frozenset] = None,
        store_ocs: Optional[frozenset] = None) -> Command:
    """r := faa(x,e): one action loading the old value and adding e to x."""
    lo = load_ocs if load_ocs is not None else RLX_OCS
    so = store_ocs if store_ocs is not None else RLX_OCS
    return stmt(
        Assign(result, EMPTY_OCS, VarRef(x, lo)),
        Assign(x, so, BinOp("+", VarRef(x, lo), addend)),
    )


def get_and_set(result: VarId, x: VarId, value: Expr) -> Command:
    """r := x.getAndSet(v) = [r := x.acq; x.rel := v] as one action."""
    return stmt(
        Assign(result, EMPTY_OCS, VarRef(x, frozenset({ACQUIRE}))),
        Assign(x, frozenset({RELEASE}), value),
    )


# ---------------------------------------------------------------------------
# whole programs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThreadDef:
    name: str
    locals: tuple  # tuple of (VarId, Value)
    body: Command


@dataclass(frozen=True)
class Program:
    shared_decls: tuple  # tuple of (VarId, Value)
    threads: tuple  # tuple of ThreadDef
    value_domain: Optional[frozenset] = None  # finite int domain

    def all_vars(self) -> tuple:
        out = list(self.shared_decls)
        for t in self.threads:
            out.extend(t.locals)
        return tuple(out)

    def initial_state(self) -> dict:
        return {v: val for v, val in self.all_vars()}

    def int_domain(self) -> frozenset:
        if self.value_domain is not None:
            return self.value_domain
        values = {0, 1}
        for _, val in self.all_vars():
            if type(val) is not bool:
                values.add(val)
        for t in self.threads:
            for i in t.body.instructions():
                values |= _int_literals(i)
        return frozenset(values)


def _int_literals(item) -> set:
    if isinstance(item, Const):
        return {item.value} if type(item.value) is not bool else set()
    if isinstance(item, VarRef):
        return set()
    if isinstance(item, UnOp):
        return _int_literals(item.operand)
    if isinstance(item, BinOp):
        return _int_literals(item.left) | _int_literals(item.right)
    if isinstance(item, Assign):
        return _int_literals(item.rhs)
    if isinstance(item, Guard):
        return _int_literals(item.cond)
    if isinstance(item, Fence):
        return set()
    raise TypeError(item)
