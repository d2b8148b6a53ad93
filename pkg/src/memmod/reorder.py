"""Reordering relations, forwarding and expression-optimization admissibility.

The configured model decides when a later instruction may execute before an
earlier one: never under SC, always under PAR, and under C11 when data
dependencies, fences and ordering constraints all permit it.  Forwarding
substitutes in-flight assignment values into the promoted instruction;
with SFP enabled, guards may simplify it as well.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import FrozenSet, Iterable, Optional, Set, Tuple

from .ast import (ACQUIRE, C11, CONSUME, FULL_FENCE, LOAD_FENCE, PAR, RELAXED,
                  RELEASE, SC, SEQCST, STORE_FENCE, Action, Assign, BinOp,
                  Choice, Command, Const, Expr, Fence, Guard, Instr, Iterate,
                  Nil, Pseq, Stmt, UnOp, VarRef, expr_ocs, expr_vars,
                  is_load, is_store, node_count, subst_var, var_occurrences,
                  var_sets)

NEAREST_FIRST = "nearest_first"
EARLIEST_FIRST = "earliest_first"

NONDET = "nondet"
LEFT_TO_RIGHT = "left_to_right"

OCMORE_OPTIONS = ("a", "b", "c", "d", "e")


@dataclass(frozen=True)
class ModelConfig:
    base: str = C11  # SC | PAR | C11
    guard_store_reorder: bool = True
    forwarding: bool = True
    sfp: bool = False
    ocmore_option: str = "b"
    optimize: bool = False
    fold_order: str = NEAREST_FIRST
    eval_order: str = NONDET
    incremental: bool = False

    def __post_init__(self):
        if self.base not in (SC, PAR, C11):
            raise ValueError(f"bad base model {self.base!r}")
        if self.ocmore_option not in OCMORE_OPTIONS:
            raise ValueError(f"bad ocmore option {self.ocmore_option!r}")
        if self.fold_order not in (NEAREST_FIRST, EARLIEST_FIRST):
            raise ValueError(f"bad fold order {self.fold_order!r}")
        if self.eval_order not in (NONDET, LEFT_TO_RIGHT):
            raise ValueError(f"bad eval order {self.eval_order!r}")


SC_CONFIG = ModelConfig(base=SC)
PAR_CONFIG = ModelConfig(base=PAR)


# ---------------------------------------------------------------------------
# the three components of the C11 relation
# ---------------------------------------------------------------------------

#: allowed ordering-constraint pairs: acquire loads may come before release
#: stores, but nothing moves across seq_cst, before a release, or after an
#: acquire.  Consume behaves as relaxed for reordering purposes.
OC_RELATION: FrozenSet[Tuple[str, str]] = frozenset({
    (RELAXED, RELAXED),
    (RELAXED, ACQUIRE),
    (RELEASE, RELAXED),
    (RELEASE, ACQUIRE),
})


def _norm_oc(oc: str) -> str:
    return RELAXED if oc == CONSUME else oc


def oc_pair_allowed(oc1: str, oc2: str) -> bool:
    return (_norm_oc(oc1), _norm_oc(oc2)) in OC_RELATION


def ro_g(a: Instr, b: Instr, guard_store_reorder: bool = True) -> bool:
    """Reorderable w.r.t. sequential semantics: interference-free and
    load-independent.  With guard_store_reorder off (hardware-like preset),
    stores additionally may not come before guards."""
    va, vb = var_sets(a), var_sets(b)
    if va.wv & vb.fv or vb.wv & va.fv:
        return False
    if va.rsv & vb.rsv:
        return False
    if not guard_store_reorder and isinstance(a, Guard) and vb.wsv:
        return False
    return True


def _fence_permits(fkind: str, other: Instr) -> bool:
    if fkind == STORE_FENCE:
        return not is_store(other)
    if fkind == LOAD_FENCE:
        return not is_load(other)
    if fkind == FULL_FENCE:
        return False
    raise ValueError(fkind)


def ro_fence(a: Instr, b: Instr) -> bool:
    """Every fence kind in a permits b, and every fence kind in b permits a."""
    fa = (a.fkind,) if isinstance(a, Fence) else ()
    fb = (b.fkind,) if isinstance(b, Fence) else ()
    return all(_fence_permits(f, b) for f in fa) and all(
        _fence_permits(f, a) for f in fb)


def ro_ocs(a: Instr, b: Instr) -> bool:
    """getocs(a) x getocs(b) within the allowed pairs; vacuous when either
    side carries no constraints."""
    from .ast import get_ocs
    oa, ob = get_ocs(a), get_ocs(b)
    return all(oc_pair_allowed(o1, o2) for o1 in oa for o2 in ob)


def ro_instr(cfg: ModelConfig, a, b) -> bool:
    """The full reordering check, lifted to actions: every constituent of a
    must permit every constituent of b."""
    if cfg.base == SC:
        return False
    if cfg.base == PAR:
        return True
    ia = a if isinstance(a, tuple) else (a,)
    ib = b if isinstance(b, tuple) else (b,)
    for x in ia:
        for y in ib:
            if not (ro_g(x, y, cfg.guard_store_reorder)
                    and ro_fence(x, y) and ro_ocs(x, y)):
                return False
    return True


# ---------------------------------------------------------------------------
# forwarding
# ---------------------------------------------------------------------------


def forward_expr(a: Instr, f: Expr) -> Expr:
    if isinstance(a, Assign):
        return subst_var(f, a.target, a.rhs)
    return f


def forward(a: Instr, b: Instr) -> Instr:
    """a >> b: replace references to a's target by a's rhs within b.
    Guards and fences forward nothing under plain forwarding."""
    if not isinstance(a, Assign):
        return b
    if isinstance(b, Assign):
        return Assign(b.target, b.ocs, forward_expr(a, b.rhs))
    if isinstance(b, Guard):
        return Guard(forward_expr(a, b.cond))
    if isinstance(b, Fence):
        return b
    raise TypeError(b)


def _fold_const(e: Expr) -> Expr:
    """Bottom-up constant folding (no state needed)."""
    from .semantics import apply_binop, apply_unop
    if isinstance(e, (Const, VarRef)):
        return e
    if isinstance(e, UnOp):
        inner = _fold_const(e.operand)
        if isinstance(inner, Const):
            return Const(apply_unop(e.op, inner.value))
        return UnOp(e.op, inner)
    if isinstance(e, BinOp):
        left, right = _fold_const(e.left), _fold_const(e.right)
        if isinstance(left, Const) and isinstance(right, Const):
            return Const(apply_binop(e.op, left.value, right.value))
        return BinOp(e.op, left, right)
    raise TypeError(e)


def _guard_equalities(cond: Expr) -> Iterable[Tuple[VarRef, Expr]]:
    """Substitutions (var -> expr) syntactically entailed by a guard: the
    equality conjuncts with a variable on one side."""
    if isinstance(cond, BinOp) and cond.op == "&&":
        yield from _guard_equalities(cond.left)
        yield from _guard_equalities(cond.right)
    elif isinstance(cond, BinOp) and cond.op == "==":
        if isinstance(cond.left, VarRef):
            yield cond.left, cond.right
        if isinstance(cond.right, VarRef):
            yield cond.right, cond.left


def _rewrite_with(cond: Expr, e: Expr) -> Set[Expr]:
    out = {e}
    for var_ref, repl in _guard_equalities(cond):
        out.add(_fold_const(subst_var(e, var_ref.var, repl)))
    return out


def guard_forward(a: Instr, b: Instr) -> FrozenSet[Instr]:
    """SFP forwarding: assignments forward as usual; a guard's condition may
    rewrite b via its syntactically entailed equalities (plus constant
    folding).  Always contains forward(a, b)."""
    if isinstance(a, Assign):
        return frozenset({forward(a, b)})
    if isinstance(a, Guard):
        if isinstance(b, Assign):
            return frozenset(
                Assign(b.target, b.ocs, e) for e in _rewrite_with(a.cond, b.rhs))
        if isinstance(b, Guard):
            return frozenset(Guard(e) for e in _rewrite_with(a.cond, b.cond))
    return frozenset({b})


# ---------------------------------------------------------------------------
# ordering-constraint simplification (the five options)
# ---------------------------------------------------------------------------

#: the significant constraints that may appear inside expressions
ACS = frozenset({ACQUIRE, CONSUME, SEQCST})

_RLX_ONLY = frozenset({RELAXED})


def _comparison_ocs(item) -> frozenset:
    """The constraints ⪰oc compares: for instructions, those of the part an
    optimisation/forwarding can change (rhs or condition); target-side
    constraints are untouched by substitution."""
    if isinstance(item, Assign):
        return expr_ocs(item.rhs)
    if isinstance(item, Guard):
        return expr_ocs(item.cond)
    if isinstance(item, Fence):
        return item.ocs
    return expr_ocs(item)


def ocmore_allows(option: str, before, after) -> bool:
    """e ⪰oc e' under the chosen policy (a..e)."""
    oe = _comparison_ocs(before)
    op = _comparison_ocs(after)
    if option == "a":  # do not modify constraints
        return op == oe
    if option == "b":  # simplify/eliminate relaxed only
        return op <= oe <= _RLX_ONLY
    if option == "c":  # strengthening allowed
        return oe <= _RLX_ONLY
    if option == "d":  # never optimise acquire/consume/seq_cst away
        return oe & ACS == op & ACS
    if option == "e":  # do not constrain the compiler
        return True
    raise ValueError(option)


# ---------------------------------------------------------------------------
# reorder triples lifted to commands
# ---------------------------------------------------------------------------


def _triple_instr(cfg: ModelConfig, a: Instr, b: Instr) -> FrozenSet[Instr]:
    """All b' with ro<b'>(a, b): a permits b' after (guard-)forwarding, and
    the substitution does not lose significant constraints."""
    if cfg.forwarding:
        candidates = guard_forward(a, b) if cfg.sfp else frozenset({forward(a, b)})
    else:
        candidates = frozenset({b})
    out = set()
    for bp in candidates:
        if not cfg.forwarding and bp != b:
            continue
        if ro_instr(cfg, a, bp) and ocmore_allows(cfg.ocmore_option, b, bp):
            out.add(bp)
    return frozenset(out)


def _triple_through_chain(cfg: ModelConfig, items: tuple, b: Instr) -> FrozenSet[Instr]:
    """Fold b through a sequence of constituents; `items` ordered so the one
    b passes first comes first."""
    current = {b}
    for a in items:
        nxt: Set[Instr] = set()
        for cand in current:
            nxt |= _triple_instr_or_cmd(cfg, a, cand)
        if not nxt:
            return frozenset()
        current = nxt
    return frozenset(current)


def _triple_instr_or_cmd(cfg: ModelConfig, a, b: Instr) -> FrozenSet[Instr]:
    if isinstance(a, tuple) or not isinstance(a, (Nil, Stmt, Pseq, Choice, Iterate)):
        return _triple_instr(cfg, a, b)
    return _triple_command(cfg, a, b)


def _triple_command(cfg: ModelConfig, c: Command, b: Instr) -> FrozenSet[Instr]:
    if isinstance(c, Nil):
        return frozenset({b})
    if isinstance(c, Stmt):
        members = tuple(si.instr for si in c.instrs)
        order = tuple(reversed(members)) if cfg.fold_order == NEAREST_FIRST else members
        return _triple_through_chain(cfg, order, b)
    if isinstance(c, Pseq):
        if cfg.fold_order == NEAREST_FIRST:
            order = (c.right, c.left)
        else:
            order = (c.left, c.right)
        return _triple_through_chain(cfg, order, b)
    if isinstance(c, Choice):
        return _triple_command(cfg, c.left, b) & _triple_command(cfg, c.right, b)
    if isinstance(c, Iterate):
        # the Nil unrolling forces b'=b; stability through one body
        # unrolling then extends to every finite unrolling
        if b in _triple_command(cfg, c.body, b):
            return frozenset({b})
        return frozenset()
    raise TypeError(c)


def reorder_triple(cfg: ModelConfig, c: Command, b) -> FrozenSet[Action]:
    """All actions b' such that c <|b'| b: b may execute before command c,
    emerging as b' after forwarding through c.  `b` may be an Instr or an
    Action; the result is a set of Actions."""
    if cfg.base == SC:
        return frozenset() if not isinstance(c, Nil) else frozenset({_as_action(b)})
    if cfg.base == PAR:
        return frozenset({_as_action(b)})
    members = b if isinstance(b, tuple) else (b,)
    per_member = []
    for instr in members:
        opts = _triple_command(cfg, c, instr)
        if not opts:
            return frozenset()
        per_member.append(sorted(opts, key=str))
    return frozenset(tuple(combo) for combo in itertools.product(*per_member))


def _as_action(b) -> Action:
    return b if isinstance(b, tuple) else (b,)


# ---------------------------------------------------------------------------
# expression optimization
# ---------------------------------------------------------------------------


def _lex_decreases(e: Expr, e2: Expr) -> bool:
    """e >lex e': strictly fewer AST nodes, ties broken by strictly fewer
    variable occurrences.  Irreflexive and transitive, so optimization
    terminates."""
    n1, n2 = node_count(e), node_count(e2)
    if n1 != n2:
        return n1 > n2
    return var_occurrences(e) > var_occurrences(e2)


def _is_int_const(e: Expr, v: int) -> bool:
    return isinstance(e, Const) and type(e.value) is not bool and e.value == v


def _rewrite_candidates(e: Expr) -> Set[Tuple[Expr, Expr]]:
    """(context guard, e') pairs from the implemented rewrite family."""
    from .ast import TRUE
    out: Set[Tuple[Expr, Expr]] = set()
    folded = _fold_const(e)
    if folded != e:
        out.add((TRUE, folded))
    if isinstance(e, BinOp):
        if e.op == "-" and e.left == e.right:
            out.add((TRUE, Const(0)))
        if e.op == "-" and e.left != e.right:
            # equality-context substitution: valid exactly when the operands agree
            out.add((BinOp("==", e.left, e.right), Const(0)))
        if e.op == "*" and (_is_int_const(e.left, 0) or _is_int_const(e.right, 0)):
            out.add((TRUE, Const(0)))
        if e.op == "*" and _is_int_const(e.right, 1):
            out.add((TRUE, e.left))
        if e.op == "*" and _is_int_const(e.left, 1):
            out.add((TRUE, e.right))
        if e.op == "+" and _is_int_const(e.right, 0):
            out.add((TRUE, e.left))
        if e.op == "+" and _is_int_const(e.left, 0):
            out.add((TRUE, e.right))
    return out


def optimize_expr(cfg: ModelConfig, e: Expr,
                  domain=None) -> FrozenSet[Tuple[Expr, Expr]]:
    """Admissible optimization steps for e: each returned (guard, e')
    satisfies guard |= e = e', e >lex e', and the configured ⪰oc policy.
    When a `domain` is supplied the value-equality side condition is
    re-verified over it by brute force."""
    out = set()
    for g, e2 in _rewrite_candidates(e):
        if not _lex_decreases(e, e2):
            continue
        if not ocmore_allows(cfg.ocmore_option, e, e2):
            continue
        if domain is not None and not domain.entails_equal(g, e, e2):
            continue
        out.add((g, e2))
    return frozenset(out)
