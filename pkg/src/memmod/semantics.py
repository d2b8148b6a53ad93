"""The small-step engine: expression/instruction/command steps, action
classification, symbolic trace enumeration and state-coupled exploration.

Two exploration modes share one step relation: symbolic enumeration works
over a declared finite value domain (shared loads branch on every domain
value) and is what the law suite compares; state-coupled exploration
resolves guards against the running state and is what litmus verdicts use.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from .ast import (C11, PAR, SC, TAU, Action, Assign, BinOp, Choice, Command,
                  Const, Expr, Fence, Guard, Instr, Iterate, Nil, NIL, Program,
                  Pseq, SpecInstr, Stmt, UnOp, VarId, VarRef, canonical,
                  erase_depths, expr_vars, is_bool_value, iterate_depths,
                  pseq, render_action, var_sets)
from .reorder import (LEFT_TO_RIGHT, ModelConfig, optimize_expr,
                      reorder_triple)

VISIBLE = "visible"
SILENT = "silent"
INFEASIBLE = "infeasible"


class SemanticsError(Exception):
    pass


class UnboundVariable(SemanticsError):
    pass


@dataclass(frozen=True)
class Label:
    action: Action
    kind: str
    source: Optional[str] = None
    thread: Optional[str] = None

    def render(self) -> str:
        text = render_action(self.action)
        if self.source and self.source != text:
            text += f"  [from {self.source}]"
        if self.thread:
            text = f"{self.thread}: {text}"
        return text


#: traces compare as sequences of actions, silent steps already erased
Trace = Tuple[Action, ...]


@dataclass(frozen=True)
class ExplorationLimits:
    max_unroll: int = 3
    max_depth: int = 10 ** 6
    max_configs: int = 10 ** 6

    def __post_init__(self):
        if min(self.max_unroll, self.max_depth, self.max_configs) <= 0:
            raise ValueError("exploration limits must be positive")


DEFAULT_LIMITS = ExplorationLimits()


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def apply_unop(op: str, v):
    if op == "-":
        if is_bool_value(v):
            raise SemanticsError("unary - on boolean")
        return -v
    if op == "!":
        if not is_bool_value(v):
            raise SemanticsError("! on integer")
        return not v
    raise SemanticsError(f"unknown unary op {op!r}")


def apply_binop(op: str, a, b):
    if op in ("+", "-", "*"):
        if is_bool_value(a) or is_bool_value(b):
            raise SemanticsError(f"arithmetic {op} on boolean")
        return {"+": a + b, "-": a - b, "*": a * b}[op]
    if op in ("==", "!="):
        if is_bool_value(a) != is_bool_value(b):
            raise SemanticsError("comparison across value tags")
        return (a == b) if op == "==" else (a != b)
    if op in ("<", "<=", ">", ">="):
        if is_bool_value(a) or is_bool_value(b):
            raise SemanticsError(f"order comparison {op} on boolean")
        return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]
    if op in ("&&", "||"):
        if not (is_bool_value(a) and is_bool_value(b)):
            raise SemanticsError(f"logical {op} on integer")
        return (a and b) if op == "&&" else (a or b)
    raise SemanticsError(f"unknown binary op {op!r}")


def eval_expr(e: Expr, state: Dict[VarId, object]):
    """Evaluate in a state; ordering constraints are ignored."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, VarRef):
        try:
            return state[e.var]
        except KeyError:
            raise UnboundVariable(f"unbound variable {e.var}") from None
    if isinstance(e, UnOp):
        return apply_unop(e.op, eval_expr(e.operand, state))
    if isinstance(e, BinOp):
        return apply_binop(e.op, eval_expr(e.left, state), eval_expr(e.right, state))
    raise TypeError(e)


def apply_action(state: Dict[VarId, object], act: Action) -> Optional[Dict[VarId, object]]:
    """Sequentially apply each member's effect; a failing guard makes the
    whole action infeasible (absent result), not an error."""
    current = state
    changed = False
    for instr in act:
        if isinstance(instr, Assign):
            if not changed:
                current = dict(current)
                changed = True
            current[instr.target] = eval_expr(instr.rhs, current)
        elif isinstance(instr, Guard):
            v = eval_expr(instr.cond, current)
            if not is_bool_value(v):
                raise SemanticsError(f"non-boolean guard <{instr.cond}>")
            if not v:
                return None
        elif isinstance(instr, Fence):
            pass
        else:
            raise TypeError(instr)
    return current if changed else dict(state)


# ---------------------------------------------------------------------------
# value domains
# ---------------------------------------------------------------------------

_BOOL_DOMAIN = (False, True)


class Domain:
    """Finite per-variable value domains for symbolic enumeration and the
    action classification checks."""

    def __init__(self, by_var: Dict[VarId, tuple], int_values: Iterable[int]):
        self.by_var = dict(by_var)
        self.int_values = tuple(sorted(set(int_values)))
        self._classify_cache: Dict[Action, str] = {}

    @classmethod
    def from_program(cls, program: Program) -> "Domain":
        ints = tuple(sorted(program.int_domain()))
        by_var = {}
        for var, init in program.all_vars():
            by_var[var] = _BOOL_DOMAIN if is_bool_value(init) else ints
        return cls(by_var, ints)

    @classmethod
    def from_command(cls, c: Command, int_values: Optional[Iterable[int]] = None,
                     bool_vars: Iterable[VarId] = ()) -> "Domain":
        from .ast import _int_literals
        ints = set(int_values) if int_values is not None else {0, 1}
        if int_values is None:
            for i in c.instructions():
                ints |= _int_literals(i)
        ints_t = tuple(sorted(ints))
        bools = set(bool_vars) | _infer_bool_vars(c)
        by_var = {}
        for v in var_sets(c).fv:
            by_var[v] = _BOOL_DOMAIN if v in bools else ints_t
        return cls(by_var, ints_t)

    def values_for(self, var: VarId) -> tuple:
        if var in self.by_var:
            return self.by_var[var]
        return self.int_values

    def states_over(self, variables: Iterable[VarId]) -> Iterator[Dict[VarId, object]]:
        vs = sorted(set(variables), key=lambda v: (v.name, v.kind))
        pools = [self.values_for(v) for v in vs]
        for combo in itertools.product(*pools):
            yield dict(zip(vs, combo))

    def entails_equal(self, guard: Expr, e1: Expr, e2: Expr) -> bool:
        vs = expr_vars(guard) | expr_vars(e1) | expr_vars(e2)
        for sigma in self.states_over(vs):
            if eval_expr(guard, sigma) is True:
                if eval_expr(e1, sigma) != eval_expr(e2, sigma):
                    return False
        return True

    # -- action classification ---------------------------------------------

    def classify(self, act: Action) -> str:
        cached = self._classify_cache.get(act)
        if cached is not None:
            return cached
        kind = self._classify(act)
        self._classify_cache[act] = kind
        return kind

    def _classify(self, act: Action) -> str:
        has_guard = any(isinstance(i, Guard) for i in act)
        vs = var_sets(act)
        if has_guard:
            feasible = False
            all_true = True
            for sigma in self.states_over(vs.fv):
                if apply_action(sigma, act) is None:
                    all_true = False
                else:
                    feasible = True
            if not feasible:
                return INFEASIBLE
            if (all(isinstance(i, Guard) for i in act)
                    and not vs.sv and all_true):
                return SILENT
        return VISIBLE

    def label(self, act: Action, source: Optional[str] = None,
              thread: Optional[str] = None) -> Label:
        return Label(act, self.classify(act), source, thread)


def _infer_bool_vars(c: Command) -> Set[VarId]:
    """Fixpoint inference of boolean-typed variables in a bare command
    (litmus programs carry declared types; this covers directly-built ASTs)."""
    bools: Set[VarId] = set()

    def is_boolish(e: Expr) -> bool:
        if isinstance(e, Const):
            return is_bool_value(e.value)
        if isinstance(e, VarRef):
            return e.var in bools
        if isinstance(e, UnOp):
            return e.op == "!"
        if isinstance(e, BinOp):
            return e.op in ("==", "!=", "<", "<=", ">", ">=", "&&", "||")
        return False

    def mark_bool_operands(e: Expr) -> None:
        if isinstance(e, VarRef):
            bools.add(e.var)
        elif isinstance(e, UnOp) and e.op == "!":
            mark_bool_operands(e.operand)
        elif isinstance(e, BinOp) and e.op in ("&&", "||"):
            mark_bool_operands(e.left)
            mark_bool_operands(e.right)

    for _ in range(3):
        before = len(bools)
        for instr in c.instructions():
            if isinstance(instr, Guard):
                mark_bool_operands(instr.cond)
            elif isinstance(instr, Assign) and is_boolish(instr.rhs):
                bools.add(instr.target)
        if len(bools) == before:
            break
    return bools


def tau_label() -> Label:
    return Label((TAU,), SILENT)


# ---------------------------------------------------------------------------
# incremental expression / instruction steps
# ---------------------------------------------------------------------------


def _expr_positions(e: Expr):
    """(subexpression, rebuild) pairs for every position in e."""
    yield e, lambda x: x
    if isinstance(e, UnOp):
        for sub, rebuild in _expr_positions(e.operand):
            yield sub, (lambda x, rb=rebuild, op=e.op: UnOp(op, rb(x)))
    elif isinstance(e, BinOp):
        for sub, rebuild in _expr_positions(e.left):
            yield sub, (lambda x, rb=rebuild, node=e: BinOp(node.op, rb(x), node.right))
        for sub, rebuild in _expr_positions(e.right):
            yield sub, (lambda x, rb=rebuild, node=e: BinOp(node.op, node.left, rb(x)))


def step_expr(cfg: ModelConfig, e: Expr, domain: Domain,
              state: Optional[Dict] = None) -> List[Tuple[Action, Expr]]:
    """Incremental evaluation steps of an expression.

    A shared variable reference steps to a value v via the guard <x.ocs = v>
    (every domain value symbolically; just the current value when a state is
    supplied).  Operator applications on values step silently.  With
    optimization on, admissible rewrites step via their context guards.
    """
    steps: List[Tuple[Action, Expr]] = []
    _collect_expr_steps(cfg, e, domain, state, steps)
    if cfg.optimize:
        for sub, rebuild in _expr_positions(e):
            for g, sub2 in optimize_expr(cfg, sub, domain):
                steps.append(((Guard(g),), rebuild(sub2)))
    return steps


def _collect_expr_steps(cfg, e, domain, state, out, _top=True) -> None:
    if isinstance(e, Const):
        return
    if isinstance(e, VarRef):
        if not e.var.is_shared:
            return
        if state is not None:
            values = (state[e.var],)
        else:
            values = domain.values_for(e.var)
        for v in values:
            out.append(((Guard(BinOp("==", e, Const(v))),), Const(v)))
        return
    if isinstance(e, UnOp):
        if isinstance(e.operand, Const):
            out.append(((TAU,), Const(apply_unop(e.op, e.operand.value))))
        else:
            sub: List[Tuple[Action, Expr]] = []
            _collect_expr_steps(cfg, e.operand, domain, state, sub, False)
            out.extend((a, UnOp(e.op, e2)) for a, e2 in sub)
        return
    if isinstance(e, BinOp):
        if isinstance(e.left, Const) and isinstance(e.right, Const):
            out.append(((TAU,), Const(apply_binop(e.op, e.left.value, e.right.value))))
            return
        left_steps: List[Tuple[Action, Expr]] = []
        _collect_expr_steps(cfg, e.left, domain, state, left_steps, False)
        out.extend((a, BinOp(e.op, e2, e.right)) for a, e2 in left_steps)
        if cfg.eval_order == LEFT_TO_RIGHT and _has_shared_reads(e.left):
            return
        right_steps: List[Tuple[Action, Expr]] = []
        _collect_expr_steps(cfg, e.right, domain, state, right_steps, False)
        out.extend((a, BinOp(e.op, e.left, e2)) for a, e2 in right_steps)
        return
    raise TypeError(e)


def _has_shared_reads(e: Expr) -> bool:
    return any(v.is_shared for v in expr_vars(e))


def spec_indivisible(si: SpecInstr) -> bool:
    """An instruction with no shared reads is indivisible regardless of tag."""
    if not si.divisible:
        return True
    return not var_sets(si.instr).rsv


def step_spec_instr(cfg: ModelConfig, si: SpecInstr, domain: Domain,
                    state: Optional[Dict] = None) -> List[Tuple[Action, SpecInstr]]:
    """Evaluation steps of a divisible instruction (inside a statement)."""
    instr = si.instr
    if isinstance(instr, Assign):
        return [(a, SpecInstr(Assign(instr.target, instr.ocs, e2), si.divisible))
                for a, e2 in step_expr(cfg, instr.rhs, domain, state)]
    if isinstance(instr, Guard):
        return [(a, SpecInstr(Guard(e2), si.divisible))
                for a, e2 in step_expr(cfg, instr.cond, domain, state)]
    return []


def step_instr(cfg: ModelConfig, item, domain: Domain,
               state: Optional[Dict] = None) -> List[Tuple[Label, Command]]:
    """Steps of an Instr, SpecInstr or Stmt, as (label, residual) pairs."""
    if isinstance(item, (Assign, Guard, Fence)):
        item = Stmt((SpecInstr(item),))
    elif isinstance(item, SpecInstr):
        item = Stmt((item,))
    return _step_stmt(cfg, item, domain, state)


def _step_stmt(cfg: ModelConfig, st: Stmt, domain: Domain,
               state: Optional[Dict]) -> List[Tuple[Label, Command]]:
    out: List[Tuple[Label, Command]] = []
    source = st.pretty()
    if cfg.incremental:
        # members execute incrementally left to right: a divisible member may
        # step once everything before it is indivisible
        for k, si in enumerate(st.instrs):
            if si.divisible:
                for act, si2 in step_spec_instr(cfg, si, domain, state):
                    instrs = st.instrs[:k] + (si2,) + st.instrs[k + 1:]
                    out.append((domain.label(act, source), Stmt(instrs)))
            if not spec_indivisible(si):
                break
    if not cfg.incremental or all(spec_indivisible(si) for si in st.instrs):
        act = tuple(si.instr for si in st.instrs)
        out.append((domain.label(act, source), NIL))
    if cfg.optimize:
        for j, si in enumerate(st.instrs):
            for act, si2 in _optimize_member(cfg, si, domain):
                instrs = st.instrs[:j] + (si2,) + st.instrs[j + 1:]
                out.append((domain.label(act, source), Stmt(instrs)))
    return out


def _optimize_member(cfg: ModelConfig, si: SpecInstr,
                     domain: Domain) -> List[Tuple[Action, SpecInstr]]:
    instr = si.instr
    if isinstance(instr, Fence):
        return []
    expr = instr.rhs if isinstance(instr, Assign) else instr.cond
    out = []
    for sub, rebuild in _expr_positions(expr):
        for g, sub2 in optimize_expr(cfg, sub, domain):
            e2 = rebuild(sub2)
            if isinstance(instr, Assign):
                new: Instr = Assign(instr.target, instr.ocs, e2)
            else:
                new = Guard(e2)
            out.append(((Guard(g),), SpecInstr(new, si.divisible)))
    return out


# ---------------------------------------------------------------------------
# command steps
# ---------------------------------------------------------------------------


class _BoundFlag:
    """Tracks why an exploration is incomplete: `unroll_capped` when a loop
    unfolding was suppressed at max_unroll, `truncated` when enumeration hit
    max_depth/max_configs."""

    __slots__ = ("unroll_capped", "truncated")

    def __init__(self):
        self.unroll_capped = False
        self.truncated = False

    @property
    def hit(self) -> bool:
        return self.unroll_capped or self.truncated


def step_command(cfg: ModelConfig, c: Command, domain: Domain,
                 limits: ExplorationLimits = DEFAULT_LIMITS,
                 state: Optional[Dict] = None,
                 bound: Optional[_BoundFlag] = None) -> List[Tuple[Label, Command]]:
    """All steps of a command under the configured model.

    Choice resolves silently either way; Iterate silently terminates or
    unfolds once (up to limits.max_unroll); a Pseq steps its left side, or
    promotes a step b of its right side as b' when the reorder triple of the
    left side admits it.
    """
    if bound is None:
        bound = _BoundFlag()
    if isinstance(c, Nil):
        return []
    if isinstance(c, Stmt):
        return _step_stmt(cfg, c, domain, state)
    if isinstance(c, Choice):
        return [(tau_label(), c.left), (tau_label(), c.right)]
    if isinstance(c, Iterate):
        steps: List[Tuple[Label, Command]] = [(tau_label(), NIL)]
        if c.depth < limits.max_unroll:
            unfolded = pseq(c.model, c.body, Iterate(c.model, c.body, c.depth + 1))
            steps.append((tau_label(), unfolded))
        else:
            bound.unroll_capped = True
        return steps
    if isinstance(c, Pseq):
        if isinstance(c.left, Nil):
            return [(tau_label(), c.right)]
        steps = []
        for label, left2 in step_command(cfg, c.left, domain, limits, state, bound):
            steps.append((label, pseq(c.model, left2, c.right)))
        effective = cfg.base if c.model == C11 else c.model
        if effective != SC:
            for label, right2 in step_command(cfg, c.right, domain, limits, state, bound):
                if effective == PAR:
                    promoted: Iterable[Action] = (label.action,)
                else:
                    promoted = sorted(reorder_triple(cfg, c.left, label.action),
                                      key=render_action)
                for act in promoted:
                    new_label = domain.label(act, label.source, label.thread)
                    steps.append((new_label, pseq(c.model, c.left, right2)))
        return steps
    raise TypeError(c)


# ---------------------------------------------------------------------------
# symbolic trace enumeration
# ---------------------------------------------------------------------------


@dataclass
class TraceSet:
    traces: FrozenSet[Trace]
    unroll_capped: bool
    truncated: bool

    @property
    def bounded(self) -> bool:
        return self.unroll_capped or self.truncated


def enumerate_traces(cfg: ModelConfig, c: Command, domain: Optional[Domain] = None,
                     limits: ExplorationLimits = DEFAULT_LIMITS) -> TraceSet:
    """All visible-action traces of runs ending in Nil, silent labels
    dropped, actions that are false in every state pruned."""
    if domain is None:
        domain = Domain.from_command(c)
    bound = _BoundFlag()
    memo: Dict[Command, FrozenSet[Trace]] = {}

    def traces_of(cmd: Command) -> FrozenSet[Trace]:
        cmd = canonical(cmd)
        if isinstance(cmd, Nil):
            return frozenset({()})
        hit = memo.get(cmd)
        if hit is not None:
            return hit
        if len(memo) > limits.max_configs:
            bound.truncated = True
            return frozenset()
        out: Set[Trace] = set()
        for label, residual in step_command(cfg, cmd, domain, limits, bound=bound):
            if label.kind == INFEASIBLE:
                continue
            for suffix in traces_of(residual):
                if label.kind == SILENT:
                    out.add(suffix)
                elif len(suffix) + 1 <= limits.max_depth:
                    out.add((label.action,) + suffix)
                else:
                    bound.truncated = True
        result = frozenset(out)
        memo[cmd] = result
        return result

    return TraceSet(traces_of(c), bound.unroll_capped, bound.truncated)


# ---------------------------------------------------------------------------
# state-coupled exploration of whole programs
# ---------------------------------------------------------------------------


def state_key(state: Dict[VarId, object]) -> tuple:
    return tuple(sorted(((v.name, v.kind, state[v]) for v in state)))


def render_state(state: Dict[VarId, object]) -> str:
    parts = []
    for v in sorted(state, key=lambda v: (v.kind, v.name)):
        val = state[v]
        parts.append(f"{v.name}={'true' if val is True else 'false' if val is False else val}")
    return "{" + ", ".join(parts) + "}"


@dataclass
class FinalsResult:
    finals: List[Tuple[Dict[VarId, object], Tuple[Label, ...]]]
    bounded: bool
    configs_explored: int

    def states(self) -> Set[tuple]:
        return {state_key(s) for s, _ in self.finals}


def explore_finals(cfg: ModelConfig, program: Program,
                   limits: ExplorationLimits = DEFAULT_LIMITS,
                   initial: Optional[Dict[VarId, object]] = None) -> FinalsResult:
    """Every reachable terminated state with one witness interleaving each.

    Breadth-first over (thread residuals, state) configurations with
    dominance memoisation: a configuration already seen with pointwise
    smaller-or-equal loop-unfold depths subsumes the new one.  Results are
    deterministic; witnesses are shortest-then-lexicographic.
    """
    domain = Domain.from_program(program)
    bound = _BoundFlag()
    start_state = dict(initial) if initial is not None else program.initial_state()
    names = [t.name for t in program.threads]
    start = tuple(canonical(t.body) for t in program.threads)

    visited: Dict[tuple, List[tuple]] = {}
    finals: Dict[tuple, Tuple[Dict, Tuple[Label, ...]]] = {}
    queue = deque([(start, start_state, ())])
    explored = 0

    def dominated(key: tuple, depths: tuple) -> bool:
        seen = visited.get(key)
        if seen is None:
            visited[key] = [depths]
            return False
        for old in seen:
            if all(o <= n for o, n in zip(old, depths)):
                return True
        seen[:] = [old for old in seen
                   if not all(n <= o for o, n in zip(old, depths))]
        seen.append(depths)
        return False

    while queue:
        residuals, state, witness = queue.popleft()
        key = (tuple(erase_depths(r) for r in residuals), state_key(state))
        depths = tuple(d for r in residuals for d in iterate_depths(r))
        if dominated(key, depths):
            continue
        explored += 1
        if explored > limits.max_configs:
            bound.truncated = True
            break
        if all(isinstance(r, Nil) for r in residuals):
            skey = state_key(state)
            if skey not in finals:
                finals[skey] = (state, witness)
            continue
        if len(witness) >= limits.max_depth:
            bound.truncated = True
            continue
        successors = []
        for i, residual in enumerate(residuals):
            if isinstance(residual, Nil):
                continue
            for label, res2 in step_command(cfg, residual, domain, limits,
                                            state=state, bound=bound):
                new_state = apply_action(state, label.action)
                if new_state is None:
                    continue
                new_residuals = residuals[:i] + (canonical(res2),) + residuals[i + 1:]
                tagged = Label(label.action, label.kind, label.source, names[i])
                new_witness = witness if label.kind == SILENT else witness + (tagged,)
                successors.append((i, tagged.render(), new_residuals, new_state,
                                   new_witness))
        successors.sort(key=lambda s: (s[0], s[1]))
        for _, _, nr, ns, nw in successors:
            queue.append((nr, ns, nw))

    ordered = [finals[k] for k in sorted(finals)]
    return FinalsResult(ordered, bound.hit, explored)
