"""Judgments over explorations: Hoare/reach checking, refinement and trace
equivalence, plain interpretation, blockall, and the reduction-law suite.

Laws are verified on concrete instantiations by trace-set comparison;
schematic validity is out of scope here.  Side-condition violations raise
``InputError`` and are distinct from a law failing on its instantiation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from . import ast
from .ast import (C11, NIL, PAR, SC, Action, Assign, Choice, Command, Const,
                  Expr, Fence, Guard, Instr, Iterate, Nil, Program, Pseq,
                  Stmt, VarId, canonical, pseq, render_action, stmt, var_sets)
from .reorder import (EARLIEST_FIRST, ModelConfig, forward, reorder_triple,
                      ro_instr)
from .semantics import (DEFAULT_LIMITS, Domain, ExplorationLimits, INFEASIBLE,
                        Label, SILENT, TraceSet, apply_action, enumerate_traces,
                        eval_expr, explore_finals, state_key, step_command)

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive_at_bound"


class InputError(Exception):
    """Bad input to a judgment (unbound variable, violated side condition)."""


@dataclass
class Judgment:
    kind: str  # always | reach | refines | trace_equiv | blockall
    status: str  # holds | fails | inconclusive_at_bound
    witness: Optional[tuple] = None
    counterexample: Optional[tuple] = None
    state: Optional[dict] = None  # final state of the witness/counterexample
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


def render_trace(trace) -> str:
    parts = []
    for step in trace:
        parts.append(step.render() if isinstance(step, Label) else render_action(step))
    return " ;; ".join(parts) if parts else "<empty>"


# ---------------------------------------------------------------------------
# Hoare / reach checking by exhaustion
# ---------------------------------------------------------------------------


def _check_condition_vars(program: Program, e: Expr) -> None:
    declared = {v for v, _ in program.all_vars()}
    missing = ast.expr_vars(e) - declared
    if missing:
        names = ", ".join(sorted(v.name for v in missing))
        raise InputError(f"undeclared variable(s) in condition: {names}")


def hoare_check(cfg: ModelConfig, program: Program, pre: Optional[Expr],
                post: Expr, mode: str = "always",
                limits: ExplorationLimits = DEFAULT_LIMITS,
                finals=None) -> Judgment:
    """`always`: every final state reachable from the pre-satisfying declared
    initialization satisfies post.  `reach`: some final state satisfies post
    (witness attached).  Partial correctness only: finite traces."""
    if mode not in ("always", "reach"):
        raise InputError(f"bad mode {mode!r}")
    for e in ([pre] if pre is not None else []) + [post]:
        _check_condition_vars(program, e)
    init = program.initial_state()
    if pre is not None and eval_expr(pre, init) is not True:
        if mode == "always":
            return Judgment("always", HOLDS, detail="no initial state satisfies pre")
        return Judgment("reach", FAILS, detail="no initial state satisfies pre")
    if finals is None:
        finals = explore_finals(cfg, program, limits)
    matching = []
    violating = []
    for state, witness in finals.finals:
        if eval_expr(post, state) is True:
            matching.append((state, witness))
        else:
            violating.append((state, witness))

    def best(entries):
        return min(entries, key=lambda sw: (len(sw[1]), render_trace(sw[1])))

    if mode == "always":
        if violating:
            state, witness = best(violating)
            return Judgment("always", FAILS, counterexample=(witness, state),
                            state=state)
        if finals.bounded:
            return Judgment("always", INCONCLUSIVE)
        return Judgment("always", HOLDS)
    if matching:
        state, witness = best(matching)
        return Judgment("reach", HOLDS, witness=witness, state=state)
    if finals.bounded:
        return Judgment("reach", INCONCLUSIVE)
    return Judgment("reach", FAILS)


def _render_state_short(state) -> str:
    from .semantics import render_state
    return render_state(state)


# ---------------------------------------------------------------------------
# refinement and trace equivalence
# ---------------------------------------------------------------------------


def refines(cfg: ModelConfig, c: Command, d: Command,
            limits: ExplorationLimits = DEFAULT_LIMITS,
            domain: Optional[Domain] = None) -> Judgment:
    """c ⊒ d: every trace of d is a trace of c (silent steps erased).
    Iterate unrollings are capped identically on both sides; only a genuinely
    truncated enumeration is inconclusive."""
    if domain is None:
        domain = Domain.from_command(Pseq(PAR, c, d))
    tc = enumerate_traces(cfg, c, domain, limits)
    td = enumerate_traces(cfg, d, domain, limits)
    extra = td.traces - tc.traces
    if extra:
        if tc.truncated:
            return Judgment("refines", INCONCLUSIVE)
        worst = min(extra, key=lambda t: (len(t), render_trace(t)))
        return Judgment("refines", FAILS, counterexample=(worst, None))
    if tc.truncated or td.truncated:
        return Judgment("refines", INCONCLUSIVE)
    return Judgment("refines", HOLDS)


def trace_equiv(cfg: ModelConfig, c: Command, d: Command,
                limits: ExplorationLimits = DEFAULT_LIMITS,
                domain: Optional[Domain] = None) -> Judgment:
    if domain is None:
        domain = Domain.from_command(Pseq(PAR, c, d))
    fwd = refines(cfg, c, d, limits, domain)
    if fwd.status != HOLDS:
        return Judgment("trace_equiv", fwd.status, counterexample=fwd.counterexample,
                        detail="d has a trace c lacks" if fwd.status == FAILS else "")
    bwd = refines(cfg, d, c, limits, domain)
    if bwd.status != HOLDS:
        return Judgment("trace_equiv", bwd.status, counterexample=bwd.counterexample,
                        detail="c has a trace d lacks" if bwd.status == FAILS else "")
    return Judgment("trace_equiv", HOLDS)


# ---------------------------------------------------------------------------
# plain interpretation
# ---------------------------------------------------------------------------


def plain_interpretation(c: Command) -> Command:
    """Instantiate every Pseq/Iterate model with SC (parallel composition
    stays parallel), delete fences; ordering constraints remain syntactically
    but are inert under the sequential semantics."""
    if isinstance(c, Nil):
        return c
    if isinstance(c, Stmt):
        kept = tuple(si for si in c.instrs if not isinstance(si.instr, Fence))
        return Stmt(kept) if kept else NIL
    if isinstance(c, Pseq):
        model = PAR if c.model == PAR else SC
        return pseq(model, plain_interpretation(c.left), plain_interpretation(c.right))
    if isinstance(c, Choice):
        return Choice(plain_interpretation(c.left), plain_interpretation(c.right))
    if isinstance(c, Iterate):
        body = plain_interpretation(c.body)
        return Iterate(SC, body, c.depth) if not isinstance(body, Nil) else NIL
    raise TypeError(c)


def plain_program(p: Program) -> Program:
    threads = tuple(
        ast.ThreadDef(t.name, t.locals, plain_interpretation(t.body))
        for t in p.threads)
    return Program(p.shared_decls, threads, p.value_domain)


# ---------------------------------------------------------------------------
# blockall
# ---------------------------------------------------------------------------


def _reachable_residuals(cfg: ModelConfig, c: Command, domain: Domain,
                         limits: ExplorationLimits) -> Tuple[Set[Command], bool]:
    seen: Set[Command] = set()
    frontier = [canonical(c)]
    truncated = False
    while frontier:
        cur = frontier.pop()
        if cur in seen or isinstance(cur, Nil):
            continue
        seen.add(cur)
        if len(seen) > limits.max_configs:
            truncated = True
            break
        for label, residual in step_command(cfg, cur, domain, limits):
            if label.kind == INFEASIBLE:
                continue
            frontier.append(canonical(residual))
    return seen, truncated


def _visible_first_actions(cfg: ModelConfig, d: Command, domain: Domain,
                           limits: ExplorationLimits) -> Set[Action]:
    """First visible actions of d, looking through silent resolutions."""
    out: Set[Action] = set()
    seen: Set[Command] = set()
    frontier = [canonical(d)]
    while frontier:
        cur = frontier.pop()
        if cur in seen or isinstance(cur, Nil):
            continue
        seen.add(cur)
        for label, residual in step_command(cfg, cur, domain, limits):
            if label.kind == INFEASIBLE:
                continue
            if label.kind == SILENT:
                frontier.append(canonical(residual))
            else:
                out.add(label.action)
    return out


def block_all_check(cfg: ModelConfig, c: Command, d: Command,
                    limits: ExplorationLimits = DEFAULT_LIMITS,
                    domain: Optional[Domain] = None) -> Judgment:
    """Holds iff after every partial execution of c to an unfinished residual
    c', every visible first step of d is refused (empty reorder triple)."""
    if domain is None:
        domain = Domain.from_command(Pseq(PAR, c, d))
    firsts = sorted(_visible_first_actions(cfg, d, domain, limits), key=render_action)
    residuals, truncated = _reachable_residuals(cfg, c, domain, limits)
    for residual in sorted(residuals, key=str):
        ts = enumerate_traces(cfg, residual, domain, limits)
        if ts.traces <= {()}:
            continue  # effectively finished
        for act in firsts:
            if reorder_triple(cfg, residual, act):
                return Judgment(
                    "blockall", FAILS,
                    counterexample=((act,), None),
                    detail=f"{render_action(act)} reorders past {residual}")
    if truncated:
        return Judgment("blockall", INCONCLUSIVE)
    return Judgment("blockall", HOLDS)


# ---------------------------------------------------------------------------
# the SC oracle: naive interleaving of program-order threads
# ---------------------------------------------------------------------------


def _straight_line_actions(c: Command) -> List[Action]:
    """Flatten a command into its program-order action list; rejects
    commands with choice or iteration (the oracle stays naive)."""
    if isinstance(c, Nil):
        return []
    if isinstance(c, Stmt):
        return [tuple(si.instr for si in c.instrs)]
    if isinstance(c, Pseq):
        return _straight_line_actions(c.left) + _straight_line_actions(c.right)
    raise InputError("scOracle handles straight-line indivisible programs only")


def sc_oracle(program: Program) -> Set[tuple]:
    """Reachable final states by brute-force recursive interleaving with
    direct state updates; no reordering machinery involved."""
    threads = [_straight_line_actions(t.body) for t in program.threads]
    finals: Set[tuple] = set()
    memo: Set[tuple] = set()

    def go(positions: tuple, state: dict) -> None:
        key = (positions, state_key(state))
        if key in memo:
            return
        memo.add(key)
        if all(pos >= len(threads[i]) for i, pos in enumerate(positions)):
            finals.add(state_key(state))
            return
        for i, pos in enumerate(positions):
            if pos >= len(threads[i]):
                continue
            nxt = apply_action(state, threads[i][pos])
            if nxt is None:
                continue
            go(positions[:i] + (pos + 1,) + positions[i + 1:], nxt)

    go(tuple(0 for _ in threads), program.initial_state())
    return finals


def random_sc_program(rng: random.Random, max_threads: int = 3,
                      max_stmts: int = 4) -> Program:
    """Small random programs over values {0,1} for the SC-equivalence check."""
    xs = [ast.shared(n) for n in ("x", "y")]
    n_threads = rng.randint(1, max_threads)
    threads = []
    for t in range(n_threads):
        locs = [ast.local(f"r{t}{j}") for j in range(2)]
        body: List[Command] = []
        for _ in range(rng.randint(1, max_stmts)):
            choice = rng.randrange(4)
            if choice == 0:
                body.append(stmt(ast.assign(rng.choice(xs), Const(rng.randint(0, 1)))))
            elif choice == 1:
                body.append(stmt(ast.assign(rng.choice(locs), ast.ref(rng.choice(xs)))))
            elif choice == 2:
                body.append(stmt(ast.assign(rng.choice(xs), ast.ref(rng.choice(locs)))))
            else:
                body.append(stmt(Guard(ast.BinOp(
                    "==", ast.ref(rng.choice(xs)), Const(rng.randint(0, 1))))))
        threads.append(ast.ThreadDef(
            f"t{t}", tuple((l, 0) for l in locs), ast.seq(C11, *body)))
    return Program(tuple((x, 0) for x in xs), tuple(threads),
                   value_domain=frozenset({0, 1}))


# ---------------------------------------------------------------------------
# the law suite
# ---------------------------------------------------------------------------


@dataclass
class Law:
    law_id: str
    kind: str  # refines | trace_equiv
    build: Callable[..., Tuple[Command, Command]]
    side: Optional[Callable[..., Optional[str]]] = None  # returns violation text


def _require(cond: bool, why: str) -> Optional[str]:
    return None if cond else why


def _action_of(c: Command) -> Action:
    if isinstance(c, Stmt):
        return tuple(si.instr for si in c.instrs)
    raise InputError("expected a single-action command")


LAWS: Dict[str, Law] = {}


def _law(law_id: str, kind: str, side=None):
    def wrap(fn):
        LAWS[law_id] = Law(law_id, kind, fn, side)
        return fn
    return wrap


@_law("keep-order", "refines")
def _keep_order(cfg, m, c1, c2):
    return Pseq(m, c1, c2), pseq(SC, c1, c2)


@_law("chooseL", "refines")
def _choose_l(cfg, c, d):
    return Choice(c, d), c


@_law("fix-interleaving", "refines")
def _fix_interleaving(cfg, a, c, d, side="left"):
    if side == "left":
        return Pseq(PAR, pseq(SC, a, c), d), pseq(SC, a, Pseq(PAR, c, d))
    return Pseq(PAR, c, pseq(SC, a, d)), pseq(SC, a, Pseq(PAR, c, d))


@_law("dist-choice-pl", "trace_equiv")
def _dist_choice_pl(cfg, c1, c2, d):
    return Pseq(PAR, Choice(c1, c2), d), Choice(Pseq(PAR, c1, d), Pseq(PAR, c2, d))


@_law("pseqc-assoc", "trace_equiv")
def _pseqc_assoc(cfg, m, c1, c2, c3):
    return Pseq(m, Pseq(m, c1, c2), c3), Pseq(m, c1, Pseq(m, c2, c3))


@_law("2actions-keep-order", "trace_equiv",
      side=lambda cfg, a, b: _require(
          not ro_instr(cfg, _action_of(a), _action_of(b)), "requires a ⋪ b"))
def _2actions_keep_order(cfg, a, b):
    return Pseq(C11, a, b), pseq(SC, a, b)


@_law("2actions-reduce", "trace_equiv",
      side=lambda cfg, a, b: _require(
          ro_instr(cfg, _action_of(a), _action_of(b)), "requires a ⋖ b"))
def _2actions_reduce(cfg, a, b):
    return Pseq(C11, a, b), Pseq(PAR, a, b)


@_law("reorder-action", "refines",
      side=lambda cfg, a, b, c: _require(
          ro_instr(cfg, _action_of(a), _action_of(b)), "requires a ⋖ b"))
def _reorder_action(cfg, a, b, c):
    return (Pseq(C11, a, pseq(SC, b, c)),
            pseq(SC, b, Pseq(C11, a, c)))


@_law("reduce-scfence", "trace_equiv")
def _reduce_scfence(cfg, c1, c2):
    fence = stmt(ast.sc_fence())
    return (Pseq(C11, c1, Pseq(C11, fence, c2)),
            pseq(SC, c1, pseq(SC, fence, c2)))


@_law("reduce-if-sc", "trace_equiv",
      side=lambda cfg, cond, body: _require(
          bool(ast.expr_vars(cond) & var_sets(body).rsv
               & {v for v in ast.expr_vars(cond) if v.is_shared}),
          "condition and body must read a common shared variable"))
def _reduce_if_sc(cfg, cond, body):
    return ast.if_then_else(C11, cond, body), ast.if_then_else(SC, cond, body)


@_law("reduce-if-C-pl", "trace_equiv",
      side=lambda cfg, cond, asg1, asg2: _require(
          not (ast.expr_vars(cond) & (var_sets(asg1).fv | var_sets(asg2).fv)),
          "condition variables must not occur in either assignment"))
def _reduce_if_c_pl(cfg, cond, asg1, asg2):
    lhs = ast.if_then_else(C11, cond, stmt(asg1), stmt(asg2))
    rhs = Choice(Pseq(PAR, stmt(Guard(cond)), stmt(asg1)),
                 Pseq(PAR, stmt(Guard(ast.negate(cond))), stmt(asg2)))
    return lhs, rhs


@_law("iterate-one-action", "trace_equiv")
def _iterate_one_action(cfg, m, a):
    return Iterate(m, a), Iterate(SC, a)


@_law("reduce-empty-while", "trace_equiv",
      side=lambda cfg, cond: _require(
          any(v.is_shared for v in ast.expr_vars(cond)),
          "condition must read a shared variable"))
def _reduce_empty_while(cfg, cond):
    return ast.while_do(C11, cond, NIL), ast.while_do(SC, cond, NIL)


@_law("blockall-cd", "trace_equiv",
      side=lambda cfg, c, d: _require(
          block_all_check(cfg, c, d).holds, "requires blockall(c, d)"))
def _blockall_cd(cfg, c, d):
    return Pseq(C11, c, d), pseq(SC, c, d)


@_law("blockall-iterate", "trace_equiv",
      side=lambda cfg, c: _require(
          block_all_check(cfg, c, c).holds, "requires blockall(c, c)"))
def _blockall_iterate(cfg, c):
    return Iterate(C11, c), Iterate(SC, c)


@_law("repeat-sc", "trace_equiv",
      side=lambda cfg, a, cond: _require(
          bool(var_sets(a).wv & ast.expr_vars(cond)),
          "requires datadep(a, <cond>)"))
def _repeat_sc(cfg, a, cond):
    return ast.repeat_until(C11, a, cond), ast.repeat_until(SC, a, cond)


def _unique_triple(cfg, a, b) -> Action:
    out = reorder_triple(cfg, a, _action_of(b))
    if not out:
        raise InputError("requires ro<b'>(a, b): reorder triple is empty")
    if len(out) > 1:
        raise InputError("ambiguous b': triple has several outcomes")
    return next(iter(out))


@_law("2actions-swap-order-fwd", "refines")
def _2actions_swap_fwd(cfg, a, b):
    bp = _unique_triple(cfg, a, b)
    return Pseq(C11, a, b), pseq(SC, Stmt(tuple(ast.SpecInstr(i) for i in bp)), a)


@_law("2actions-reduce-fwd", "trace_equiv")
def _2actions_reduce_fwd(cfg, a, b):
    bp = Stmt(tuple(ast.SpecInstr(i) for i in _unique_triple(cfg, a, b)))
    return Pseq(C11, a, b), Choice(pseq(SC, a, b), pseq(SC, bp, a))


@_law("bcb", "refines")
def _bcb(cfg, c, b):
    bp = _unique_triple(cfg, c, b)
    return Pseq(C11, c, b), pseq(SC, Stmt(tuple(ast.SpecInstr(i) for i in bp)), c)


@_law("2actions-reduce-nofwd", "trace_equiv",
      side=lambda cfg, a, b: _require(
          not ro_instr(cfg, _action_of(a),
                       tuple(forward(x, y) for x in _action_of(a)
                             for y in _action_of(b))),
          "requires a ⋪ fwd(a, b)"))
def _2actions_reduce_nofwd(cfg, a, b):
    return Pseq(C11, a, b), pseq(SC, a, b)


def law_check(law_id: str, instantiation: dict, cfg: Optional[ModelConfig] = None,
              limits: ExplorationLimits = DEFAULT_LIMITS) -> Judgment:
    """Check one law's claimed refinement/equivalence on a concrete
    instantiation.  Side-condition violations raise InputError."""
    law = LAWS.get(law_id)
    if law is None:
        raise InputError(f"unknown law {law_id!r}")
    cfg = cfg or ModelConfig()
    if law.side is not None:
        violation = law.side(cfg, **instantiation)
        if violation:
            raise InputError(f"{law_id}: {violation}")
    lhs, rhs = law.build(cfg, **instantiation)
    if law.kind == "refines":
        return refines(cfg, lhs, rhs, limits)
    return trace_equiv(cfg, lhs, rhs, limits)


# ---------------------------------------------------------------------------
# shipped fixtures
# ---------------------------------------------------------------------------


@dataclass
class LawFixture:
    name: str
    law_id: str
    instantiation: dict
    cfg: ModelConfig = field(default_factory=ModelConfig)
    expect: str = HOLDS  # expected judgment status


def _fixtures() -> List[LawFixture]:
    x, y, z, flag, lock = (ast.shared(n) for n in ("x", "y", "z", "flag", "lock"))
    r, r1, r2, taken = (ast.local(n) for n in ("r", "r1", "r2", "taken"))
    one, two = Const(1), Const(2)
    sx1 = stmt(ast.assign(x, one))
    sx2 = stmt(ast.assign(x, two))
    sy1 = stmt(ast.assign(y, one))
    sz1 = stmt(ast.assign(z, one))
    load_rx = stmt(ast.assign(r, ast.ref(x)))
    load_r1x = stmt(ast.assign(r1, ast.ref(x)))
    load_r2x = stmt(ast.assign(r2, ast.ref(x)))
    gas = ast.get_and_set(taken, lock, Const(True))
    fwd_cfg_earliest = ModelConfig(fold_order=EARLIEST_FIRST)
    no_fwd = ModelConfig(forwarding=False)
    return [
        LawFixture("keep-order", "keep-order", dict(m=C11, c1=sx1, c2=sy1)),
        LawFixture("chooseL", "chooseL", dict(c=sx1, d=sy1)),
        LawFixture("fix-interleaving-left", "fix-interleaving",
                   dict(a=sx1, c=sy1, d=stmt(ast.assign(r, ast.ref(z))))),
        LawFixture("fix-interleaving-right", "fix-interleaving",
                   dict(a=sx1, c=sy1, d=stmt(ast.assign(r, ast.ref(z))),
                        side="right")),
        LawFixture("dist-choice-pl", "dist-choice-pl", dict(c1=sx1, c2=sy1, d=sz1)),
        LawFixture("pseqc-assoc", "pseqc-assoc",
                   dict(m=C11, c1=sx1, c2=load_r1x, c3=load_r2x), cfg=no_fwd),
        LawFixture("pseqc-assoc-fwd", "pseqc-assoc",
                   dict(m=C11, c1=sx1, c2=load_r1x, c3=load_r2x),
                   cfg=fwd_cfg_earliest, expect=FAILS),
        LawFixture("2actions-keep-order", "2actions-keep-order",
                   dict(a=sx1, b=load_rx)),
        LawFixture("2actions-reduce", "2actions-reduce", dict(a=sx1, b=sy1)),
        LawFixture("reorder-action", "reorder-action", dict(a=sx1, b=sy1, c=sz1)),
        LawFixture("reduce-scfence", "reduce-scfence", dict(c1=sx1, c2=sy1)),
        LawFixture("reduce-if-sc", "reduce-if-sc",
                   dict(cond=ast.BinOp(">=", ast.ref(y), Const(0)),
                        body=stmt(ast.assign(x, ast.ref(y))))),
        LawFixture("reduce-if-C-pl", "reduce-if-C-pl",
                   dict(cond=ast.BinOp("==", ast.ref(r), one),
                        asg1=ast.assign(x, one), asg2=ast.assign(y, two))),
        LawFixture("iterate-one-action", "iterate-one-action", dict(m=C11, a=sx1)),
        LawFixture("reduce-empty-while", "reduce-empty-while",
                   dict(cond=ast.BinOp("==", ast.ref(flag), Const(0)))),
        LawFixture("blockall-cd", "blockall-cd",
                   dict(c=load_rx,
                        d=ast.if_then_else(
                            C11, ast.BinOp("==", ast.ref(r), Const(42)),
                            stmt(ast.assign(y, ast.ref(r)))))),
        LawFixture("blockall-iterate", "blockall-iterate",
                   dict(c=pseq(C11, stmt(Guard(ast.ref(taken))), gas))),
        LawFixture("repeat-sc", "repeat-sc",
                   dict(a=gas, cond=ast.negate(ast.ref(taken)))),
        LawFixture("2actions-swap-order-fwd", "2actions-swap-order-fwd",
                   dict(a=sx1, b=load_rx)),
        LawFixture("2actions-reduce-fwd", "2actions-reduce-fwd",
                   dict(a=sx1, b=load_rx)),
        LawFixture("bcb", "bcb",
                   dict(c=pseq(C11, load_rx, sx1),
                        b=stmt(ast.assign(y, ast.ref(x))))),
        LawFixture("2actions-reduce-nofwd", "2actions-reduce-nofwd",
                   dict(a=sx1, b=sx2)),
    ]


LAW_FIXTURES: List[LawFixture] = _fixtures()


@dataclass
class LawResult:
    fixture: LawFixture
    judgment: Judgment

    @property
    def passed(self) -> bool:
        return self.judgment.status == self.fixture.expect


def run_law_suite(law_id: Optional[str] = None,
                  limits: ExplorationLimits = DEFAULT_LIMITS) -> List[LawResult]:
    results = []
    for fx in LAW_FIXTURES:
        if law_id is not None and law_id not in (fx.law_id, fx.name):
            continue
        judgment = law_check(fx.law_id, fx.instantiation, fx.cfg, limits)
        results.append(LawResult(fx, judgment))
    if law_id is not None and not results:
        raise InputError(f"no fixture for law {law_id!r}")
    return results
