"""Litmus file syntax: parsing, pretty-printing and the verdict runner.

File format (extension `.lit`, `#` comments):

    litmus "<name>"
    values 0,1,2,42            # optional; default {0,1} plus literals
    shared x = 0, flag = 0
    thread t0 { local f = 0; <stmt>* }
    model c11 | sc | par       # optional; default c11
    sfp on|off  ocmore a|b|c|d|e  forwarding on|off  optimize on|off
    incremental on|off  evalorder nondet|ltr  foldorder nearest|earliest
    allowed (<expr>)  forbidden (<expr>)  always (<expr>)

Statements: assignments (`x = e;`, `x.rel = e;`), `guard(e);`, fences
(`fence.sc;` etc), `if (e) { } else { }`, `while (e) { }`,
`repeat { } until (e);`, `r = cas(x,e1,e2);`, `cas.ar(x,e1,e2);`,
`r = faa(x,e);`, `r = getset.ar(x,e);`, `atomic { s1; s2; }` (one action),
with `[divis]` opting a statement into incremental execution.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Tuple, Union

from . import ast
from .ast import (ACQ_REL, ACQUIRE, C11, CONSUME, EMPTY_OCS, NIL, RELAXED,
                  RELEASE, SEQCST, BinOp, Command, Const, Expr, Fence, Guard,
                  Program, SpecInstr, Stmt, ThreadDef, UnOp, VarId, VarRef)
from .analysis import (FAILS, HOLDS, INCONCLUSIVE, InputError, Judgment,
                       hoare_check)
from .reorder import (EARLIEST_FIRST, LEFT_TO_RIGHT, NEAREST_FIRST, NONDET,
                      ModelConfig)
from .semantics import (DEFAULT_LIMITS, ExplorationLimits, Label,
                        explore_finals, render_state)


class ParseError(Exception):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.msg = msg
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# lexer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"[^"\n]*")
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>->|==|!=|<=|>=|&&|\|\||[-+*!<>=(){},;.\[\]])
""", re.VERBOSE)

RESERVED = {
    "litmus", "values", "shared", "thread", "local", "model", "sfp", "ocmore",
    "forwarding", "optimize", "incremental", "evalorder", "foldorder",
    "allowed", "forbidden", "always", "guard", "fence", "if", "else", "while",
    "repeat", "until", "cas", "faa", "getset", "atomic", "true", "false",
    "on", "off", "c11", "sc", "par", "nondet", "ltr", "nearest", "earliest",
    "divis", "nil",
}

_SUFFIX_OCS = {
    "rlx": frozenset({RELAXED}),
    "rel": frozenset({RELEASE}),
    "acq": frozenset({ACQUIRE}),
    "con": frozenset({CONSUME}),
    "sc": frozenset({SEQCST}),
    "ar": ACQ_REL,
}

_FENCE_FORMS = {
    "sc": ast.sc_fence(),
    "rel": ast.rel_fence(),
    "acq": ast.acq_fence(),
    "store": Fence(ast.STORE_FENCE),
    "load": Fence(ast.LOAD_FENCE),
    "full": Fence(ast.FULL_FENCE),
}


@dataclass(frozen=True)
class Token:
    kind: str  # string | int | ident | sym | eof
    text: str
    line: int
    col: int


def _lex(text: str) -> List[Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# expectations / files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Expectation:
    kind: str  # allowed | forbidden | always
    condition: Expr

    def render(self) -> str:
        return f"{self.kind} ({expr_source(self.condition)})"


@dataclass
class LitmusFile:
    name: str
    program: Program
    model_overrides: Dict[str, object]
    expectations: Tuple[Expectation, ...]
    surface: tuple = field(default=(), compare=False)

    def pretty(self) -> str:
        return pretty_litmus(self)

    def effective_config(self, base: Optional[ModelConfig] = None,
                         cli_overrides: Optional[Dict[str, object]] = None) -> ModelConfig:
        cfg = base or ModelConfig()
        if self.model_overrides:
            cfg = replace(cfg, **self.model_overrides)
        if cli_overrides:
            cfg = replace(cfg, **cli_overrides)
        return cfg


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_TYPE_INT = "int"
_TYPE_BOOL = "bool"

_SETTING_KEYWORDS = ("model", "sfp", "ocmore", "forwarding", "optimize",
                     "incremental", "evalorder", "foldorder")


class _Parser:
    def __init__(self, text: str, left_nested: bool = False):
        self.tokens = _lex(text)
        self.pos = 0
        self.left_nested = left_nested
        self.shared: Dict[str, Tuple[VarId, object]] = {}
        self.locals: Dict[str, Dict[str, Tuple[VarId, object]]] = {}
        self.all_names: Dict[str, VarId] = {}
        self.types: Dict[VarId, str] = {}
        self.current_thread: Optional[str] = None

    # -- token helpers ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            self.error(f"expected {want!r}, found {tok.text or 'end of file'!r}", tok)
        return tok

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        tok = self.peek()
        if tok.kind == kind and (text is None or tok.text == text):
            self.pos += 1
            return tok
        return None

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    # -- toplevel ----------------------------------------------------------

    def parse(self) -> LitmusFile:
        self.expect("ident", "litmus")
        name = self.expect("string").text[1:-1]
        values: Optional[frozenset] = None
        threads: List[Tuple[str, List[str], List[Tuple[Command, str]]]] = []
        overrides: Dict[str, object] = {}
        expectations: List[Expectation] = []
        while not self.at("eof"):
            tok = self.peek()
            if tok.kind != "ident":
                self.error(f"unexpected {tok.text!r}")
            word = tok.text
            if word == "values":
                self.next()
                values = frozenset(self._int_list())
            elif word == "shared":
                self.next()
                self._decl_list(None)
            elif word == "thread":
                self.next()
                threads.append(self._thread())
            elif word in _SETTING_KEYWORDS:
                self._setting(overrides)
            elif word in ("allowed", "forbidden", "always"):
                self.next()
                self.expect("sym", "(")
                cond = self._expr()
                self.expect("sym", ")")
                self._check_type(cond, _TYPE_BOOL, tok)
                expectations.append(Expectation(word, cond))
            else:
                self.error(f"unexpected keyword {word!r}")
        if not expectations:
            raise ParseError("litmus file needs at least one expectation")
        prog_threads = []
        surface = []
        for tname, local_lines, stmts in threads:
            locs = tuple(self.locals.get(tname, {}).values())
            body = self._sequence([c for c, _ in stmts])
            prog_threads.append(ThreadDef(tname, locs, body))
            surface.append((tname, tuple(local_lines), tuple(s for _, s in stmts)))
        program = Program(tuple(self.shared.values()), tuple(prog_threads), values)
        for exp in expectations:
            missing = ast.expr_vars(exp.condition) - set(self.types)
            if missing:
                raise ParseError(
                    "undeclared variable(s) in expectation: "
                    + ", ".join(sorted(v.name for v in missing)))
        return LitmusFile(name, program, overrides, tuple(expectations),
                          tuple(surface))

    def _sequence(self, cmds: List[Command]) -> Command:
        if self.left_nested:
            return ast.seq_left(C11, *cmds)
        return ast.seq(C11, *cmds)

    def _int_list(self) -> List[int]:
        out = [self._int_literal()]
        while self.accept("sym", ","):
            out.append(self._int_literal())
        return out

    def _int_literal(self) -> int:
        neg = bool(self.accept("sym", "-"))
        tok = self.expect("int")
        return -int(tok.text) if neg else int(tok.text)

    def _value_literal(self):
        if self.accept("ident", "true"):
            return True
        if self.accept("ident", "false"):
            return False
        return self._int_literal()

    def _declare(self, name_tok: Token, value, thread: Optional[str]) -> None:
        name = name_tok.text
        if name in RESERVED:
            self.error(f"{name!r} is reserved", name_tok)
        if name in self.all_names:
            self.error(f"variable {name!r} already declared", name_tok)
        var = ast.local(name) if thread else ast.shared(name)
        self.all_names[name] = var
        self.types[var] = _TYPE_BOOL if type(value) is bool else _TYPE_INT
        if thread:
            self.locals.setdefault(thread, {})[name] = (var, value)
        else:
            self.shared[name] = (var, value)

    def _decl_list(self, thread: Optional[str]) -> List[str]:
        rendered = []
        while True:
            name_tok = self.expect("ident")
            self.expect("sym", "=")
            value = self._value_literal()
            self._declare(name_tok, value, thread)
            rendered.append(f"{name_tok.text} = {_render_value(value)}")
            if not self.accept("sym", ","):
                break
        return rendered

    def _setting(self, overrides: Dict[str, object]) -> None:
        key = self.next().text
        val_tok = self.next()
        val = val_tok.text
        def onoff() -> bool:
            if val not in ("on", "off"):
                self.error(f"expected on/off after {key}", val_tok)
            return val == "on"
        if key == "model":
            if val not in ("c11", "sc", "par"):
                self.error("expected c11, sc or par", val_tok)
            overrides["base"] = val
        elif key == "sfp":
            overrides["sfp"] = onoff()
        elif key == "ocmore":
            if val not in ("a", "b", "c", "d", "e"):
                self.error("expected one of a-e", val_tok)
            overrides["ocmore_option"] = val
        elif key == "forwarding":
            overrides["forwarding"] = onoff()
        elif key == "optimize":
            overrides["optimize"] = onoff()
        elif key == "incremental":
            overrides["incremental"] = onoff()
        elif key == "evalorder":
            if val not in ("nondet", "ltr"):
                self.error("expected nondet or ltr", val_tok)
            overrides["eval_order"] = NONDET if val == "nondet" else LEFT_TO_RIGHT
        elif key == "foldorder":
            if val not in ("nearest", "earliest"):
                self.error("expected nearest or earliest", val_tok)
            overrides["fold_order"] = (NEAREST_FIRST if val == "nearest"
                                       else EARLIEST_FIRST)
        else:  # pragma: no cover
            self.error(f"unknown setting {key!r}")

    # -- threads and statements ---------------------------------------------

    def _thread(self):
        name_tok = self.expect("ident")
        tname = name_tok.text
        if any(t == tname for t in self.locals):
            self.error(f"thread {tname!r} already defined", name_tok)
        self.locals.setdefault(tname, {})
        self.current_thread = tname
        self.expect("sym", "{")
        local_lines: List[str] = []
        stmts: List[Tuple[Command, str]] = []
        while not self.at("sym", "}"):
            if self.at("ident", "local"):
                self.next()
                decls = self._decl_list(tname)
                self.expect("sym", ";")
                local_lines.extend(decls)
                if stmts:
                    self.error("local declarations must precede statements")
            else:
                stmts.append(self._statement())
        self.expect("sym", "}")
        self.current_thread = None
        return tname, local_lines, stmts

    def _lookup(self, tok: Token) -> VarId:
        var = self.all_names.get(tok.text)
        if var is None:
            self.error(f"undeclared variable {tok.text!r}", tok)
        if var.kind == ast.LOCAL and self.current_thread is not None:
            if tok.text not in self.locals.get(self.current_thread, {}):
                self.error(f"local {tok.text!r} used outside its thread", tok)
        return var

    def _suffix(self) -> Optional[frozenset]:
        if self.at("sym", ".") and self.peek(1).kind == "ident" \
                and self.peek(1).text in _SUFFIX_OCS:
            self.next()
            return _SUFFIX_OCS[self.next().text]
        return None

    def _statement(self, divis_override: Optional[bool] = None) -> Tuple[Command, str]:
        tok = self.peek()
        if self.accept("sym", "["):
            self.expect("ident", "divis")
            self.expect("sym", "]")
            cmd, text = self._statement(divis_override=True)
            return cmd, f"[divis] {text}"
        if tok.kind != "ident":
            self.error(f"expected a statement, found {tok.text!r}")
        word = tok.text
        if word == "guard":
            self.next()
            self.expect("sym", "(")
            cond = self._expr()
            self.expect("sym", ")")
            self.expect("sym", ";")
            self._check_type(cond, _TYPE_BOOL, tok)
            div = True if divis_override is None else divis_override
            return (Stmt((SpecInstr(Guard(cond), div),)),
                    f"guard({expr_source(cond)});")
        if word == "fence":
            self.next()
            self.expect("sym", ".")
            kind_tok = self.expect("ident")
            if kind_tok.text not in _FENCE_FORMS:
                self.error(f"unknown fence form {kind_tok.text!r}", kind_tok)
            self.expect("sym", ";")
            return (ast.stmt(_FENCE_FORMS[kind_tok.text]),
                    f"fence.{kind_tok.text};")
        if word == "if":
            return self._if()
        if word == "while":
            self.next()
            self.expect("sym", "(")
            cond = self._expr()
            self.expect("sym", ")")
            self._check_type(cond, _TYPE_BOOL, tok)
            body, body_text = self._block()
            return (ast.while_do(C11, cond, body),
                    f"while ({expr_source(cond)}) {body_text}")
        if word == "repeat":
            self.next()
            body, body_text = self._block()
            self.expect("ident", "until")
            self.expect("sym", "(")
            cond = self._expr()
            self.expect("sym", ")")
            self.expect("sym", ";")
            self._check_type(cond, _TYPE_BOOL, tok)
            return (ast.repeat_until(C11, body, cond),
                    f"repeat {body_text} until ({expr_source(cond)});")
        if word == "atomic":
            return self._atomic()
        if word == "cas":
            return self._rmw_statement(None)
        if word in ("faa", "getset"):
            self.error(f"{word} needs a result variable (r = {word}(...))", tok)
        # assignment or `r = rmw(...)`
        target_tok = self.expect("ident")
        target = self._lookup(target_tok)
        suffix = self._suffix()
        self.expect("sym", "=")
        if self.peek().kind == "ident" and self.peek().text in ("cas", "faa", "getset"):
            if suffix is not None:
                self.error("result variable takes no ordering suffix", target_tok)
            return self._rmw_statement(target)
        rhs = self._expr()
        self.expect("sym", ";")
        if target.kind == ast.LOCAL and suffix is not None:
            self.error("local target takes no ordering suffix", target_tok)
        self._check_type(rhs, self.types[target], target_tok)
        ocs = suffix if suffix is not None else EMPTY_OCS
        instr = ast.assign(target, rhs) if not ocs else ast.Assign(target, ocs, rhs)
        div = True if divis_override is None else divis_override
        text = f"{_render_target(target, instr.ocs)} = {expr_source(rhs)};"
        return Stmt((SpecInstr(instr, div),)), text

    def _if(self) -> Tuple[Command, str]:
        tok = self.expect("ident", "if")
        self.expect("sym", "(")
        cond = self._expr()
        self.expect("sym", ")")
        self._check_type(cond, _TYPE_BOOL, tok)
        then, then_text = self._block()
        els, els_text = NIL, None
        if self.accept("ident", "else"):
            els, els_text = self._block()
        text = f"if ({expr_source(cond)}) {then_text}"
        if els_text is not None:
            text += f" else {els_text}"
        return ast.if_then_else(C11, cond, then, els), text

    def _block(self) -> Tuple[Command, str]:
        self.expect("sym", "{")
        stmts: List[Tuple[Command, str]] = []
        while not self.at("sym", "}"):
            stmts.append(self._statement())
        self.expect("sym", "}")
        body = self._sequence([c for c, _ in stmts])
        inner = " ".join(s for _, s in stmts)
        return body, "{ " + inner + " }" if inner else "{ }"

    def _atomic(self) -> Tuple[Command, str]:
        self.expect("ident", "atomic")
        self.expect("sym", "{")
        members: List[SpecInstr] = []
        texts: List[str] = []
        while not self.at("sym", "}"):
            divis = False
            prefix = ""
            if self.accept("sym", "["):
                self.expect("ident", "divis")
                self.expect("sym", "]")
                divis = True
                prefix = "[divis] "
            cmd, text = self._simple_statement()
            members.extend(SpecInstr(si.instr, divis) for si in cmd.instrs)
            texts.append(prefix + text)
        self.expect("sym", "}")
        if not members:
            self.error("atomic block is empty")
        return Stmt(tuple(members)), "atomic { " + " ".join(texts) + " }"

    def _simple_statement(self) -> Tuple[Stmt, str]:
        cmd, text = self._statement()
        if not isinstance(cmd, Stmt):
            self.error("only assignments, guards and fences fit in atomic blocks")
        return cmd, text

    def _rmw_statement(self, result: Optional[VarId]) -> Tuple[Command, str]:
        op_tok = self.expect("ident")
        op = op_tok.text
        suffix = None
        if self.at("sym", "."):
            save = self.pos
            self.next()
            suf_tok = self.expect("ident")
            if suf_tok.text in ("ar", "sc"):
                suffix = suf_tok.text
            else:
                self.error(f"unsupported {op} suffix .{suf_tok.text}", suf_tok)
        self.expect("sym", "(")
        x_tok = self.expect("ident")
        x = self._lookup(x_tok)
        if not x.is_shared:
            self.error(f"{op} target must be shared", x_tok)
        self.expect("sym", ",")
        args = [self._expr()]
        while self.accept("sym", ","):
            args.append(self._expr())
        self.expect("sym", ")")
        self.expect("sym", ";")
        load_ocs, store_ocs = {
            None: (frozenset({RELAXED}), frozenset({RELAXED})),
            "ar": (frozenset({ACQUIRE}), frozenset({RELEASE})),
            "sc": (frozenset({SEQCST}), frozenset({SEQCST})),
        }[suffix]
        dot = f".{suffix}" if suffix else ""
        argtext = ", ".join([x.name] + [expr_source(a) for a in args])
        head = f"{result.name} = " if result is not None else ""
        text = f"{head}{op}{dot}({argtext});"
        if op == "cas":
            if len(args) != 2:
                self.error("cas takes (x, expected, update)", op_tok)
            for a in args:
                self._check_type(a, self.types[x], op_tok)
            if result is None:
                return ast.cas(x, args[0], args[1], load_ocs, store_ocs), text
            if self.types[result] != _TYPE_BOOL:
                self.error("cas result variable must be boolean", op_tok)
            return ast.cas_with_result(C11, result, x, args[0], args[1],
                                       load_ocs, store_ocs), text
        if result is None:
            self.error(f"{op} needs a result variable", op_tok)
        if op == "faa":
            if len(args) != 1:
                self.error("faa takes (x, addend)", op_tok)
            if self.types[x] != _TYPE_INT or self.types[result] != _TYPE_INT:
                self.error("faa needs integer variables", op_tok)
            self._check_type(args[0], _TYPE_INT, op_tok)
            return ast.faa(result, x, args[0], load_ocs, store_ocs), text
        if op == "getset":
            if len(args) != 1:
                self.error("getset takes (x, value)", op_tok)
            self._check_type(args[0], self.types[x], op_tok)
            if self.types[result] != self.types[x]:
                self.error("getset result type must match the variable", op_tok)
            return ast.get_and_set(result, x, args[0]), text
        self.error(f"unknown primitive {op!r}", op_tok)

    # -- expressions ---------------------------------------------------------

    def _expr(self) -> Expr:
        return self._implies()

    def _implies(self) -> Expr:
        left = self._or()
        if self.accept("sym", "->"):
            right = self._implies()
            return BinOp("||", ast.negate(left), right)
        return left

    def _or(self) -> Expr:
        left = self._and()
        while self.accept("sym", "||"):
            left = BinOp("||", left, self._and())
        return left

    def _and(self) -> Expr:
        left = self._cmp()
        while self.accept("sym", "&&"):
            left = BinOp("&&", left, self._cmp())
        return left

    def _cmp(self) -> Expr:
        left = self._add()
        tok = self.peek()
        if tok.kind == "sym" and tok.text in ("==", "!=", "<", "<=", ">", ">="):
            self.next()
            return BinOp(tok.text, left, self._add())
        return left

    def _add(self) -> Expr:
        left = self._mul()
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text in ("+", "-"):
                self.next()
                left = BinOp(tok.text, left, self._mul())
            else:
                return left

    def _mul(self) -> Expr:
        left = self._unary()
        while self.accept("sym", "*"):
            left = BinOp("*", left, self._unary())
        return left

    def _unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "sym" and tok.text in ("-", "!"):
            self.next()
            return UnOp(tok.text, self._unary())
        return self._atom()

    def _atom(self) -> Expr:
        tok = self.next()
        if tok.kind == "int":
            return Const(int(tok.text))
        if tok.kind == "ident" and tok.text == "true":
            return Const(True)
        if tok.kind == "ident" and tok.text == "false":
            return Const(False)
        if tok.kind == "ident":
            if tok.text in RESERVED:
                self.error(f"{tok.text!r} is reserved", tok)
            var = self._lookup(tok)
            suffix = self._suffix()
            if var.kind == ast.LOCAL:
                if suffix is not None:
                    self.error("local variables take no ordering suffix", tok)
                return VarRef(var, EMPTY_OCS)
            return VarRef(var, suffix if suffix is not None else frozenset({RELAXED}))
        if tok.kind == "sym" and tok.text == "(":
            inner = self._expr()
            self.expect("sym", ")")
            return inner
        self.error(f"expected an expression, found {tok.text!r}", tok)

    # -- type checking ---------------------------------------------------

    def _type_of(self, e: Expr, tok: Token) -> str:
        if isinstance(e, Const):
            return _TYPE_BOOL if type(e.value) is bool else _TYPE_INT
        if isinstance(e, VarRef):
            return self.types[e.var]
        if isinstance(e, UnOp):
            inner = self._type_of(e.operand, tok)
            want = _TYPE_INT if e.op == "-" else _TYPE_BOOL
            if inner != want:
                self.error(f"operator {e.op!r} needs a {want} operand", tok)
            return want
        if isinstance(e, BinOp):
            lt = self._type_of(e.left, tok)
            rt = self._type_of(e.right, tok)
            if e.op in ("+", "-", "*", "<", "<=", ">", ">="):
                if lt != _TYPE_INT or rt != _TYPE_INT:
                    self.error(f"operator {e.op!r} needs integer operands", tok)
                return _TYPE_INT if e.op in ("+", "-", "*") else _TYPE_BOOL
            if e.op in ("==", "!="):
                if lt != rt:
                    self.error("comparison across types", tok)
                return _TYPE_BOOL
            if e.op in ("&&", "||"):
                if lt != _TYPE_BOOL or rt != _TYPE_BOOL:
                    self.error(f"operator {e.op!r} needs boolean operands", tok)
                return _TYPE_BOOL
        raise TypeError(e)

    def _check_type(self, e: Expr, want: str, tok: Token) -> None:
        got = self._type_of(e, tok)
        if got != want:
            self.error(f"expected a {want} expression, got {got}", tok)


def parse_litmus(text: Union[str, bytes], left_nested: bool = False) -> LitmusFile:
    """Parse a litmus file; raises ParseError with line/column on bad input."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _Parser(text, left_nested).parse()


# ---------------------------------------------------------------------------
# pretty printing (parse . pretty . parse is the identity)
# ---------------------------------------------------------------------------

_PRECEDENCE = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 3, "<=": 3, ">": 3,
               ">=": 3, "+": 4, "-": 4, "*": 5}


def expr_source(e: Expr, parent_prec: int = 0) -> str:
    if isinstance(e, Const):
        return str(e)
    if isinstance(e, VarRef):
        return _render_target(e.var, e.ocs)
    if isinstance(e, UnOp):
        return f"{e.op}{expr_source(e.operand, 6)}"
    if isinstance(e, BinOp):
        prec = _PRECEDENCE[e.op]
        left = expr_source(e.left, prec)
        right = expr_source(e.right, prec + 1)
        text = f"{left} {e.op} {right}"
        return f"({text})" if prec < parent_prec else text
    raise TypeError(e)


def _render_target(var: VarId, ocs: frozenset) -> str:
    if var.kind == ast.LOCAL or not ocs or ocs == frozenset({RELAXED}):
        return var.name
    if ocs == ACQ_REL:
        return f"{var.name}.ar"
    return var.name + "." + ".".join(sorted(ocs))


def _render_value(v) -> str:
    if type(v) is bool:
        return "true" if v else "false"
    return str(v)


_SETTING_RENDER = {
    "base": ("model", lambda v: v),
    "sfp": ("sfp", lambda v: "on" if v else "off"),
    "ocmore_option": ("ocmore", lambda v: v),
    "forwarding": ("forwarding", lambda v: "on" if v else "off"),
    "optimize": ("optimize", lambda v: "on" if v else "off"),
    "incremental": ("incremental", lambda v: "on" if v else "off"),
    "eval_order": ("evalorder", lambda v: "nondet" if v == NONDET else "ltr"),
    "fold_order": ("foldorder",
                   lambda v: "nearest" if v == NEAREST_FIRST else "earliest"),
}


def pretty_litmus(f: LitmusFile) -> str:
    lines = [f'litmus "{f.name}"']
    if f.program.value_domain is not None:
        lines.append("values " + ",".join(str(v) for v in
                                          sorted(f.program.value_domain)))
    if f.program.shared_decls:
        lines.append("shared " + ", ".join(
            f"{v.name} = {_render_value(val)}" for v, val in f.program.shared_decls))
    for tname, local_lines, stmts in f.surface:
        lines.append(f"thread {tname} {{")
        for decl in local_lines:
            lines.append(f"  local {decl};")
        for s in stmts:
            lines.append(f"  {s}")
        lines.append("}")
    for key in _SETTING_RENDER:
        if key in f.model_overrides:
            word, render = _SETTING_RENDER[key]
            lines.append(f"{word} {render(f.model_overrides[key])}")
    for exp in f.expectations:
        lines.append(exp.render())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# running a file
# ---------------------------------------------------------------------------

REPORT_SCHEMA = "memmod-report/1"


@dataclass
class ExpectationResult:
    kind: str
    condition: str
    status: str  # holds | fails | inconclusive_at_bound (of the judgment)
    met: bool
    inconclusive: bool
    trace: Optional[List[str]] = None  # witness or counterexample lines
    final_state: Optional[str] = None


@dataclass
class Report:
    name: str
    file: str
    config: ModelConfig
    expectations: List[ExpectationResult]
    configs_explored: int
    finals_count: int
    bounded: bool
    elapsed: float

    @property
    def exit_status(self) -> int:
        if any(not r.met and not r.inconclusive for r in self.expectations):
            return 1
        if any(r.inconclusive for r in self.expectations) or self.bounded:
            return 2
        return 0

    def to_json(self, include_witness: bool = True) -> str:
        cfg = self.config
        payload = {
            "schema": REPORT_SCHEMA,
            "name": self.name,
            "file": self.file,
            "config": {
                "model": cfg.base,
                "guard_store_reorder": cfg.guard_store_reorder,
                "forwarding": cfg.forwarding,
                "sfp": cfg.sfp,
                "ocmore": cfg.ocmore_option,
                "optimize": cfg.optimize,
                "incremental": cfg.incremental,
                "evalorder": cfg.eval_order,
                "foldorder": cfg.fold_order,
            },
            "expectations": [
                {
                    "kind": r.kind,
                    "condition": r.condition,
                    "status": r.status,
                    "met": r.met,
                    **({"trace": r.trace} if include_witness and r.trace else {}),
                    **({"final_state": r.final_state}
                       if include_witness and r.final_state else {}),
                }
                for r in self.expectations
            ],
            "stats": {
                "configs_explored": self.configs_explored,
                "finals": self.finals_count,
            },
            "exit_status": self.exit_status,
        }
        return json.dumps(payload, indent=2)

    def lines(self, witness: bool = False) -> List[str]:
        out = [f"{self.name}: model={self.config.base}"
               f" sfp={'on' if self.config.sfp else 'off'}"
               f" forwarding={'on' if self.config.forwarding else 'off'}"]
        for r in self.expectations:
            verdict = ("inconclusive at bound" if r.inconclusive
                       else "pass" if r.met else "FAIL")
            out.append(f"  {r.kind} ({r.condition}): {r.status} [{verdict}]")
            if witness and r.trace:
                for line in r.trace:
                    out.append(f"    {line}")
                if r.final_state:
                    out.append(f"    final: {r.final_state}")
        out.append(f"  explored {self.configs_explored} configurations,"
                   f" {self.finals_count} final states, {self.elapsed:.3f}s")
        return out


def _trace_lines(witness: Iterable[Label]) -> List[str]:
    return [label.render() for label in witness]


def run_litmus(f: LitmusFile, cfg: Optional[ModelConfig] = None,
               limits: ExplorationLimits = DEFAULT_LIMITS,
               cli_overrides: Optional[Dict[str, object]] = None,
               file_path: str = "") -> Report:
    """Check every expectation: allowed needs a reachable witness, forbidden
    needs unreachability, always needs every final state to satisfy the
    condition."""
    effective = f.effective_config(cfg, cli_overrides)
    started = time.perf_counter()
    finals = explore_finals(effective, f.program, limits)
    results = []
    for exp in f.expectations:
        if exp.kind == "always":
            j = hoare_check(effective, f.program, None, exp.condition,
                            "always", limits, finals=finals)
            met = j.status == HOLDS
        else:
            j = hoare_check(effective, f.program, None, exp.condition,
                            "reach", limits, finals=finals)
            met = j.status == (HOLDS if exp.kind == "allowed" else FAILS)
        trace = None
        final_state = None
        if j.witness is not None:
            trace = _trace_lines(j.witness)
        elif j.counterexample is not None:
            labels, _ = j.counterexample
            trace = _trace_lines(labels)
        if j.state is not None:
            final_state = render_state(j.state)
        results.append(ExpectationResult(
            kind=exp.kind,
            condition=expr_source(exp.condition),
            status=j.status,
            met=met and j.status != INCONCLUSIVE,
            inconclusive=j.status == INCONCLUSIVE,
            trace=trace,
            final_state=final_state,
        ))
    elapsed = time.perf_counter() - started
    return Report(f.name, file_path, effective, results,
                  finals.configs_explored, len(finals.finals), finals.bounded,
                  elapsed)
