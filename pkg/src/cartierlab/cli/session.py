"""Line-oriented session files: parsing, validation and canonical printing.

Grammar (``#`` starts a comment)::

    field p=<int> [e=<int>] [modulus=<poly in t>]
    ring [NAME] vars=[x,y,...] [order=grevlex|deglex|lex]
    module [NAME] rank=<r> [rels=[[<poly>,...],...]] [ring=NAME]
    kappa [MODULE] g<i> d=[<d1>,...] = [<poly>,...]
    morphism NAME SOURCE -> TARGET matrix=[[<poly>,...],...]
    cmd <command> <key>=<value> ...

Bare values end at whitespace; bracketed values may contain spaces.  Rings
default to the name ``R`` and use the latest field; modules default to ``M``
and to the latest ring; a ``kappa`` line without a module name targets the
latest module.  Row i of a morphism matrix is the image of generator g_i.
"""

import re
from dataclasses import dataclass, field

from ..cartier import CartierModule, CartierMorphism
from ..errors import CartierLabError
from ..semialg.field import FieldSpec
from ..semialg.modules import ModulePresentation, to_vector
from ..semialg.poly import Polynomial, PolynomialRing, PolynomialSyntaxError

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_CMD_NAME = re.compile(r"[a-z][a-z\-]*")


class SessionError(CartierLabError, ValueError):
    """Parse or validation failure with a source location."""

    def __init__(self, message, line, column=None):
        loc = f"line {line}" + (f", column {column}" if column else "")
        super().__init__(f"{loc}: {message}")
        self.reason = message
        self.line = line
        self.column = column


# argument kinds: module, morphism, poly, polys, element, elements, int, exponent
COMMANDS = {
    "nilpotent": {"M": "module"},
    "element-nilpotent": {"M": "module", "m": "element"},
    "closure": {"M": "module", "gens": "elements"},
    "niliso": {"f": "morphism"},
    "zero-in-crys": {"f": "morphism"},
    "nilpotent-part": {"M": "module", "e?": "exponent"},
    "pushforward": {"M": "module", "extra?": "int"},
    "shriek": {"M": "module", "g": "polys"},
    "stalk": {"M": "module", "point": "polys"},
    "support": {"M": "module"},
    "restrict": {"M": "module", "g": "poly"},
    "kashiwara": {"M": "module", "f": "poly", "N": "int"},
    "pointwise": {"M": "module", "degree": "int"},
}


@dataclass
class FieldDecl:
    line: int
    p: int
    e: int
    modulus: list | None
    spec: FieldSpec


@dataclass
class RingDecl:
    line: int
    name: str
    variables: tuple
    order: str
    ring: PolynomialRing


@dataclass
class ModuleDecl:
    line: int
    name: str
    ring_name: str
    rank: int
    relations: list


@dataclass
class KappaDecl:
    line: int
    module: str
    generator: int
    digit: tuple
    values: list


@dataclass
class MorphismDecl:
    line: int
    name: str
    source: str
    target: str
    matrix: list


@dataclass
class Command:
    line: int
    name: str
    args: dict
    text: dict


@dataclass
class Session:
    declarations: list = field(default_factory=list)  # commands included, in source order
    commands: list = field(default_factory=list)
    rings: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)


def compact(f):
    return str(f).replace(" ", "")


class _Cursor:
    def __init__(self, text, line):
        self.text = text
        self.line = line
        self.pos = 0

    def error(self, message, pos=None):
        return SessionError(message, self.line, (self.pos if pos is None else pos) + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def done(self):
        self.skip()
        return self.pos >= len(self.text)

    def peek_word(self):
        self.skip()
        m = _NAME.match(self.text, self.pos)
        return m.group(0) if m else None

    def word(self, what="name", pattern=_NAME):
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group(0)

    def expect(self, token):
        self.skip()
        if not self.text.startswith(token, self.pos):
            raise self.error(f"expected '{token}'")
        self.pos += len(token)

    def value(self):
        """Bracketed (balanced) or bare value; returns (text, start)."""
        self.skip()
        start = self.pos
        if self.pos >= len(self.text):
            raise self.error("expected a value")
        if self.text[self.pos] == "[":
            depth = 0
            while self.pos < len(self.text):
                ch = self.text[self.pos]
                depth += ch == "["
                depth -= ch == "]"
                self.pos += 1
                if depth == 0:
                    return self.text[start:self.pos], start
            raise self.error("unbalanced '['", start)
        while self.pos < len(self.text) and not self.text[self.pos].isspace():
            self.pos += 1
        return self.text[start:self.pos], start

    def key_values(self):
        out = {}
        while not self.done():
            kpos = self.pos
            key = self.word("key=value")
            if key in out:
                raise self.error(f"duplicate key '{key}'", kpos)
            self.expect("=")
            out[key] = self.value()
        return out


def _strip_comment(line):
    depth = 0
    for k, ch in enumerate(line):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "#" and depth == 0:
            return line[:k]
    return line


def split_list(text, start, cur):
    """Items of a bracketed list as (text, absolute start) pairs."""
    if not (text.startswith("[") and text.endswith("]")):
        raise cur.error("expected a bracketed list", start)
    items, depth, begin = [], 0, 1
    body = text[1:-1]
    for k, ch in enumerate(body):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            items.append((body[begin - 1:k], start + begin))
            begin = k + 2
    tail = body[begin - 1:]
    if tail.strip() or items:
        items.append((tail, start + begin))
    out = []
    for item, pos in items:
        lead = len(item) - len(item.lstrip())
        if not item.strip():
            raise cur.error("empty list item", pos)
        out.append((item.strip(), pos + lead))
    return out


def _int(cur, text, pos, what, minimum=None):
    if not re.fullmatch(r"-?\d+", text):
        raise cur.error(f"{what} must be an integer", pos)
    v = int(text)
    if minimum is not None and v < minimum:
        raise cur.error(f"{what} must be at least {minimum}", pos)
    return v


def _poly(cur, ring, text, pos):
    try:
        return ring.parse(text)
    except PolynomialSyntaxError as exc:
        raise cur.error(exc.reason, pos + exc.column - 1) from None


def _polys(cur, ring, text, pos, allow_bare=True):
    if text.startswith("["):
        return [_poly(cur, ring, t, p) for t, p in split_list(text, pos, cur)]
    if allow_bare:
        return [_poly(cur, ring, text, pos)]
    raise cur.error("expected a bracketed list", pos)


def _element(cur, ring, rank, text, pos):
    comps = _polys(cur, ring, text, pos, allow_bare=rank == 1)
    if len(comps) != rank:
        raise cur.error(f"expected {rank} components, got {len(comps)}", pos)
    return comps


class _Parser:
    def __init__(self):
        self.session = Session()
        self.field = None
        self.current_ring = None
        self.current_module = None
        self.names = {}
        self.tables = {}

    def declare(self, cur, name, kind, pos):
        if name in self.names:
            raise cur.error(f"'{name}' is already declared (line {self.names[name][1]})", pos)
        self.names[name] = (kind, cur.line)

    def lookup(self, cur, name, kind, pos):
        entry = self.names.get(name)
        if entry is None:
            raise cur.error(f"undeclared {kind} '{name}'", pos)
        if entry[0] != kind:
            raise cur.error(f"'{name}' is a {entry[0]}, not a {kind}", pos)
        return name

    def line(self, text, lineno):
        cur = _Cursor(_strip_comment(text), lineno)
        if cur.done():
            return
        kw = cur.word("a keyword")
        handler = getattr(self, f"do_{kw}", None)
        if handler is None:
            raise cur.error(f"unknown keyword '{kw}'", 0)
        handler(cur)

    def _optional_name(self, cur, default):
        word = cur.peek_word()
        save = cur.pos
        if word is not None:
            cur.word()
            if not cur.text.startswith("=", cur.pos):
                return word, save
            cur.pos = save
        return default, cur.pos

    def do_field(self, cur):
        kv = cur.key_values()
        unknown = set(kv) - {"p", "e", "modulus"}
        if unknown:
            key = sorted(unknown)[0]
            raise cur.error(f"unknown key '{key}'", kv[key][1])
        if "p" not in kv:
            raise cur.error("field needs p=<prime>")
        p = _int(cur, *kv["p"], "p", 2)
        e = _int(cur, *kv["e"], "e", 1) if "e" in kv else 1
        modulus = None
        if "modulus" in kv:
            text, pos = kv["modulus"]
            try:
                base = PolynomialRing(FieldSpec(p), ["t"])
            except ValueError as exc:
                raise cur.error(str(exc), kv["p"][1]) from None
            f = _poly(cur, base, text, pos)
            modulus = [f.terms.get((k,), 0) for k in range(max(0, f.total_degree) + 1)]
        try:
            spec = FieldSpec(p, e, modulus)
        except ValueError as exc:
            raise cur.error(str(exc), kv.get("modulus", kv["p"])[1]) from None
        self.field = spec
        self.session.declarations.append(FieldDecl(cur.line, p, e, modulus, spec))

    def do_ring(self, cur):
        if self.field is None:
            raise cur.error("ring declared before any field")
        name, npos = self._optional_name(cur, "R")
        kv = cur.key_values()
        unknown = set(kv) - {"vars", "order"}
        if unknown:
            key = sorted(unknown)[0]
            raise cur.error(f"unknown key '{key}'", kv[key][1])
        if "vars" not in kv:
            raise cur.error("ring needs vars=[...]")
        text, pos = kv["vars"]
        names = [t for t, _ in split_list(text, pos, cur)]
        order = kv["order"][0] if "order" in kv else "grevlex"
        try:
            ring = PolynomialRing(self.field, names, order)
        except ValueError as exc:
            raise cur.error(str(exc), pos) from None
        self.declare(cur, name, "ring", npos)
        self.session.rings[name] = ring
        self.current_ring = name
        self.session.declarations.append(RingDecl(cur.line, name, tuple(names), order, ring))

    def do_module(self, cur):
        name, npos = self._optional_name(cur, "M")
        kv = cur.key_values()
        unknown = set(kv) - {"rank", "rels", "ring"}
        if unknown:
            key = sorted(unknown)[0]
            raise cur.error(f"unknown key '{key}'", kv[key][1])
        if "ring" in kv:
            ring_name = self.lookup(cur, kv["ring"][0], "ring", kv["ring"][1])
        elif self.current_ring is None:
            raise cur.error("module declared before any ring")
        else:
            ring_name = self.current_ring
        ring = self.session.rings[ring_name]
        if "rank" not in kv:
            raise cur.error("module needs rank=<r>")
        rank = _int(cur, *kv["rank"], "rank", 0)
        rels = []
        if "rels" in kv:
            for text, pos in split_list(*kv["rels"], cur):
                rels.append(_element(cur, ring, rank, text, pos))
        self.declare(cur, name, "module", npos)
        self.current_module = name
        self.tables[name] = {}
        self.session.declarations.append(ModuleDecl(cur.line, name, ring_name, rank, rels))

    def _module_decl(self, name):
        for d in self.session.declarations:
            if isinstance(d, ModuleDecl) and d.name == name:
                return d
        raise KeyError(name)

    def do_kappa(self, cur):
        word = cur.peek_word()
        save = cur.pos
        cur.skip()
        wpos = cur.pos
        if word is not None and re.fullmatch(r"g\d+", word):
            cur.word()
            nxt = cur.peek_word()
            cur.pos = save
            if nxt == "d":
                if self.current_module is None:
                    raise cur.error("kappa entry before any module", wpos)
                module = self.current_module
            else:
                module = self.lookup(cur, cur.word("module name"), "module", wpos)
        else:
            module = self.lookup(cur, cur.word("module name"), "module", wpos)
        decl = self._module_decl(module)
        ring = self.session.rings[decl.ring_name]
        cur.skip()
        gpos = cur.pos
        gen = cur.word("generator g<i>", re.compile(r"g\d+"))
        i = int(gen[1:])
        if i >= decl.rank:
            raise cur.error(f"generator index {i} out of range for rank {decl.rank}", gpos)
        cur.skip()
        cur.expect("d")
        cur.expect("=")
        dtext, dpos = cur.value()
        digit = tuple(_int(cur, t, p, "digit entry") for t, p in split_list(dtext, dpos, cur))
        if len(digit) != ring.nvars:
            raise cur.error(f"digit needs {ring.nvars} entries", dpos)
        if any(not 0 <= x < ring.q for x in digit):
            raise cur.error(f"digit out of range [0, q-1]: {list(digit)}", dpos)
        cur.expect("=")
        vtext, vpos = cur.value()
        values = _element(cur, ring, decl.rank, vtext, vpos)
        if not cur.done():
            raise cur.error("unexpected trailing text")
        key = (i, digit)
        if key in self.tables[module]:
            raise cur.error(f"duplicate kappa entry for g{i} d={list(digit)}", gpos)
        self.tables[module][key] = (values, cur.line)
        self.session.declarations.append(KappaDecl(cur.line, module, i, digit, values))

    def do_morphism(self, cur):
        cur.skip()
        npos = cur.pos
        name = cur.word("morphism name")
        cur.skip()
        spos = cur.pos
        source = self.lookup(cur, cur.word("source module"), "module", spos)
        cur.expect("->")
        cur.skip()
        tpos = cur.pos
        target = self.lookup(cur, cur.word("target module"), "module", tpos)
        kv = cur.key_values()
        if set(kv) != {"matrix"}:
            raise cur.error("morphism needs exactly matrix=[[...],...]")
        sdecl, tdecl = self._module_decl(source), self._module_decl(target)
        if sdecl.ring_name != tdecl.ring_name:
            raise cur.error("source and target live over different rings", tpos)
        ring = self.session.rings[sdecl.ring_name]
        rows = split_list(*kv["matrix"], cur)
        if len(rows) != sdecl.rank:
            raise cur.error(f"matrix needs {sdecl.rank} rows (one per source generator)", kv["matrix"][1])
        matrix = [_element(cur, ring, tdecl.rank, t, p) for t, p in rows]
        self.declare(cur, name, "morphism", npos)
        self.session.declarations.append(MorphismDecl(cur.line, name, source, target, matrix))

    def do_cmd(self, cur):
        cur.skip()
        cpos = cur.pos
        name = cur.word("command name", _CMD_NAME)
        if name not in COMMANDS:
            raise cur.error(f"unknown command '{name}'", cpos)
        spec = COMMANDS[name]
        kv = cur.key_values()
        kinds = {k.rstrip("?"): v for k, v in spec.items()}
        for key, (_, pos) in kv.items():
            if key not in kinds:
                raise cur.error(f"unknown argument '{key}' for {name}", pos)
        for k in spec:
            if not k.endswith("?") and k not in kv:
                raise cur.error(f"{name} needs {k}=...")
        args, text = {}, {}
        ring, rank = None, None
        if "M" in kv:
            mname = self.lookup(cur, kv["M"][0], "module", kv["M"][1])
            decl = self._module_decl(mname)
            ring, rank = self.session.rings[decl.ring_name], decl.rank
        for key in [k.rstrip("?") for k in spec]:
            if key not in kv:
                continue
            raw, pos = kv[key]
            kind = kinds[key]
            if kind == "module":
                value, shown = raw, raw
            elif kind == "morphism":
                value = shown = self.lookup(cur, raw, "morphism", pos)
            elif kind == "int":
                value = _int(cur, raw, pos, key, 0)
                shown = str(value)
            elif kind == "exponent":
                value = "all" if raw == "all" else _int(cur, raw, pos, key, 0)
                shown = str(value)
            elif kind == "poly":
                value = _poly(cur, ring, raw, pos)
                shown = compact(value)
            elif kind == "polys":
                value = _polys(cur, ring, raw, pos)
                shown = "[" + ",".join(compact(f) for f in value) + "]"
            elif kind == "element":
                value = _element(cur, ring, rank, raw, pos)
                shown = "[" + ",".join(compact(f) for f in value) + "]"
            else:
                value = [_element(cur, ring, rank, t, p) for t, p in split_list(raw, pos, cur)]
                shown = "[" + ",".join("[" + ",".join(compact(f) for f in v) + "]" for v in value) + "]"
            args[key] = value
            text[key] = shown
        command = Command(cur.line, name, args, text)
        self.session.commands.append(command)
        self.session.declarations.append(command)

    def finish(self):
        s = self.session
        for d in s.declarations:
            if isinstance(d, ModuleDecl):
                ring = s.rings[d.ring_name]
                rels = [to_vector(ring, d.rank, r) for r in d.relations]
                table = {k: v for k, (v, _) in self.tables[d.name].items()}
                try:
                    s.modules[d.name] = CartierModule(ModulePresentation(ring, d.rank, rels), table, check=True)
                except (CartierLabError, ValueError) as exc:
                    raise SessionError(f"module {d.name}: {exc}", d.line) from None
            elif isinstance(d, MorphismDecl):
                try:
                    s.morphisms[d.name] = CartierMorphism(s.modules[d.source], s.modules[d.target], d.matrix, check=True)
                except (CartierLabError, ValueError) as exc:
                    raise SessionError(f"morphism {d.name}: {exc}", d.line) from None
        return s


def parse_session(text):
    """Parse and validate a session; raises SessionError with line/column."""
    parser = _Parser()
    for lineno, line in enumerate(text.splitlines(), start=1):
        parser.line(line, lineno)
    return parser.finish()


def _vec(values):
    return "[" + ", ".join(compact(f) for f in values) + "]"


def format_session(session):
    """Canonical text of a session; parsing it again gives the same reports."""
    out = []
    for d in session.declarations:
        if isinstance(d, FieldDecl):
            line = f"field p={d.p} e={d.e}"
            if d.modulus is not None:
                ring = PolynomialRing(FieldSpec(d.p), ["t"])
                poly = Polynomial(ring, {(k,): c for k, c in enumerate(d.modulus) if c})
                line += f" modulus={compact(poly)}"
        elif isinstance(d, RingDecl):
            line = f"ring {d.name} vars=[{', '.join(d.variables)}]"
            if d.order != "grevlex":
                line += f" order={d.order}"
        elif isinstance(d, ModuleDecl):
            rels = ", ".join(_vec(r) for r in d.relations)
            line = f"module {d.name} rank={d.rank} rels=[{rels}] ring={d.ring_name}"
        elif isinstance(d, KappaDecl):
            line = f"kappa {d.module} g{d.generator} d=[{', '.join(map(str, d.digit))}] = {_vec(d.values)}"
        elif isinstance(d, MorphismDecl):
            rows = ", ".join(_vec(r) for r in d.matrix)
            line = f"morphism {d.name} {d.source} -> {d.target} matrix=[{rows}]"
        else:
            args = " ".join(f"{k}={v}" for k, v in d.text.items())
            line = f"cmd {d.name} {args}"
        out.append(line)
    return "\n".join(out) + "\n"
