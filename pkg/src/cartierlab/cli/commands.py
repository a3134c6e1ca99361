"""Command dispatch and report serialization."""

import json
import time
from dataclasses import dataclass

from .. import geom
from ..cartier import (
    DEFAULT_CHAIN_CAP,
    DEFAULT_CLOSURE_CAP,
    element_locally_nilpotent,
    elementwise_order,
    image_chain,
    is_zero_in_crys,
    nil_isomorphism,
    nilpotent_filtration,
    nilpotent_part,
    stable_closure,
)
from ..errors import CapExceededError, CartierLabError, UndecidedError
from ..semialg.modules import DEFAULT_POWER_CAP
from ..semialg.poly import format_terms

SCHEMA = 1


@dataclass
class Caps:
    chain: int = DEFAULT_CHAIN_CAP
    power: int = DEFAULT_POWER_CAP
    closure: int = DEFAULT_CLOSURE_CAP


def _vector_text(ring, rank, v):
    comps = [dict() for _ in range(rank)]
    for (pos, a), c in v.items():
        comps[pos][a] = c
    return [format_terms(ring, t) for t in comps]


def _submodule_gens(sub):
    P = sub.ambient
    reduced = (P.normal_form(g) for g in sub.gb)
    return [_vector_text(P.ring, P.rank, g) for g in reduced if g]


def _chain_payload(v):
    return {"nilpotent": v.nilpotent, "order": v.order, "stabilization_exponent": v.stabilization_exponent}


def _degrees(result, cap):
    out = {}
    for s in result.summary(cap):
        if not s.zero:
            out[str(s.degree)] = {"dim": s.dimension, "nilpotent": s.nilpotent, "order": s.order}
    return out


def cmd_nilpotent(session, a, caps):
    return _chain_payload(image_chain(session.modules[a["M"]], caps.chain))


def cmd_element_nilpotent(session, a, caps):
    M = session.modules[a["M"]]
    weak = elementwise_order(M, a["m"], caps.chain)
    order = element_locally_nilpotent(M, a["m"], caps.chain, caps.closure)
    return {"elementwise_order": weak, "locally_nilpotent": order is not None, "order": order}


def cmd_closure(session, a, caps):
    M = session.modules[a["M"]]
    C = stable_closure(M, [M.element(m) for m in a["gens"]], caps.closure)
    P = M.presentation
    dim = C.submodule.dimension() if P.is_finite() else None
    return {"generators": _submodule_gens(C.submodule), "dimension": dim,
            "whole_module": C.submodule == type(C.submodule).whole(P)}


def cmd_niliso(session, a, caps):
    v = nil_isomorphism(session.morphisms[a["f"]], caps.chain)
    return {"nil_isomorphism": v.is_nil_isomorphism,
            "kernel": _chain_payload(v.kernel), "cokernel": _chain_payload(v.cokernel)}


def cmd_zero_in_crys(session, a, caps):
    v = is_zero_in_crys(session.morphisms[a["f"]], caps.chain)
    return {"zero": v.zero, "image": _chain_payload(v.image)}


def cmd_nilpotent_part(session, a, caps):
    M = session.modules[a["M"]]
    e = a.get("e", "all")
    part = nilpotent_part(M, e)
    out = {"e": e, "dimension": part.dimension(), "generators": _submodule_gens(part.submodule)}
    if e == "all":
        out["filtration"] = nilpotent_filtration(M)
    return out


def cmd_pushforward(session, a, caps):
    w = geom.pushforward_contract(session.modules[a["M"]], a.get("extra", 5))
    return {"C": w.C, "ell0": w.ell0, "checks": w.log, "N_rank": w.N.rank,
            "max_steps": max(w.steps.values(), default=0), "step_bound_ok": w.step_bound_ok,
            "step_failures": w.step_failures}


def cmd_shriek(session, a, caps):
    r = geom.shriek_regular_sequence(session.modules[a["M"]], a["g"])
    return {"degrees": _degrees(r, caps.chain), "length": len(a["g"])}


def cmd_stalk(session, a, caps):
    r = geom.stalk_closed_point(session.modules[a["M"]], a["point"])
    return {"degrees": _degrees(r, caps.chain)}


def cmd_support(session, a, caps):
    s = geom.crystalline_support(session.modules[a["M"]], caps.chain)
    return {"ideal": [str(f) for f in s.ideal], "empty": s.empty,
            "stabilization_exponent": s.stabilization_exponent, "description": s.description}


def cmd_restrict(session, a, caps):
    L = geom.restrict_basic_open(session.modules[a["M"]], a["g"])
    ring = L.ring
    table = {}
    for (i, d), v in sorted(L._table.items()):
        table[f"g{i} d={list(d)}"] = _vector_text(ring, L.rank, v)
    out = {"variables": list(ring.variables), "kappa": table}
    out.update(_chain_payload(image_chain(L, caps.chain)))
    return out


def cmd_kashiwara(session, a, caps):
    r = geom.verify_kashiwara(session.modules[a["M"]], a["f"], a["N"], caps.chain)
    return {"inclusion_nil_isomorphism": r.inclusion_nil_isomorphism, "cokernel_order": r.cokernel_order,
            "h1_nilpotent": r.h1_nilpotent, "h1_order": r.h1_order, "passed": r.passed}


def cmd_pointwise(session, a, caps):
    r = geom.pointwise_nilpotence(session.modules[a["M"]], a["degree"], caps.chain, caps.power)
    return {"points": [str(f) for f in r.points], "support": [str(f) for f in r.support.ideal],
            "contained": r.contained, "checked": len(r.details)}


HANDLERS = {
    "nilpotent": cmd_nilpotent,
    "element-nilpotent": cmd_element_nilpotent,
    "closure": cmd_closure,
    "niliso": cmd_niliso,
    "zero-in-crys": cmd_zero_in_crys,
    "nilpotent-part": cmd_nilpotent_part,
    "pushforward": cmd_pushforward,
    "shriek": cmd_shriek,
    "stalk": cmd_stalk,
    "support": cmd_support,
    "restrict": cmd_restrict,
    "kashiwara": cmd_kashiwara,
    "pointwise": cmd_pointwise,
}


def run_command(session, command, caps=None, timing=False):
    """Execute one command; always returns a self-contained report dict."""
    caps = caps or Caps()
    report = {"schema": SCHEMA, "command": command.name, "args": dict(command.text), "line": command.line}
    start = time.perf_counter()
    try:
        payload = HANDLERS[command.name](session, command.args, caps)
        report["status"] = "ok"
        report.update(payload)
    except (UndecidedError, CapExceededError) as exc:
        report["status"] = "undecided"
        report["error"] = {"cause": type(exc).__name__, "message": str(exc), "line": command.line}
    except (CartierLabError, ValueError, ZeroDivisionError) as exc:
        report["status"] = "error"
        report["error"] = {"cause": type(exc).__name__, "message": str(exc), "line": command.line}
    if timing:
        report["seconds"] = round(time.perf_counter() - start, 6)
    return report


def run_session(session, caps=None, timing=False):
    return [run_command(session, c, caps, timing) for c in session.commands]


def to_json(report):
    return json.dumps(report, sort_keys=True, separators=(",", ":"))


def render_text(report):
    head = f"{report['command']} {' '.join(f'{k}={v}' for k, v in report['args'].items())}".rstrip()
    lines = [f"[{report['status']}] line {report['line']}: {head}"]
    for key in sorted(report):
        if key in ("schema", "command", "args", "line", "status"):
            continue
        lines.append(f"  {key}: {json.dumps(report[key], sort_keys=True)}")
    return "\n".join(lines)


__all__ = ["Caps", "HANDLERS", "SCHEMA", "render_text", "run_command", "run_session", "to_json"]
