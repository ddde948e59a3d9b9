"""JSON encoding of results: exact rationals plus derived 12-digit decimals.

Rationals travel as {"num": "...", "den": "...", "dec": "..."} with the
integers as decimal strings (no precision loss) and the decimal string
derived from the exact value, never computed along an independent path.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .bounds import BoundReport
from .decompose import PairMixture
from .dist import ExactDist, TwoPointVar
from .groups import FiniteGroup, dump_cayley, group_from_spec, load_cayley
from .montecarlo import SampleReport
from .search import ConjectureVerdict, SearchResult


def dec12(value: Fraction | float) -> str:
    """12 significant digits of the exact value."""
    return format(float(value), ".12g")


def frac_json(value: Optional[Fraction]) -> Optional[dict]:
    if value is None:
        return None
    return {"num": str(value.numerator), "den": str(value.denominator), "dec": dec12(value)}


def frac_from_json(doc: dict) -> Fraction:
    return Fraction(int(doc["num"]), int(doc["den"]))


def _cyclic_chain(key: tuple) -> Optional[str]:
    """Zm or ZaxZb... chain from a structural key (the only parseable products)."""
    if not key:
        return None
    if key[0] == "cyclic":
        return f"Z{key[1]}"
    if key[0] == "product" and len(key) == 3:
        left, right = _cyclic_chain(key[1]), _cyclic_chain(key[2])
        if left and right:
            return f"{left}x{right}"
    return None


def builtin_spec(g: FiniteGroup) -> Optional[str]:
    """The CLI grammar string for a builtin group, or None for loaded tables."""
    key = g.key
    if not key:
        return None
    kind = key[0]
    if kind == "dihedral":
        return f"D{key[1]}"
    if kind == "symmetric":
        return f"S{key[1]}"
    if kind == "gl2":
        return f"GL2_{key[1]}"
    return _cyclic_chain(key)


def group_json(g: FiniteGroup) -> str | dict:
    spec = builtin_spec(g)
    return spec if spec is not None else dump_cayley(g)


def group_from_json(doc: str | dict) -> FiniteGroup:
    if isinstance(doc, str):
        return group_from_spec(doc)
    return load_cayley(json.dumps(doc))


def dist_to_json(d: ExactDist) -> dict:
    return {
        "group": group_json(d.group),
        "masses": [
            {"element": x, "num": str(p.numerator), "den": str(p.denominator)}
            for x, p in sorted(d.masses.items())
        ],
    }


def dist_from_json(doc: dict) -> ExactDist:
    group = group_from_json(doc["group"])
    masses = {int(m["element"]): Fraction(int(m["num"]), int(m["den"])) for m in doc["masses"]}
    return ExactDist(group, masses)


def mixture_to_json(p: PairMixture) -> dict:
    return {
        "components": [
            {"a": var.a, "b": var.b, "num": str(w.numerator), "den": str(w.denominator)}
            for var, w in p.components
        ]
    }


def mixture_from_json(doc: dict, g: FiniteGroup) -> PairMixture:
    components = tuple(
        (TwoPointVar(g, int(c["a"]), int(c["b"])), Fraction(int(c["num"]), int(c["den"])))
        for c in doc["components"]
    )
    return PairMixture(components)


def pair_json(v: TwoPointVar) -> dict:
    return {"a": v.a, "b": v.b, "names": [v.group.names[v.a], v.group.names[v.b]]}


def bound_report_json(r: BoundReport) -> dict:
    return {
        "n": r.n,
        "k": r.k,
        "m": r.m,
        "m_tilde": r.m_tilde,
        "theorem1": frac_json(r.theorem1),
        "theorem2": frac_json(r.theorem2),
        "erdos": frac_json(r.erdos),
        "corollary_closed_form": r.corollary_closed_form,
        "tiep_vu": r.tiep_vu,  # never capped: exceeding 1 is meaningful
        "tiep_vu_capped": min(1.0, r.tiep_vu),  # display-oriented companion
        "notes": list(r.notes),
    }


def search_result_json(r: SearchResult) -> dict:
    return {
        "group": r.group,
        "n": r.n,
        "k": r.k,
        "min_order": r.min_order,
        "mode": r.mode,
        "enumeration": r.enumeration,
        "max_value": frac_json(r.max_value),
        "argmax": [pair_json(v) for v in r.argmax],
        "witness_set": list(r.witness_set),
        "laws_evaluated": r.laws_evaluated,
        "bound_name": r.bound_name,
        "bound_value": frac_json(r.bound_value),
        "slack": frac_json(r.slack),
        "tight": r.tight,
    }


def conjecture_verdict_json(v: ConjectureVerdict) -> dict:
    doc = {
        "group": v.group,
        "m": v.m,
        "n": v.n,
        "k": v.k,
        "even_orders_above_m": list(v.even_orders_above_m),
        "m1": v.m1,
        "case": v.case,
        "conjectured_bound": frac_json(v.conjectured_bound),
        "exhaustive_max": frac_json(v.exhaustive_max),
        "counterexample": None,
        "laws_evaluated": v.laws_evaluated,
        "notes": list(v.notes),
    }
    if v.counterexample is not None:
        doc["counterexample"] = {
            "argmax": [pair_json(p) for p in v.counterexample["argmax"]],
            "witness_set": list(v.counterexample["witness_set"]),
            "max_value": frac_json(v.counterexample["max_value"]),
            "reverified": v.counterexample["reverified"],
        }
    return doc


def sample_report_json(r: SampleReport) -> dict:
    return {
        "samples": r.samples,
        "seed": r.seed,
        "estimate": r.estimate,
        "ci_low": r.ci_low,
        "ci_high": r.ci_high,
        "max_cell": r.max_cell,
        "backend": r.backend,
        "target": frac_json(r.target),
        "target_in_interval": r.target_in_interval(),
        "counts": r.counts,
        "notes": list(r.notes),
    }
