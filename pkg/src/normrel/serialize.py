"""JSON encoders for relations, groups and unit groups."""

from __future__ import annotations

import json

from .groups import FiniteGroup, Subgroup, subgroup_id


def coeff_list(a) -> list:
    return [int(c) for c in a.coeffs]


def group_to_json(g: FiniteGroup) -> dict:
    return {"label": g.label, "order": g.order}


def subgroup_to_json(h: Subgroup) -> dict:
    return {"id": subgroup_id(h), "order": h.order, "elements": list(h.elements)}


def norm_relation_to_json(rel) -> dict:
    return {
        "denominator": int(rel.denominator),
        "terms": [{"a": coeff_list(a), "H": list(h.elements), "b": coeff_list(b)} for a, h, b in rel.terms],
    }


def scalar_relation_to_json(rel) -> dict:
    items = sorted(((subgroup_id(h), int(b)) for h, b in rel.coefficients.items() if b))
    return {"denominator": int(rel.denominator), "coefficients": {str(i): b for i, b in items}}


def mq_units_to_json(result) -> dict:
    u = result.units
    lo, hi = result.regulator
    return {
        "field": list(u.field.generators),
        "units": [{"coords": x.to_json()} for x in u.generators],
        "regulator": {"lo": lo, "hi": hi},
        "initial_index_exponent": int(result.initial_index_exponent),
        "certified_to_bound": bool(result.certified_to_bound),
        "grh_conditional": bool(result.grh_conditional),
    }


def dumps(obj, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(obj, indent=2) + "\n"
    return json.dumps(obj, separators=(",", ":")) + "\n"
