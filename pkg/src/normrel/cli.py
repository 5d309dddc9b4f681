"""Command-line front end: ``normrel relations | funakura | mqunits``.

Every command prints one JSON document.  Exit codes: 0 success, 2 input error,
3 budget or cap exceeded, 4 failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import serialize
from .abelian import funakura_relation, funakura_terms, optimal_abelian_relation
from .errors import (BudgetExceededError, CapExceededError, InvalidInputError, NormrelError,
                     VerificationError)
from .groups import (abelian_structure, all_subgroups, group_from_spec, order_cap, subgroup_id)
from .multiquadratic import MQField, SaturationBudget, unit_group
from .relations import (admits_norm_relation, denominator_support, exists_relation_mod_p,
                        find_norm_relation, find_scalar_relation, minimal_relation_index,
                        optimal_denominator, verify_relation)

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_VERIFY = 0, 2, 3, 4
MIN_INDEX_ORDER_LIMIT = 2000


@dataclass
class RunConfig:
    command: str
    group_spec: Optional[dict] = None
    field_gens: Optional[list] = None
    max_index: Optional[int] = None
    cyclic_only: bool = False
    mod_p: list = field(default_factory=list)
    out: Optional[str] = None
    seed: int = 0
    order_cap: int = 10_000
    precision_cap: int = 8192
    char_cap: int = 4096
    pretty: bool = False

    def __post_init__(self):
        for name in ("order_cap", "precision_cap", "char_cap"):
            if getattr(self, name) <= 0:
                raise InvalidInputError(f"{name.replace('_', '-')} must be positive")
        if self.max_index is not None and self.max_index <= 0:
            raise InvalidInputError("max-index must be positive")


def parse_group(text: str) -> dict:
    """Shorthand ``abelian:2,2``, ``named:A5``, ``perm:[[1,0,2]]`` or a JSON object."""
    text = text.strip()
    if text.startswith("{"):
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"bad group JSON: {exc}") from exc
        return spec
    kind, sep, rest = text.partition(":")
    if not sep:
        raise InvalidInputError(f"group must look like kind:value, got {text!r}")
    if kind == "abelian":
        try:
            invs = [int(x) for x in rest.split(",") if x.strip()]
        except ValueError as exc:
            raise InvalidInputError(f"bad invariants {rest!r}") from exc
        return {"kind": "abelian", "invariants": invs}
    if kind == "named":
        return {"kind": "named", "name": rest}
    if kind == "perm":
        try:
            gens = json.loads(rest)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"bad permutation list: {exc}") from exc
        return {"kind": "perm", "generators": gens}
    raise InvalidInputError(f"unknown group kind {kind!r}")


def parse_int_list(text: str, what: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InvalidInputError(f"bad {what} list {text!r}") from exc


def _family(g, cfg: RunConfig) -> list:
    return [h for h in all_subgroups(g, max_index=cfg.max_index, cyclic_only=cfg.cyclic_only) if h.order > 1]


def cmd_relations(cfg: RunConfig) -> dict:
    g = group_from_spec(cfg.group_spec)
    family = _family(g, cfg)
    exists, reason = admits_norm_relation(g)
    d = optimal_denominator(g, family)
    rel = find_norm_relation(g, family, seed=cfg.seed) if d else None
    if rel is not None and not verify_relation(rel):
        raise VerificationError("norm relation failed its exact re-check")
    srel = find_scalar_relation(g, family)
    if srel is not None and not verify_relation(srel):
        raise VerificationError("scalar relation failed its exact re-check")
    ds = srel.denominator if srel is not None else 0
    report = {
        "group": serialize.group_to_json(g),
        "family": {"max_index": cfg.max_index, "cyclic_only": cfg.cyclic_only, "size": len(family),
                   "subgroup_ids": [subgroup_id(h) for h in family]},
        "admits_norm_relation": exists,
        "reason": reason,
        "optimal_denominator": d,
        "denominator_support": sorted(denominator_support(d)) if d else None,
        "relation": serialize.norm_relation_to_json(rel) if rel else None,
        "relation_verified": rel is not None,
        "scalar_exists": srel is not None,
        "scalar_denominator": ds,
        "scalar_denominator_support": sorted(denominator_support(ds)) if ds else None,
        "scalar_relation": serialize.scalar_relation_to_json(srel) if srel else None,
    }
    if cfg.mod_p:
        report["mod_p"] = {str(p): exists_relation_mod_p(g, family, p) for p in cfg.mod_p}
    if g.order <= MIN_INDEX_ORDER_LIMIT:
        report["minimal_index"] = {"general": minimal_relation_index(g, "general"),
                                   "scalar": minimal_relation_index(g, "scalar")}
    else:
        report["minimal_index"] = None
    return report


def cmd_funakura(cfg: RunConfig) -> dict:
    g = group_from_spec(cfg.group_spec)
    terms = funakura_terms(g)
    rel = funakura_relation(g)
    if not verify_relation(rel):
        raise VerificationError("Funakura relation failed its exact re-check")
    agree = all(t.moebius == t.product for t in terms)
    opt = optimal_abelian_relation(g)
    if not verify_relation(opt.relation):
        raise VerificationError("optimal relation failed its exact re-check")
    return {
        "group": serialize.group_to_json(g),
        "invariants": list(abelian_structure(g).invariant_factors),
        "denominator": rel.denominator,
        "coefficients": serialize.scalar_relation_to_json(rel)["coefficients"],
        "terms": [{"kernel": subgroup_id(t.kernel), "moebius": str(t.moebius), "product": str(t.product)}
                  for t in terms],
        "formulas_agree": agree,
        "optimal": {
            "n0": opt.n0,
            "case": opt.case,
            "prime": opt.prime,
            "max_index": max(h.index for h in opt.relation.subgroups()),
            "relation": serialize.scalar_relation_to_json(opt.relation),
        },
    }


def cmd_mqunits(cfg: RunConfig) -> dict:
    f = MQField(cfg.field_gens or [])
    budget = SaturationBudget(precision_cap=cfg.precision_cap, char_cap=cfg.char_cap)
    result = unit_group(f, budget)
    report = serialize.mq_units_to_json(result)
    report["rank"] = result.units.rank
    report["subfield_units"] = {str(d): u.to_json() for d, u in result.subfield_units.items()}
    report["saturation_log"] = result.units.log
    report["gw_bound"] = result.gw_bound
    return report


COMMANDS = {"relations": cmd_relations, "funakura": cmd_funakura, "mqunits": cmd_mqunits}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="normrel", description="Norm relations in group algebras and multiquadratic unit groups.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    rel = sub.add_parser("relations", parents=[common], help="optimal denominators and explicit relations")
    rel.add_argument("--group", required=True)
    rel.add_argument("--max-index", type=int)
    rel.add_argument("--cyclic-only", action="store_true")
    rel.add_argument("--mod-p", help="comma-separated primes")

    fun = sub.add_parser("funakura", parents=[common], help="explicit relations of abelian groups")
    fun.add_argument("--group", required=True)

    mq = sub.add_parser("mqunits", parents=[common], help="unit group of a real multiquadratic field")
    mq.add_argument("--field", required=True, help="comma-separated squarefree generators")
    mq.add_argument("--precision-cap", type=int, default=8192)
    mq.add_argument("--char-cap", type=int, default=4096)
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command, seed=args.seed, out=args.out, pretty=args.pretty,
                    order_cap=order_cap())
    if getattr(args, "group", None) is not None:
        cfg.group_spec = parse_group(args.group)
    if getattr(args, "field", None) is not None:
        cfg.field_gens = parse_int_list(args.field, "field")
    cfg.max_index = getattr(args, "max_index", None)
    cfg.cyclic_only = getattr(args, "cyclic_only", False)
    if getattr(args, "mod_p", None):
        cfg.mod_p = parse_int_list(args.mod_p, "prime")
    cfg.precision_cap = getattr(args, "precision_cap", cfg.precision_cap)
    cfg.char_cap = getattr(args, "char_cap", cfg.char_cap)
    cfg.__post_init__()
    return cfg


def _emit(obj, cfg: Optional[RunConfig], pretty: bool = False):
    text = serialize.dumps(obj, pretty)
    if cfg is not None and cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = None
    try:
        cfg = config_from_args(args)
        report = COMMANDS[cfg.command](cfg)
    except (InvalidInputError, ValueError) as exc:
        print(json.dumps({"error": "input", "message": str(exc)}), file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as exc:
        partial = exc.partial
        info = {"error": "budget", "message": str(exc)}
        if partial is not None and hasattr(partial, "generators"):
            info["partial"] = {"units": [{"coords": u.to_json()} for u in partial.generators],
                               "saturation_log": partial.log}
        _emit(info, cfg, args.pretty)
        return EXIT_BUDGET
    except CapExceededError as exc:
        print(json.dumps({"error": "cap", "message": str(exc)}), file=sys.stderr)
        return EXIT_BUDGET
    except VerificationError as exc:
        print(json.dumps({"error": "verification", "message": str(exc)}), file=sys.stderr)
        return EXIT_VERIFY
    except NormrelError as exc:  # pragma: no cover - every subclass is handled above
        print(json.dumps({"error": "internal", "message": str(exc)}), file=sys.stderr)
        return EXIT_VERIFY
    _emit(report, cfg, cfg.pretty)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
