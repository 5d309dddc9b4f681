"""Groups and subgroup families shared by the corpus sweeps."""

from functools import lru_cache
from math import prod

from normrel.groups import (all_subgroups, alternating_group, dihedral_group,
                            group_from_abelian_invariants, quaternion_group, symmetric_group)

ALL_SUBGROUPS_LIMIT = 400


def invariant_lists(max_order):
    """Every divisibility chain d1 | d2 | ... with each di >= 2 and product <= max_order."""
    out = [[]]

    def extend(chain, prod_so_far):
        last = chain[-1]
        k = 2
        while prod_so_far * last * k <= max_order:
            nxt = last * k
            out.append(chain + [nxt])
            extend(chain + [nxt], prod_so_far * nxt)
            k += 1

    for d in range(2, max_order + 1):
        out.append([d])
        extend([d], d)
    return out


@lru_cache(maxsize=None)
def abelian_corpus(max_order=64):
    groups = []
    for invs in sorted(invariant_lists(max_order), key=lambda c: (prod(c), c)):
        groups.append(group_from_abelian_invariants(invs or [1]))
    return tuple(groups)


@lru_cache(maxsize=None)
def nonabelian_corpus():
    gs = [symmetric_group(n) for n in range(1, 6)]
    gs += [alternating_group(n) for n in range(3, 6)]
    gs += [dihedral_group(n) for n in range(3, 61)]
    gs.append(quaternion_group())
    return tuple(gs)


def corpus():
    return abelian_corpus() + nonabelian_corpus()


def nontrivial(subs):
    return [h for h in subs if h.order > 1]


def families(g):
    """(name, family) pairs; each family is closed under conjugation."""
    out = [("cyclic", nontrivial(all_subgroups(g, cyclic_only=True)))]
    subs = all_subgroups(g)
    if len(subs) <= ALL_SUBGROUPS_LIMIT:
        out.append(("all", nontrivial(subs)))
    else:
        out.append(("index<=4", nontrivial(all_subgroups(g, max_index=4))))
    return out
