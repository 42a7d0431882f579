"""
Brute-force oracle: closed subcategories found by testing every subset
of the universe against the defining conditions.
"""

from itertools import combinations


def _closed(points: set, add, triples, summands, thick: bool) -> bool:
    for a in points:
        for b in points:
            total = add(a, b)
            if total is not None and total not in points:
                return False
    for triple in triples:
        if sum(t in points for t in triple) == 2:
            return False
    if thick:
        for a in points:
            if any(s not in points for s in summands(a)):
                return False
    return True


def closed_subsets(points, zero, add, triples, summands, thick: bool) -> set[frozenset]:
    optional = sorted(p for p in points if p not in zero)
    found = set()
    for r in range(len(optional) + 1):
        for extra in combinations(optional, r):
            candidate = set(zero) | set(extra)
            if _closed(candidate, add, triples, summands, thick):
                found.add(frozenset(candidate))
    return found


def ambient_subcategories(ctx, thick: bool) -> set[frozenset]:
    """Subcategories of E containing N, as sets of object ids"""
    structure = ctx.structure
    U = structure.universe
    scope = set(structure.scope())

    def add(a, b):
        total = U.add(a, b)
        return total if total in scope else None

    def summands(a):
        return [s for s in U.summand_ids(a) if s in scope]

    zero = {U.zero_id} | (set(ctx.members) & scope)
    return closed_subsets(scope, zero, add, structure.triples(), summands, thick)


def ambient_class_unions(ctx, thick: bool) -> set[frozenset]:
    """ambient_subcategories searched over unions of stable classes only

    X and X+I with I in N sit in a split conflation, so a closed set
    holding N holds both or neither.
    """
    structure = ctx.structure
    U = structure.universe
    scope = set(structure.scope())

    def add(a, b):
        total = U.add(a, b)
        return total if total in scope else None

    def summands(a):
        return [s for s in U.summand_ids(a) if s in scope]

    base = {U.zero_id} | (set(ctx.members) & scope)
    classes = [set(ids) for ids in ctx.stable_classes(sorted(scope)).values()]
    optional = [c for c in classes if not c <= base]
    triples = structure.triples()
    found = set()
    for r in range(len(optional) + 1):
        for extra in combinations(optional, r):
            candidate = base.union(*extra)
            if _closed(candidate, add, triples, summands, thick):
                found.add(frozenset(candidate))
    return found


def quotient_subcategories(ctx, thick: bool) -> set[frozenset]:
    """Subcategories of E/N, as sets of stable keys"""
    scope = ctx.structure.scope()
    keys = {oid: ctx.stable_key(oid) for oid in scope}
    key_set = set(keys.values())
    triples = set()
    for x, y, z, c in ctx.representatives():
        key_y = keys[y] if y is not None else ctx.stable_key(c.y)
        if key_y in key_set:
            triples.add((keys[x], key_y, keys[z]))

    def add(a, b):
        total = tuple(u + v for u, v in zip(a, b, strict=True))
        return total if total in key_set else None

    def summands(a):
        return [k for k in key_set if all(u <= v for u, v in zip(k, a, strict=True))]

    zero = {tuple(0 for _ in ctx.universe.seeds)}
    return closed_subsets(key_set, zero, add, sorted(triples), summands, thick)
