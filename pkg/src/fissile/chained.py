"""The subset monoid under intersection, its monoid ring, and the ideal chain.

Subsets of the index set are canonical sorted tuples.  The ring element
``omega(J)`` is the alternating sum over subsets of J; the level-s ideal is
generated by all products <L>*omega(J) with |J| >= s, and membership in it
is decided exactly, with a certificate.
"""

from dataclasses import dataclass
from itertools import combinations

from .canon import ckey
from .ensembles import (
    Ensemble,
    SubgroupGenerators,
    singleton,
    subgroup_membership,
)


def subset_key(s):
    return tuple(sorted(s))


def subsets_of(s):
    s = subset_key(s)
    out = []
    for k in range(len(s) + 1):
        out.extend(subset_key(c) for c in combinations(s, k))
    return sorted(out, key=ckey)


class SubsetMonoid:
    """All subsets of a ground set, multiplied by intersection."""

    def __init__(self, ground):
        self.ground = subset_key(ground)
        self.elements = subsets_of(self.ground)

    def op(self, a, b):
        return subset_key(set(a) & set(b))

    def identity(self):
        return self.ground


def ring_product(monoid: SubsetMonoid, x: Ensemble, y: Ensemble) -> Ensemble:
    """Bilinear extension of intersection to the monoid ring."""
    out = {}
    for a, c in x.terms.items():
        for b, d in y.terms.items():
            k = monoid.op(a, b)
            out[k] = out.get(k, 0) + c * d
    return Ensemble(out)


def omega(j) -> Ensemble:
    """Alternating sum over the subsets of j; the level-|j| ideal generator."""
    j = subset_key(j)
    out = {}
    for k in subsets_of(j):
        out[k] = (-1) ** (len(j) - len(k))
    return Ensemble(out)


@dataclass(frozen=True)
class IdealCertificate:
    """Integer combination over the generators <L>*omega(J), |J| >= level."""

    level: int
    combination: tuple  # entries (L, J, coeff)

    def value(self, monoid: SubsetMonoid) -> Ensemble:
        acc = Ensemble.zero()
        for l_key, j_key, c in self.combination:
            acc = acc + c * ring_product(monoid, singleton(l_key), omega(j_key))
        return acc

    def check(self, monoid: SubsetMonoid, target: Ensemble) -> bool:
        if any(len(j) < self.level for _, j, _ in self.combination):
            return False
        return self.value(monoid) == target


def ideal_generators(monoid: SubsetMonoid, level: int):
    """All pairs (L, J) with |J| >= level, in canonical order."""
    out = []
    for j in monoid.elements:
        if len(j) < level:
            continue
        for l_key in monoid.elements:
            out.append((l_key, j))
    return out


def ideal_membership(monoid: SubsetMonoid, pi: Ensemble, level: int):
    """Decide membership in the level-s ideal; positive answers carry an
    :class:`IdealCertificate`, negatives are definite."""
    pairs = ideal_generators(monoid, level)
    gens = SubgroupGenerators(
        ring_product(monoid, singleton(l_key), omega(j)) for l_key, j in pairs
    )
    result = subgroup_membership(pi, gens)
    if not result:
        return None
    combo = tuple(
        (l_key, j, c)
        for (l_key, j), c in zip(pairs, result.coefficients)
        if c
    )
    cert = IdealCertificate(level=level, combination=combo)
    assert cert.check(monoid, pi)
    return cert


def omega_annihilates(monoid: SubsetMonoid, j, k) -> bool:
    """True exactly when multiplying omega(j) by <k> gives zero."""
    return not ring_product(monoid, omega(subset_key(j)), singleton(subset_key(k)))
