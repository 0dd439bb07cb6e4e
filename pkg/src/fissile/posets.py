"""Finite posets, presheaves of ensemble groups, and the triangular transform.

The transform ``nabla`` sends a finitely supported family (u_p) to the family
whose value at q is the sum of restrictions u_p|_q over all p >= q.  Its
matrix is unitriangular in any linear extension, so the inverse is computed
by back-substitution, uniformly for every finite poset.
"""

from .canon import ckey
from .ensembles import Ensemble, map_ensemble


class FinitePoset:
    """A finite poset given by its elements and a decidable relation.

    Reflexivity, antisymmetry and transitivity are checked exhaustively on
    construction.
    """

    def __init__(self, elements, leq):
        self.elements = tuple(sorted(elements, key=ckey))
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate poset elements")
        rel = {}
        for p in self.elements:
            for q in self.elements:
                rel[(q, p)] = bool(leq(q, p))
        for p in self.elements:
            if not rel[(p, p)]:
                raise ValueError("relation is not reflexive")
        for p in self.elements:
            for q in self.elements:
                if p != q and rel[(p, q)] and rel[(q, p)]:
                    raise ValueError("relation is not antisymmetric")
        for p in self.elements:
            for q in self.elements:
                for r in self.elements:
                    if rel[(p, q)] and rel[(q, r)] and not rel[(p, r)]:
                        raise ValueError("relation is not transitive")
        self._leq = rel

    def leq(self, q, p):
        return self._leq[(q, p)]

    def down_set(self, p):
        """All elements <= p."""
        if p not in self._index():
            raise KeyError(f"{p!r} is not a poset element")
        return tuple(q for q in self.elements if self.leq(q, p))

    def _index(self):
        return set(self.elements)

    def linear_extension(self):
        """Deterministic order compatible with the relation, bottoms first."""
        return tuple(
            sorted(self.elements, key=lambda p: (len(self.down_set(p)), ckey(p)))
        )

    def maximum(self):
        tops = [p for p in self.elements if all(self.leq(q, p) for q in self.elements)]
        if len(tops) != 1:
            raise ValueError("poset has no greatest element")
        return tops[0]

    def without(self, p):
        rest = [q for q in self.elements if q != p]
        return FinitePoset(rest, self.leq)

    def restricted_to(self, subset):
        return FinitePoset(tuple(subset), self.leq)

    def to_json(self):
        covers = []
        for p in self.elements:
            for q in self.elements:
                if p != q and self.leq(q, p):
                    if not any(
                        r != p and r != q and self.leq(q, r) and self.leq(r, p)
                        for r in self.elements
                    ):
                        covers.append([q, p])
        return {"elements": list(self.elements), "covers": covers}


class AbPresheaf:
    """Ensemble groups indexed by a poset, with contravariant restrictions.

    ``element_map(p, q, x)`` restricts a single universe element; the group
    homomorphism is its linear extension.
    """

    def __init__(self, poset: FinitePoset, element_map):
        self.poset = poset
        self.element_map = element_map

    def restrict(self, p, q, s: Ensemble) -> Ensemble:
        if not self.poset.leq(q, p):
            raise ValueError("restriction requires p >= q")
        return map_ensemble(lambda x: self.element_map(p, q, x), s)


class Extender:
    """Section-extension maps lam(p, q, x) for p >= q, lifted linearly."""

    def __init__(self, presheaf: AbPresheaf, element_map):
        self.presheaf = presheaf
        self.element_map = element_map

    def extend(self, p, q, s: Ensemble) -> Ensemble:
        if not self.presheaf.poset.leq(q, p):
            raise ValueError("extension requires p >= q")
        return map_ensemble(lambda x: self.element_map(p, q, x), s)


class Section(dict):
    """A finitely supported family p -> ensemble; absent keys mean zero."""

    def value(self, p):
        return self.get(p, Ensemble.zero())


class IncompatibleSection(ValueError):
    pass


def down_set(poset: FinitePoset, p):
    return poset.down_set(p)


def nabla(poset: FinitePoset, restrict, family: Section) -> Section:
    """Triangular transform: output at q sums the restrictions from all p >= q."""
    out = Section()
    for q in poset.elements:
        acc = Ensemble.zero()
        for p, val in family.items():
            if val and poset.leq(q, p):
                acc = acc + restrict(p, q, val)
        if acc:
            out[q] = acc
    return out


def nabla_inverse(poset: FinitePoset, restrict, family: Section) -> Section:
    """Invert :func:`nabla` by back-substitution, tops first."""
    order = list(reversed(poset.linear_extension()))
    out = Section()
    for q in order:
        acc = family.value(q)
        for p in order:
            if p != q and poset.leq(q, p) and out.get(p):
                acc = acc - restrict(p, q, out[p])
        if acc:
            out[q] = acc
    return out


def check_compatible(poset: FinitePoset, restrict, family: Section):
    for p in poset.elements:
        for q in poset.elements:
            if p != q and poset.leq(q, p):
                if restrict(p, q, family.value(p)) != family.value(q):
                    raise IncompatibleSection(
                        f"family is not compatible along {p!r} >= {q!r}"
                    )


def lift_limit(poset: FinitePoset, restrict, extend, compat: Section) -> Ensemble:
    """Produce a top-level element restricting to a given compatible family.

    ``poset`` must have a greatest element; ``compat`` is indexed by the
    remaining elements and is verified to be compatible before lifting.  The
    lift is the extender image of the inverse transform of the family, with
    the top component set to zero.
    """
    top = poset.maximum()
    if top in compat and compat[top]:
        raise ValueError("input family must not assign the greatest element")
    punctured = poset.without(top)
    check_compatible(punctured, restrict, compat)
    v = nabla_inverse(punctured, restrict, compat)
    u = Ensemble.zero()
    for p in punctured.elements:
        if v.get(p):
            u = u + extend(top, p, v[p])
    return u


def check_restriction_square(poset, restrict, extend, q, family: Section):
    """The compatibility square between the inverse transform, the extender
    and restriction to q.  Returns True when both routes agree on ``family``."""
    v = nabla_inverse(poset, restrict, family)
    total = Ensemble.zero()
    for p in poset.elements:
        if v.get(p):
            total = total + extend(poset.maximum(), p, v[p])
    lhs = restrict(poset.maximum(), q, total)

    down = poset.restricted_to(poset.down_set(q))
    projected = Section()
    for p in down.elements:
        if family.get(p):
            projected[p] = family[p]
    w = nabla_inverse(down, restrict, projected)
    rhs = Ensemble.zero()
    for p in down.elements:
        if w.get(p):
            rhs = rhs + extend(q, p, w[p])
    return lhs == rhs


def extender_is_transitive(poset, extend, samples):
    """Diagnostic only: report whether extend(p,q) . extend(q,r) == extend(p,r)
    on the supplied (p, q, r, ensemble) samples.  The calculus never relies
    on this identity."""
    for p, q, r, s in samples:
        if extend(p, q, extend(q, r, s)) != extend(p, r, s):
            return False
    return True
