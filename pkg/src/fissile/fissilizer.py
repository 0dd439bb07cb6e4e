"""The fissilizing operator over any layout presheaf with an extender.

A layout presheaf assigns an ensemble universe to every layout of a ground
set, restricts along the layout order, extends against it, and combines
per-block ensembles multilinearly.  The operator that repairs an arbitrary
ensemble into a fissile one is defined abstractly through the triangular
transform, so the synthetic function-valued model and the simplicial
morphism model share one code path.
"""

from dataclasses import dataclass, field
from itertools import product

from .ensembles import (
    Ensemble,
    SubgroupGenerators,
    combining_product,
    map_ensemble,
    subgroup_membership,
)
from .layouts import LayoutLattice, layout_key, resolve_block
from .posets import Section, nabla_inverse


class FunctionFacePresheaf:
    """Synthetic face data: the universe at a face holds all tuples of values
    aligned to the sorted face; restriction drops coordinates."""

    def __init__(self, ground, values=(0, 1), default=0):
        self.ground = tuple(sorted(set(ground)))
        self.values = tuple(values)
        self.default = default
        if default not in self.values:
            raise ValueError("default must be one of the values")

    def restrict(self, f, g, el):
        f = tuple(sorted(f))
        g = tuple(sorted(g))
        if not set(g) <= set(f):
            raise ValueError("face restriction requires inclusion")
        pos = {x: i for i, x in enumerate(f)}
        return tuple(el[pos[x]] for x in g)

    def enumerate(self, f):
        return [tuple(t) for t in product(self.values, repeat=len(tuple(f)))]


class ProductLayoutPresheaf:
    """Layout presheaf induced by face data: the universe at a layout is the
    product over its blocks, keyed by block-sorted tuples."""

    def __init__(self, face: FunctionFacePresheaf, bound=None):
        self.face = face
        self.lattice = LayoutLattice(face.ground, bound=bound)
        self.top = self.lattice.top

    def wrap(self, q: Ensemble) -> Ensemble:
        return map_ensemble(lambda el: (el,), q)

    def unwrap(self, s: Ensemble) -> Ensemble:
        return map_ensemble(lambda el: el[0], s)

    def _restrict_element(self, a, b, el):
        out = []
        for g in b:
            f = resolve_block(a, g)
            out.append(self.face.restrict(f, g, el[a.index(f)]))
        return tuple(out)

    def restrict(self, s: Ensemble, a, b) -> Ensemble:
        if not self.lattice.geq(a, b):
            raise ValueError("restriction requires a >= b")
        return map_ensemble(lambda el: self._restrict_element(a, b, el), s)

    def _extend_element(self, a, b, el):
        out = []
        for f in a:
            row = []
            for x in f:
                val = self.face.default
                for gi, g in enumerate(b):
                    if x in g:
                        val = el[gi][g.index(x)]
                        break
                row.append(val)
            out.append(tuple(row))
        return tuple(out)

    def extend(self, s: Ensemble, a, b) -> Ensemble:
        if not self.lattice.geq(a, b):
            raise ValueError("extension requires a >= b")
        return map_ensemble(lambda el: self._extend_element(a, b, el), s)

    def combine(self, a, parts) -> Ensemble:
        factors = [parts[g] for g in a]
        return combining_product(
            factors, lambda tup: tuple(el[0] for el in tup)
        )

    def enumerate_universe(self, a):
        pools = [self.face.enumerate(g) for g in a]
        return [tuple(choice) for choice in product(*pools)]


def q_square(lp, q: Ensemble, a) -> Ensemble:
    """Combining product of the per-block restrictions of a top ensemble."""
    wrapped = lp.wrap(q)
    parts = {g: lp.restrict(wrapped, lp.top, layout_key([g])) for g in a}
    return lp.combine(a, parts)


def is_fissile(lp, r: Ensemble) -> bool:
    """Whether the restriction to every layout splits as the combining
    product of the block restrictions."""
    wrapped = lp.wrap(r)
    for a in lp.lattice.layouts:
        if lp.restrict(wrapped, lp.top, a) != q_square(lp, r, a):
            return False
    return True


def fissilize(lp, q: Ensemble) -> Ensemble:
    """Repair an arbitrary ensemble into a fissile one.

    The layout-indexed family of combining products is pulled back through
    the inverse triangular transform and pushed to the top by the extender;
    fissile inputs are fixed points.
    """
    poset = lp.lattice.poset()
    family = Section()
    for a in lp.lattice.layouts:
        val = q_square(lp, q, a)
        if val:
            family[a] = val
    v = nabla_inverse(poset, lambda p, w, s: lp.restrict(s, p, w), family)
    total = Ensemble.zero()
    for a, val in v.items():
        total = total + lp.extend(val, lp.top, a)
    return lp.unwrap(total)


@dataclass
class SubgroupFamilyReport:
    hypothesis_ok: bool
    hypothesis_failures: list = field(default_factory=list)
    conclusion: bool | None = None

    def __bool__(self):
        return self.hypothesis_ok and bool(self.conclusion)


def check_invariance(lp, n_family) -> SubgroupFamilyReport:
    """Verify, on generators, that the subgroup family is preserved by the
    restriction homomorphisms and by the extender."""
    report = SubgroupFamilyReport(hypothesis_ok=True)
    lattice = lp.lattice
    for a in lattice.layouts:
        for b in lattice.layouts:
            if a == b or not lattice.geq(a, b):
                continue
            for g in n_family[a].generators:
                if not subgroup_membership(lp.restrict(g, a, b), n_family[b]):
                    report.hypothesis_ok = False
                    report.hypothesis_failures.append(
                        ("restriction", a, b)
                    )
            for g in n_family[b].generators:
                if not subgroup_membership(lp.extend(g, a, b), n_family[a]):
                    report.hypothesis_ok = False
                    report.hypothesis_failures.append(("extender", a, b))
    return report


def check_fissilizer_defect(lp, q: Ensemble, n_family) -> SubgroupFamilyReport:
    """Certificate form of the defect statement: when the family is invariant
    and every combining-product defect of ``q`` lies in it, the fissilized
    ensemble differs from ``q`` by a member at the top layout.

    Hypothesis failures are reported separately from a failing conclusion.
    """
    report = check_invariance(lp, n_family)
    wrapped = lp.wrap(q)
    for a in lp.lattice.layouts:
        defect = q_square(lp, q, a) - lp.restrict(wrapped, lp.top, a)
        if not subgroup_membership(defect, n_family[a]):
            report.hypothesis_ok = False
            report.hypothesis_failures.append(("defect", a))
    if not report.hypothesis_ok:
        return report
    diff = lp.wrap(fissilize(lp, q) - q)
    report.conclusion = bool(subgroup_membership(diff, n_family[lp.top]))
    return report


def defect_subgroup_family(lp, seeds):
    """The smallest family containing every combining-product defect of the
    seed ensembles and closed under restriction and the extender.

    Closure terminates because the generated subgroups sit inside finitely
    generated integer lattices, which have no infinite ascending chains.
    """
    lattice = lp.lattice
    gens = {a: [] for a in lattice.layouts}

    def push(a, g):
        if not g:
            return False
        if subgroup_membership(g, SubgroupGenerators(gens[a])):
            return False
        gens[a].append(g)
        return True

    for q in seeds:
        wrapped = lp.wrap(q)
        for a in lattice.layouts:
            push(a, q_square(lp, q, a) - lp.restrict(wrapped, lp.top, a))
    changed = True
    while changed:
        changed = False
        for a in lattice.layouts:
            for b in lattice.layouts:
                if a == b or not lattice.geq(a, b):
                    continue
                for g in list(gens[a]):
                    changed |= push(b, lp.restrict(g, a, b))
                for g in list(gens[b]):
                    changed |= push(a, lp.extend(g, a, b))
    return {a: SubgroupGenerators(gs) for a, gs in gens.items()}


def point_ensemble(lp) -> Ensemble:
    """The singleton at the unique element over the empty layout."""
    return lp.combine(layout_key([]), {})


__all__ = [
    "FunctionFacePresheaf",
    "ProductLayoutPresheaf",
    "q_square",
    "is_fissile",
    "fissilize",
    "check_invariance",
    "check_fissilizer_defect",
    "point_ensemble",
    "SubgroupFamilyReport",
    "singleton",
]
