"""The wedge of suspended thick simplices, its subset-monoid action, and the
inductive construction of fissile morphism ensembles with full certificates.

For an index set I, the main space is the wedge, over all subsets J of I,
of the suspended thick simplex on the letters I minus J.  The monoid of
subsets acts by moving the component at J to the component at K meet J
along the letter inclusion.  Over the coned barycentric subdivisions of the
faces of a ground simplex, constant-at-top-vertex morphisms are bent, by a
lift-and-fill induction, into fissile ensembles whose alternating sums are
certified deep in the block filtration.
"""

import os
from dataclasses import dataclass, field

from .canon import ckey
from .chained import (
    SubsetMonoid,
    ideal_membership,
    omega,
    subset_key,
    subsets_of,
)
from .ensembles import Ensemble, augmentation, map_ensemble, singleton
from .identities import covers, proper_covers
from .layouts import LayoutLattice, layout_key
from .posets import Section, nabla_inverse
from .simplicial import (
    ContractionTower,
    SMorphism,
    barycentric,
    canonical_retraction,
    compose,
    cone,
    cone_map,
    induce_through,
    layout_complex,
    plus_base,
    plus_base_iso,
    point,
    reduced_cone_map,
    subsimplicial,
    suspension_top_at,
    wedge,
)
from .witnesses import (
    Block,
    BlockPart,
    FiltrationWitness,
    IdealTerm,
    PSpace,
    SpaceRegistry,
    cone_witness,
    map_witness,
    restrict_witness,
    verify_witness,
    wedge_witness,
)


class GuardExceeded(ValueError):
    pass


def construction_guard(i_set, e_set):
    max_i = int(os.environ.get("FISSILE_MAX_CONSTRUCT_I", 2))
    max_e = int(os.environ.get("FISSILE_MAX_CONSTRUCT_E", 2))
    i_n, e_n = len(i_set), len(e_set)
    if i_n <= max_i and e_n <= max_e:
        return
    if i_n == 3 and e_n == 1 and max_i <= 3:
        return
    raise GuardExceeded(
        f"construction sizes |I|={i_n}, |E|={e_n} exceed the configured guard"
    )


class WedgeContext:
    """All shared objects for one (index set, ground set) run.

    The truncation bound is one above the ground-set size so that every
    reduced-cone domain appearing in witness transports keeps its
    nondegenerate simplices within the stored levels.
    """

    def __init__(self, i_set, e_set, bound=None):
        self.i_set = subset_key(i_set)
        self.e_set = subset_key(e_set)
        if not self.e_set:
            raise ValueError("ground set must be nonempty")
        self.bound = (len(self.e_set) + 1) if bound is None else bound
        self.monoid = SubsetMonoid(self.i_set)
        self.registry = SpaceRegistry(self.monoid)
        self.components = subsets_of(self.i_set)
        self.towers = {
            j: ContractionTower(tuple(sorted(set(self.i_set) - set(j))), self.bound)
            for j in self.components
        }
        parts = [self.towers[j].susp for j in self.components]
        self.w_obj, self.w_insertions = wedge(parts, label=("W", self.i_set))
        self._susp_maps = {}
        self._spaces = {}
        self._sub_objs = {}
        self._cones = {}
        self._plus = {}
        self._plus_iso = {}
        self._rho = {}
        self._iota = {}
        self._sigma = {}
        self._xi = {}
        self._identity_cert = None
        self._omega_certs = {}
        self.full_space = self._build_full_space()

    # -- component plumbing --------------------------------------------

    def _susp_map(self, j_from, j_to) -> SMorphism:
        """Component map induced by the letter inclusion, for j_to <= j_from."""
        key = (j_from, j_to)
        if key not in self._susp_maps:
            t_from, t_to = self.towers[j_from], self.towers[j_to]
            thick_inc = SMorphism(
                t_from.thick,
                t_to.thick,
                [
                    {x: x for x in t_from.thick.level(n)}
                    for n in range(self.bound + 1)
                ],
            )
            cone_inc = cone_map(
                thick_inc, 1, cdom=t_from.hat_cone, ccod=t_to.hat_cone
            )
            self._susp_maps[key] = induce_through(
                t_from.susp_proj, compose(t_to.susp_proj, cone_inc)
            )
        return self._susp_maps[key]

    def _action_table(self, k):
        maps = []
        for n in range(self.bound + 1):
            level = {self.w_obj.basepoint_at(n): self.w_obj.basepoint_at(n)}
            for idx, j in enumerate(self.components):
                j2 = self.monoid.op(k, j)
                idx2 = self.components.index(j2)
                smap = self._susp_map(j, j2)
                target = self.towers[j2].susp
                for x in self.towers[j].susp.level(n):
                    key = self.w_insertions[idx].maps[n][x]
                    if key == self.w_obj.basepoint_at(n):
                        continue
                    y = smap.maps[n][x]
                    level[key] = (
                        self.w_obj.basepoint_at(n)
                        if y == target.basepoint_at(n)
                        else (idx2, y)
                    )
            maps.append(level)
        return SMorphism(self.w_obj, self.w_obj, maps)

    def _build_full_space(self) -> PSpace:
        action = {k: self._action_table(k) for k in self.monoid.elements}
        return PSpace(self.w_obj, self.monoid, action, label=("WL", self.i_set))

    def sub_obj(self, l_key):
        """The wedge of the components at subsets of l, inside the full one."""
        l_key = subset_key(l_key)
        if l_key not in self._sub_objs:
            allowed = {
                idx
                for idx, j in enumerate(self.components)
                if set(j) <= set(l_key)
            }

            def member(n, x):
                if x == self.w_obj.basepoint_at(n):
                    return True
                return x[0] in allowed

            self._sub_objs[l_key] = subsimplicial(
                self.w_obj,
                member,
                basepoint=self.w_obj.basepoint,
                label=("WL", l_key),
            )
        return self._sub_objs[l_key]

    def space(self, l_key) -> PSpace:
        l_key = subset_key(l_key)
        if l_key == self.i_set:
            return self.full_space
        if l_key not in self._spaces:
            obj = self.sub_obj(l_key)
            action = {}
            for k in self.monoid.elements:
                big = self.full_space.action[k]
                action[k] = SMorphism(
                    obj,
                    obj,
                    [
                        {x: big.maps[n][x] for x in obj.level(n)}
                        for n in range(self.bound + 1)
                    ],
                )
            self._spaces[l_key] = PSpace(
                obj, self.monoid, action, label=("WL", l_key)
            )
        return self._spaces[l_key]

    def proper_space(self) -> PSpace:
        """Components at proper subsets only."""
        if not hasattr(self, "_proper_space"):
            allowed = {
                idx
                for idx, j in enumerate(self.components)
                if j != self.i_set
            }

            def member(n, x):
                if x == self.w_obj.basepoint_at(n):
                    return True
                return x[0] in allowed

            obj = subsimplicial(
                self.w_obj,
                member,
                basepoint=self.w_obj.basepoint,
                label=("Wx", self.i_set),
            )
            action = {}
            for k in self.monoid.elements:
                big = self.full_space.action[k]
                action[k] = SMorphism(
                    obj,
                    obj,
                    [
                        {x: big.maps[n][x] for x in obj.level(n)}
                        for n in range(self.bound + 1)
                    ],
                )
            self._proper_space = PSpace(
                obj, self.monoid, action, label=("Wx", self.i_set)
            )
        return self._proper_space

    # -- domain side -----------------------------------------------------

    def cone_layout(self, b):
        """The coned barycentric subdivision of the disjoint faces of b."""
        b = layout_key(b)
        if b not in self._cones:
            self._cones[b] = cone(
                barycentric(layout_complex(b), self.bound),
                0,
                check=False,
            )
            self._cones[b].label = ("conelayout", b)
        return self._cones[b]

    def cone_face(self, f):
        return self.cone_layout(layout_key([f]))

    def plus_base_of(self, f):
        f = subset_key(f)
        if f not in self._plus:
            self._plus[f] = plus_base(
                self.cone_face(f), label=("plusbase", f)
            )
        return self._plus[f]

    def plus_iso(self, f) -> SMorphism:
        """Isomorphism from the coned subdivision to the reduced cone of its
        base-plus-apex subset."""
        f = subset_key(f)
        if f not in self._plus_iso:
            red = self.registry.reduced_domain(self.plus_base_of(f))
            self._plus_iso[f] = plus_base_iso(self.cone_face(f), red)
        return self._plus_iso[f]

    def retraction(self, a, b) -> SMorphism:
        """Canonical retraction between coned layout subdivisions, a >= b."""
        a, b = layout_key(a), layout_key(b)
        if (a, b) not in self._rho:
            self._rho[(a, b)] = canonical_retraction(
                layout_complex(a),
                layout_complex(b),
                self.bound,
                cone_k=self.cone_layout(a),
                cone_l=self.cone_layout(b),
            )
        return self._rho[(a, b)]

    def layout_inclusion(self, b, a) -> SMorphism:
        """Inclusion of coned layout subdivisions for a >= b (shared keys)."""
        return SMorphism(
            self.cone_layout(b),
            self.cone_layout(a),
            [
                {x: x for x in self.cone_layout(b).level(n)}
                for n in range(self.bound + 1)
            ],
            check=False,
        )

    def iota(self, b):
        """Isomorphism from a coned layout subdivision to the wedge of its
        per-block cones; returns (morphism, wedge object, insertions)."""
        b = layout_key(b)
        if b not in self._iota:
            blocks = list(b)
            wobj, ins = wedge(
                [self.cone_face(g) for g in blocks],
                label=("wedgecones", b),
            )
            src = self.cone_layout(b)
            maps = []
            for n in range(self.bound + 1):
                level = {}
                for t, chain in src.level(n):
                    if chain is None:
                        level[(t, chain)] = wobj.basepoint_at(n)
                        continue
                    head = set(chain[0])
                    gi = next(
                        i for i, g in enumerate(blocks) if head <= set(g)
                    )
                    level[(t, chain)] = ins[gi].maps[n][(t, chain)]
                maps.append(level)
            self._iota[b] = (SMorphism(src, wobj, maps), wobj, ins)
        return self._iota[b]

    # -- morphisms into the wedge -----------------------------------------

    def xi(self, j, f) -> SMorphism:
        """Constant morphism at the top vertex of the component at j, on the
        based subdivision of the face f."""
        j, f = subset_key(j), subset_key(f)
        if (j, f) not in self._xi:
            t = self.plus_base_of(f)
            idx = self.components.index(j)
            susp = self.towers[j].susp
            maps = []
            for n in range(self.bound + 1):
                top = suspension_top_at(susp, n)
                tagged = self.w_insertions[idx].maps[n][top]
                level = {}
                for x in t.level(n):
                    if x == t.basepoint_at(n):
                        level[x] = self.w_obj.basepoint_at(n)
                    else:
                        level[x] = tagged
                maps.append(level)
            out = SMorphism(t, self.sub_obj(j), maps)
            assert out.is_based()
            self._xi[(j, f)] = out
        return self._xi[(j, f)]

    def contraction(self, l_key, letter) -> SMorphism:
        """The componentwise contraction from the reduced cone of the wedge
        at l back to the wedge; the letter must avoid l."""
        l_key = subset_key(l_key)
        if letter in l_key:
            raise ValueError("contraction letter must lie outside the subset")
        key = (l_key, letter)
        if key not in self._sigma:
            space = self.space(l_key)
            red_obj = self.registry.reduced_space(space)[1][0]
            wl = space.obj
            maps = []
            for n in range(self.bound + 1):
                level = {}
                for x in red_obj.level(n):
                    if x == red_obj.basepoint_at(n):
                        level[x] = wl.basepoint_at(n)
                        continue
                    t, y = x
                    idx, z = y
                    j = self.components[idx]
                    tower = self.towers[j]
                    cls = tower.reduced[2].maps[n][(t, z)]
                    img = tower.contraction(letter).maps[n][cls]
                    if img == tower.susp.basepoint_at(n):
                        level[x] = wl.basepoint_at(n)
                    else:
                        level[x] = (idx, img)
                maps.append(level)
            sigma = SMorphism(red_obj, wl, maps)
            assert sigma.is_based()
            self._sigma[key] = sigma
        return self._sigma[key]

    def filling(self, v: SMorphism, letter, l_key) -> SMorphism:
        """Extend a based morphism on a based face subdivision over the whole
        coned subdivision, contracting along the chosen letter."""
        l_key = subset_key(l_key)
        f = v.domain.label[1]
        red_t = self.registry.reduced_domain(self.plus_base_of(f))
        red_space_tuple = self.registry.reduced_space(self.space(l_key))
        cv = reduced_cone_map(v, red_t, red_space_tuple[1])
        sigma = self.contraction(l_key, letter)
        return compose(sigma, compose(cv, self.plus_iso(f)))

    # -- certificates ------------------------------------------------------

    def identity_cert(self):
        if self._identity_cert is None:
            self._identity_cert = ideal_membership(
                self.monoid, singleton(self.i_set), 0
            )
        return self._identity_cert

    def omega_cert(self, j):
        j = subset_key(j)
        if j not in self._omega_certs:
            self._omega_certs[j] = ideal_membership(self.monoid, omega(j), len(j))
        return self._omega_certs[j]

    # -- witness building blocks --------------------------------------------

    def constant_witness(self, t_obj, space: PSpace, coeff=1) -> FiltrationWitness:
        """Rank-0 witness for coeff * <constant basepoint morphism> on t."""
        pt = point(self.bound)
        pt.label = ("point",)
        const = SMorphism(
            pt,
            space.obj,
            [
                {pt.basepoint_at(n): space.obj.basepoint_at(n)}
                for n in range(self.bound + 1)
            ],
        )
        wobj, ins = wedge([pt], label=("wedgept",))
        f = SMorphism(
            t_obj,
            wobj,
            [
                {x: wobj.basepoint_at(n) for x in t_obj.level(n)}
                for n in range(self.bound + 1)
            ],
        )
        part = BlockPart(
            level=0,
            terms=[IdealTerm(singleton(self.i_set), self.identity_cert(), const)],
            domain=pt,
            space=space,
        )
        block = Block(
            f=f, wedge_obj=wobj, insertions=ins, parts=[part], space=space
        )
        return FiltrationWitness(0, [(coeff, block)])

    def singleton_block_witness(
        self, pi, cert, morphism, t_obj, space: PSpace, coeff=1
    ) -> FiltrationWitness:
        """Witness for coeff * (pi . <morphism>) as one block of rank
        cert.level over its own domain."""
        dom = morphism.domain
        wobj, ins = wedge([dom], label=("wedge1", dom.label))
        part = BlockPart(
            level=cert.level,
            terms=[IdealTerm(pi, cert, morphism)],
            domain=dom,
            space=space,
        )
        block = Block(
            f=ins[0], wedge_obj=wobj, insertions=ins, parts=[part], space=space
        )
        return FiltrationWitness(cert.level, [(coeff, block)])


def restrict_ensemble(s: Ensemble, k: SMorphism) -> Ensemble:
    return map_ensemble(lambda v: compose(v, k), s)


def combine_over_layout(ctx: WedgeContext, b, parts_by_block) -> Ensemble:
    """Combining product of per-block morphism ensembles, landing on the
    coned subdivision of the layout."""
    b = layout_key(b)
    iota, wobj, ins = ctx.iota(b) if b else (None, None, None)
    if not b:
        apex_obj = ctx.cone_layout(())
        w_space = ctx.full_space

        def const(tup):
            return SMorphism(
                apex_obj,
                w_space.obj,
                [
                    {
                        x: w_space.obj.basepoint_at(n)
                        for x in apex_obj.level(n)
                    }
                    for n in range(ctx.bound + 1)
                ],
            )

        from .ensembles import combining_product

        return combining_product([], const)
    from .simplicial import wedge_combine
    from .ensembles import combining_product

    factors = [parts_by_block[g] for g in b]
    return combining_product(
        factors,
        lambda tup: compose(
            wedge_combine(wobj, ins, list(tup), codomain=ctx.w_obj), iota
        ),
    )


def combine_witnesses_over_layout(ctx, b, witnesses, space) -> FiltrationWitness:
    """Witness for the layout combining product; ranks add."""
    b = layout_key(b)
    if not b:
        return ctx.constant_witness(ctx.cone_layout(()), space)
    iota, wobj, ins = ctx.iota(b)
    wed = wedge_witness(witnesses, wobj, ins)
    return restrict_witness(wed, iota)


def block_fingerprint(block: Block):
    rows = [block.f.table_key()]
    for p in block.parts:
        terms = tuple(
            sorted(
                (
                    tuple(sorted(t.pi.terms.items())),
                    t.certificate.level,
                    t.certificate.combination,
                    t.morphism.table_key(),
                )
                for t in p.terms
            )
        )
        rows.append((p.level, terms))
    return ckey(repr(rows))


def compact_witness(w: FiltrationWitness) -> FiltrationWitness:
    merged = {}
    order = []
    for c, b in w.entries:
        key = block_fingerprint(b)
        if key not in merged:
            merged[key] = [0, b]
            order.append(key)
        merged[key][0] += c
    entries = [(c, b) for c, b in (merged[k] for k in order) if c]
    return FiltrationWitness(w.level, entries)


class MorphismLayoutPresheaf:
    """The layout presheaf of morphism ensembles on coned subdivisions.

    Universes are based morphisms from the coned layout subdivisions into a
    fixed action space; restriction composes with the inclusion, extension
    composes with the canonical retraction, and the combining product glues
    morphisms over the per-block cones.  The repair operator and fissility
    tests consume this through the same interface as the synthetic model.
    """

    def __init__(self, ctx: WedgeContext, space=None):
        self.ctx = ctx
        self.space = space if space is not None else ctx.full_space
        self.lattice = LayoutLattice(ctx.e_set, bound=len(ctx.e_set))
        self.top = self.lattice.top

    def wrap(self, q: Ensemble) -> Ensemble:
        return q

    def unwrap(self, s: Ensemble) -> Ensemble:
        return s

    def restrict(self, s: Ensemble, a, b) -> Ensemble:
        if not self.lattice.geq(a, b):
            raise ValueError("restriction requires a >= b")
        return restrict_ensemble(s, self.ctx.layout_inclusion(b, a))

    def extend(self, s: Ensemble, a, b) -> Ensemble:
        if not self.lattice.geq(a, b):
            raise ValueError("extension requires a >= b")
        return restrict_ensemble(s, self.ctx.retraction(a, b))

    def combine(self, a, parts) -> Ensemble:
        return combine_over_layout(self.ctx, a, parts)


@dataclass
class PairRecord:
    face: tuple
    index_subset: tuple
    ensemble: Ensemble
    fissile: bool
    alt_sum: Ensemble
    alt_witness: FiltrationWitness
    boundary_checked: bool = True


@dataclass
class ConstructionResult:
    ctx: WedgeContext
    pairs: dict = field(default_factory=dict)

    def final(self, j):
        return self.pairs[(self.ctx.e_set, subset_key(j))]


def construct_p(i_set, e_set, bound=None, enforce_guard=True) -> ConstructionResult:
    """Run the full induction over (face, subset) pairs.

    For each pair the constructed ensemble restricts multiplicatively to
    every layout of its face (condition 0), restricts to the constant
    morphism on the based subdivision (condition 1), and its alternating
    sum over subsets carries a verified witness at level the subset size
    (condition 2).
    """
    i_set, e_set = subset_key(i_set), subset_key(e_set)
    if not i_set:
        raise ValueError("the construction needs a nonempty index set")
    if enforce_guard:
        construction_guard(i_set, e_set)
    ctx = WedgeContext(i_set, e_set, bound=bound)
    result = ConstructionResult(ctx=ctx)
    faces = sorted(
        [f for f in subsets_of(e_set) if f],
        key=lambda f: (len(f), ckey(f)),
    )
    proper = sorted(
        [j for j in subsets_of(i_set) if j != i_set],
        key=lambda j: (len(j), ckey(j)),
    )
    for f in faces:
        for j in proper:
            record = _construct_pair(ctx, result.pairs, f, j)
            result.pairs[(f, j)] = record
    return result


def _alt_sum(pairs, f, j, sign_shift=0):
    """Sum over subsets k of j of (-1)^(|j| - |k| + shift) p_k^f."""
    total = Ensemble.zero()
    for k in subsets_of(j):
        total = total + ((-1) ** (len(j) - len(k) + sign_shift)) * pairs[
            (f, k)
        ].ensemble
    return total


def _construct_pair(ctx: WedgeContext, pairs, f, j) -> PairRecord:
    space_j = ctx.space(j)
    lat = LayoutLattice(f, bound=len(f))
    cone_f = ctx.cone_face(f)
    t_f = ctx.plus_base_of(f)
    inc_tf = SMorphism(
        t_f,
        cone_f,
        [{x: x for x in t_f.level(n)} for n in range(ctx.bound + 1)],
        check=False,
    )
    top = lat.top
    proper_layouts = [b for b in lat.layouts if b != top]

    # families over the proper layouts: alternating sums of combined parts
    u_vals = Section()
    u_wits = {}
    for b in proper_layouts:
        val = Ensemble.zero()
        for k in subsets_of(j):
            sign = (-1) ** (len(j) - len(k))
            combined = combine_over_layout(
                ctx, b, {g: pairs[(g, k)].ensemble for g in b}
            )
            val = val + sign * combined
        cover_wits = []
        for l_fn in covers(len(b), j):
            assignment = dict(zip(b, l_fn))
            per_block = []
            for g in b:
                rec = pairs[(g, assignment[g])]
                wit = map_witness(
                    rec.alt_witness,
                    _space_inclusion(ctx, assignment[g], j),
                    ctx.space(assignment[g]),
                    space_j,
                )
                per_block.append(wit)
            cover_wits.append(
                combine_witnesses_over_layout(ctx, b, per_block, space_j)
            )
        entries = []
        for w in cover_wits:
            entries.extend(w.entries)
        wit = compact_witness(FiltrationWitness(len(j), entries))
        assert wit.value() == val, "cover expansion mismatch"
        u_vals[b] = val
        u_wits[b] = wit

    # lift the compatible family through the inverse transform
    poset = lat.poset()
    punctured = poset.without(top)

    def restrict_along(a, b, s):
        return restrict_ensemble(s, ctx.layout_inclusion(b, a))

    from .posets import check_compatible

    check_compatible(punctured, restrict_along, u_vals)
    v_vals = nabla_inverse(punctured, restrict_along, u_vals)
    v_wits = {}
    for b in reversed(punctured.linear_extension()):
        wit = u_wits[b]
        for p in punctured.elements:
            if p != b and punctured.leq(b, p):
                wit = wit.plus(
                    restrict_witness(
                        v_wits[p], ctx.layout_inclusion(b, p)
                    ).scaled(-1)
                )
        v_wits[b] = compact_witness(wit)
        assert v_wits[b].value() == v_vals.value(b)

    u_lift = Ensemble.zero()
    lift_entries = []
    for b in punctured.elements:
        if not v_vals.value(b):
            if v_wits[b].entries:
                lift_entries.extend(
                    restrict_witness(v_wits[b], ctx.retraction(top, b)).entries
                )
            continue
        u_lift = u_lift + restrict_ensemble(
            v_vals[b], ctx.retraction(top, b)
        )
        lift_entries.extend(
            restrict_witness(v_wits[b], ctx.retraction(top, b)).entries
        )
    u_wit = compact_witness(FiltrationWitness(len(j), lift_entries))
    assert u_wit.value() == u_lift

    for b in proper_layouts:
        got = restrict_ensemble(u_lift, ctx.layout_inclusion(b, top))
        assert got == u_vals.value(b), "lift does not restrict to the family"

    # bend the boundary defect flat with the filling
    q_ens = Ensemble.zero()
    for k in subsets_of(j):
        if k == j:
            continue
        q_ens = q_ens + ((-1) ** (len(j) - 1 - len(k))) * pairs[(f, k)].ensemble
    r_ens = q_ens + u_lift

    xi_jf = ctx.xi(j, f)
    delta = singleton(xi_jf) - restrict_ensemble(r_ens, inc_tf)
    omega_wit = ctx.singleton_block_witness(
        omega(j), ctx.omega_cert(j), xi_jf, t_f, space_j
    )
    delta_wit = compact_witness(
        omega_wit.plus(restrict_witness(u_wit, inc_tf).scaled(-1))
    )
    assert delta_wit.value() == delta, "boundary defect expansion mismatch"

    letter = sorted(set(ctx.i_set) - set(j))[0]
    chi_delta = map_ensemble(lambda v: ctx.filling(v, letter, j), delta)
    p_new = r_ens + chi_delta

    red_space = ctx.registry.reduced_space(space_j)
    chi_wit = restrict_witness(
        map_witness(
            cone_witness(delta_wit, ctx.registry),
            ctx.contraction(j, letter),
            red_space[0],
            space_j,
        ),
        ctx.plus_iso(f),
    )
    alt_value = u_lift + chi_delta
    direct_alt = p_new - q_ens
    assert direct_alt == alt_value
    alt_wit = compact_witness(u_wit.plus(chi_wit))
    assert alt_wit.value() == alt_value

    # condition 1: constant restriction
    assert restrict_ensemble(p_new, inc_tf) == singleton(xi_jf)

    # condition 0: multiplicative restriction to every layout of the face
    record = PairRecord(
        face=f,
        index_subset=j,
        ensemble=p_new,
        fissile=True,
        alt_sum=alt_value,
        alt_witness=alt_wit,
    )
    pairs[(f, j)] = record
    for b in lat.layouts:
        got = restrict_ensemble(p_new, ctx.layout_inclusion(b, top))
        want = combine_over_layout(
            ctx, b, {g: pairs[(g, j)].ensemble for g in b}
        )
        assert got == want, f"multiplicative restriction fails at {b!r}"

    check = verify_witness(alt_value, alt_wit, len(j), ctx.monoid)
    assert check, check.diagnostic
    full_alt = _alt_sum(pairs, f, j)
    assert full_alt == alt_value
    return record


def _space_inclusion(ctx: WedgeContext, small, big) -> SMorphism:
    small, big = subset_key(small), subset_key(big)
    src = ctx.space(small).obj
    dst = ctx.space(big).obj if big != ctx.i_set else ctx.full_space.obj
    return SMorphism(
        src,
        dst,
        [{x: x for x in src.level(n)} for n in range(ctx.bound + 1)],
        check=False,
    )


@dataclass
class AlmostFissileRecord:
    ensemble: Ensemble
    layout_defects: dict
    layout_witnesses: dict
    boundary_value: Ensemble
    boundary_witness: FiltrationWitness


def construct_q(result: ConstructionResult) -> AlmostFissileRecord:
    """Assemble the alternating combination of the final ensembles; every
    layout defect and the boundary defect receive verified witnesses at
    level the index-set size."""
    ctx = result.ctx
    i_set, e_set = ctx.i_set, ctx.e_set
    w_proper = ctx.proper_space()
    q_ens = Ensemble.zero()
    for j in subsets_of(i_set):
        if j == i_set:
            continue
        q_ens = q_ens + ((-1) ** (len(i_set) - 1 - len(j))) * result.final(
            j
        ).ensemble
    assert augmentation(q_ens) == 1

    lat = LayoutLattice(e_set, bound=len(e_set))
    top = lat.top
    defects, witnesses = {}, {}
    for a in lat.layouts:
        combined = combine_over_layout(
            ctx,
            a,
            {
                g: restrict_ensemble(
                    q_ens, ctx.layout_inclusion(layout_key([g]), top)
                )
                for g in a
            },
        )
        defect = combined - restrict_ensemble(q_ens, ctx.layout_inclusion(a, top))
        entries = []
        for k_fn in proper_covers(len(a), i_set):
            assignment = dict(zip(a, k_fn))
            per_block = []
            for g in a:
                rec = result.pairs[(e_set, assignment[g])]
                wit = map_witness(
                    rec.alt_witness,
                    _space_inclusion(ctx, assignment[g], i_set),
                    ctx.space(assignment[g]),
                    ctx.full_space,
                )
                wit = restrict_witness(
                    wit,
                    ctx.layout_inclusion(layout_key([g]), top),
                )
                per_block.append(wit)
            entries.extend(
                combine_witnesses_over_layout(
                    ctx, a, per_block, ctx.full_space
                ).entries
            )
        wit = compact_witness(FiltrationWitness(len(i_set), entries))
        assert wit.value() == defect, "layout defect expansion mismatch"
        check = verify_witness(defect, wit, len(i_set), ctx.monoid)
        assert check, check.diagnostic
        defects[a], witnesses[a] = defect, wit

    t_e = ctx.plus_base_of(e_set)
    inc_te = SMorphism(
        t_e,
        ctx.cone_face(e_set),
        [{x: x for x in t_e.level(n)} for n in range(ctx.bound + 1)],
        check=False,
    )
    xi_top = ctx.xi(i_set, e_set)
    boundary = singleton(xi_top) - restrict_ensemble(q_ens, inc_te)
    bwit = ctx.singleton_block_witness(
        omega(i_set), ctx.omega_cert(i_set), xi_top, t_e, ctx.full_space
    )
    bwit = compact_witness(bwit)
    assert bwit.value() == boundary, "boundary alternating sum mismatch"
    check = verify_witness(boundary, bwit, len(i_set), ctx.monoid)
    assert check, check.diagnostic
    return AlmostFissileRecord(
        ensemble=q_ens,
        layout_defects=defects,
        layout_witnesses=witnesses,
        boundary_value=boundary,
        boundary_witness=bwit,
    )
