"""Transcendence degree, the independence relation, and amalgamation.

Independence of subfields is decided by the Jacobian rank criterion (valid
in characteristic 0): td of a tuple over a finitely generated subfield is a
difference of Jacobian ranks with respect to the ambient transcendentals.
Pairwise amalgamation takes the free composite (new transcendentals of the
two sides kept algebraically independent); higher-dimensional systems are
completed the same way, with the homomorphism's well-definedness certified
on the integer kernel of the concatenated graph arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IllFormedExtension, UnsupportedShape
from .efield import (EFieldPresentation, WellDefCheck, e_eval, hull,
                     merge_graphs, presentation)
from .fieldelem import FieldElem, coerce
from .linalg import jacobian_rank


# -- transcendence degree and ACF-independence --------------------------------


def tdeg(amb_params, elems, over=()) -> int:
    """td of ``elems`` over the subfield generated by ``over``.

    Jacobian criterion: rank J(elems + over) - rank J(over), derivatives
    taken by every ambient transcendental.
    """
    params = list(amb_params)
    base = list(over)
    return (jacobian_rank(list(elems) + base, params)
            - jacobian_rank(base, params))


def acf_indep(a, b, c, amb_params) -> bool:
    """Field-theoretic independence of A from B over C inside the ambient
    field; symmetric by construction (rank identity form)."""
    params = list(amb_params)
    a, b, c = list(a), list(b), list(c)
    r_abc = jacobian_rank(a + b + c, params)
    r_c = jacobian_rank(c, params)
    r_ac = jacobian_rank(a + c, params)
    r_bc = jacobian_rank(b + c, params)
    return r_abc + r_c == r_ac + r_bc


def indep(f: EFieldPresentation, a, b, c) -> bool:
    """The independence relation: the hulls of AC and BC are ACF-independent
    over the hull of C, inside ``f``."""
    order = f.cyclotomic_order
    a = [coerce(x, order) for x in a]
    b = [coerce(x, order) for x in b]
    c = [coerce(x, order) for x in c]
    h_ac = hull(f, a + c).generators
    h_bc = hull(f, b + c).generators
    h_c = hull(f, c).generators
    return acf_indep(h_ac, h_bc, h_c, f.transcendentals)


# -- pairwise amalgamation ------------------------------------------------------


@dataclass(frozen=True)
class EmbeddedPresentation:
    amb: EFieldPresentation
    base_name: str
    inclusion: dict  # base symbol -> FieldElem of amb

    def apply(self, e: FieldElem) -> FieldElem:
        ren = {}
        for s, target in self.inclusion.items():
            syms = target.symbols()
            if len(syms) == 1 and target == FieldElem.from_symbol(
                    next(iter(syms)), target.order):
                ren[s] = next(iter(syms))
            else:
                raise UnsupportedShape(
                    "only renaming inclusions are supported")
        return e.rename(ren)


@dataclass(frozen=True)
class Amalgam:
    composite: EFieldPresentation
    g1: EmbeddedPresentation
    g2: EmbeddedPresentation
    check: WellDefCheck


def _check_extension(base: EFieldPresentation, ext: EFieldPresentation) -> None:
    if ext.cyclotomic_order != base.cyclotomic_order:
        raise IllFormedExtension(
            f"{ext.name}: cyclotomic order {ext.cyclotomic_order} differs "
            f"from the base's {base.cyclotomic_order}")
    missing = set(base.transcendentals) - set(ext.transcendentals)
    if missing:
        raise IllFormedExtension(
            f"{ext.name} does not contain base transcendentals {sorted(missing)}")
    for arg, val in base.egraph:
        ev = e_eval(ext, arg)
        if not ev.is_value or ev.value != val:
            raise IllFormedExtension(
                f"{ext.name} does not preserve the base graph at {arg}")


def amalgamate2(base: EFieldPresentation, f1: EFieldPresentation,
                f2: EFieldPresentation) -> Amalgam:
    """Free composite of two extensions over a shared base.

    New transcendentals of each side are renamed apart with node-name
    prefixes; the union graph is certified well defined and consolidated.
    """
    _check_extension(base, f1)
    _check_extension(base, f2)
    order = base.cyclotomic_order
    shared = set(base.transcendentals)
    name1, name2 = f1.name, f2.name
    if name1 == name2:
        name1, name2 = f"{name1}_1", f"{name2}_2"

    taken = set(shared)

    def rename_map(f: EFieldPresentation, prefix: str) -> dict:
        out = {}
        for s in f.transcendentals:
            if s in shared:
                out[s] = s
                continue
            target = f"{prefix}__{s}"
            while target in taken:
                target = "_" + target
            taken.add(target)
            out[s] = target
        return out

    m1 = rename_map(f1, name1)
    m2 = rename_map(f2, name2)
    trans = list(base.transcendentals)
    for s in f1.transcendentals:
        if m1[s] not in trans:
            trans.append(m1[s])
    for s in f2.transcendentals:
        if m2[s] not in trans:
            trans.append(m2[s])
    pairs = [(a.rename(m1), v.rename(m1)) for a, v in f1.egraph]
    pairs += [(a.rename(m2), v.rename(m2)) for a, v in f2.egraph]
    merged, check = merge_graphs(pairs, order)
    comp = presentation(f"{base.name}({name1},{name2})", order, trans, merged)
    inc1 = {s: comp.elem(m1[s]) for s in f1.transcendentals}
    inc2 = {s: comp.elem(m2[s]) for s in f2.transcendentals}
    g1 = EmbeddedPresentation(amb=comp, base_name=f1.name, inclusion=inc1)
    g2 = EmbeddedPresentation(amb=comp, base_name=f2.name, inclusion=inc2)
    return Amalgam(composite=comp, g1=g1, g2=g2, check=check)


# -- independent systems ---------------------------------------------------------


def subset_label(a) -> str:
    return "{" + ",".join(str(i) for i in sorted(a)) + "}"


@dataclass(frozen=True)
class IndepSystem:
    """A P(n) or P^-(n) diagram of presentations with inclusion arrows.

    Nodes share symbols: the arrow for a <= b is the identity on the
    smaller node's transcendentals (renaming-style inputs are materialized
    at load time).
    """

    n: int
    nodes: dict  # frozenset -> EFieldPresentation

    def __post_init__(self):
        if self.n < 3:
            raise UnsupportedShape("systems need n >= 3")
        if self.n > 6:
            raise UnsupportedShape("n is capped at 6 (2^n nodes)")
        full = frozenset(range(self.n))
        expected = _proper_subsets(self.n)
        have = set(self.nodes)
        if have == expected | {full}:
            pass
        elif have == expected:
            pass
        else:
            raise UnsupportedShape("nodes must cover P^-(n) or P(n)")
        orders = {f.cyclotomic_order for f in self.nodes.values()}
        if len(orders) != 1:
            raise UnsupportedShape("all nodes must share one cyclotomic order")

    @property
    def is_complete(self) -> bool:
        return frozenset(range(self.n)) in self.nodes

    def node(self, a) -> EFieldPresentation:
        return self.nodes[frozenset(a)]


def _proper_subsets(n: int) -> set:
    out = set()
    for mask in range(2 ** n - 1):
        out.add(frozenset(i for i in range(n) if mask >> i & 1))
    return out


def validate_system(s: IndepSystem) -> None:
    """Functoriality: every inclusion a <= b is a field-and-graph embedding."""
    for a, fa in s.nodes.items():
        for b, fb in s.nodes.items():
            if a < b:
                _check_extension(fa, fb)


@dataclass(frozen=True)
class SystemReport:
    ok: bool
    failures: tuple  # ((label_a, label_b), ...) independence failures


def verify_independent_system(s: IndepSystem) -> SystemReport:
    """Check the independence condition at every pair a < b of the diagram."""
    failures = []
    subsets = sorted(s.nodes, key=lambda x: (len(x), sorted(x)))
    for b in subsets:
        fb = s.nodes[b]
        for a in subsets:
            if not (a < b) or not a:
                continue
            gens_a = [fb.elem(t) for t in s.nodes[a].transcendentals]
            c_syms: set = set()
            for c in subsets:
                if c < a:
                    c_syms |= set(s.nodes[c].transcendentals)
            gens_c = [fb.elem(t) for t in sorted(c_syms)]
            d_syms: set = set()
            for d in subsets:
                if d <= b and not (a <= d):
                    d_syms |= set(s.nodes[d].transcendentals)
            gens_d = [fb.elem(t) for t in sorted(d_syms)]
            if not gens_d:
                continue
            if not indep(fb, gens_a, gens_d, gens_c):
                failures.append((subset_label(a), subset_label(b)))
    return SystemReport(ok=not failures, failures=tuple(failures))


@dataclass(frozen=True)
class CompletionResult:
    system: IndepSystem
    check: WellDefCheck


def complete_system(s: IndepSystem, verify: bool = True) -> CompletionResult:
    """Complete an independent P^-(n) system to a P(n) system.

    The top node is the free composite (union) of the codimension-1 nodes;
    the union exponential graph is certified well defined: every integer
    kernel vector of the concatenated argument family must have value
    product 1.
    """
    if s.is_complete:
        raise UnsupportedShape("system is already complete")
    validate_system(s)
    if verify:
        rep = verify_independent_system(s)
        if not rep.ok:
            raise UnsupportedShape(
                f"input system is not independent: {rep.failures}")
    n = s.n
    order = next(iter(s.nodes.values())).cyclotomic_order
    codim1 = [frozenset(range(n)) - {i} for i in range(n)]
    trans: list = []
    pairs: list = []
    for a in codim1:
        f = s.nodes[a]
        for t in f.transcendentals:
            if t not in trans:
                trans.append(t)
        pairs.extend(f.egraph)
    merged, check = merge_graphs(pairs, order)
    top = presentation(f"F_{subset_label(range(n))}", order, trans, merged)
    nodes = dict(s.nodes)
    nodes[frozenset(range(n))] = top
    return CompletionResult(system=IndepSystem(n=n, nodes=nodes), check=check)
