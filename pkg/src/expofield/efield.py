"""Finitely presented exponential fields with partial exponential graphs.

A presentation is a purely transcendental field Q(zeta_m)(t_1..t_k) together
with a finite graph {(arg_i, val_i)} on a Q-linearly independent argument
set, so E is defined exactly on the Z-span of the arguments.  Realizing
exponential points on additively free varieties only ever adjoins fresh
transcendentals (injectivity of divisible groups lets every choice be free),
so the regime is closed under all constructions here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd

from .errors import (ExponentialConflict, LinearDependence, MissingExponential,
                     NotAdditivelyFree, WellDefFailure, ZeroValue)
from . import exprlang
from .exprlang import ETerm, Exp, fresh_name
from .fieldelem import FieldElem, coerce
from .linalg import (integer_kernel_basis, integer_row_basis, kernel_basis,
                     coordinate_matrix, rational_span_solve)
from .variety import (ParametricVariety, ReductionResult, additive_freeness,
                      pullback, reduce as variety_reduce)


@dataclass(frozen=True)
class EFieldPresentation:
    name: str
    cyclotomic_order: int = 1
    transcendentals: tuple = ()
    egraph: tuple = ()  # ((arg, val) FieldElem pairs)

    def __post_init__(self):
        _validate_graph(self.egraph, self.cyclotomic_order)

    @property
    def args(self) -> tuple:
        return tuple(a for a, _ in self.egraph)

    @property
    def vals(self) -> tuple:
        return tuple(v for _, v in self.egraph)

    def elem(self, name: str) -> FieldElem:
        return FieldElem.from_symbol(name, self.cyclotomic_order)

    def fresh(self, prefix: str) -> str:
        return fresh_name(prefix, set(self.transcendentals))

    def has_pair(self, arg: FieldElem) -> bool:
        return any(a == arg for a, _ in self.egraph)


def _validate_graph(egraph, order: int) -> None:
    for i, (a, v) in enumerate(egraph):
        if v.is_zero():
            raise ZeroValue(f"graph value {i} is zero")
        if a.is_zero():
            raise LinearDependence([0] * len(egraph),
                                   "E(0)=1 is implicit; 0 cannot be a graph argument")
    args = [a for a, _ in egraph]
    if args:
        rel = integer_kernel_basis(coordinate_matrix(args))
        if rel:
            raise LinearDependence(rel[0])


def presentation(name: str, cyclotomic_order: int = 1, transcendentals=(),
                 egraph=()) -> EFieldPresentation:
    return EFieldPresentation(name=name, cyclotomic_order=cyclotomic_order,
                              transcendentals=tuple(transcendentals),
                              egraph=tuple(egraph))


def _int_nth_root(x: int, n: int):
    """Exact n-th root of a nonnegative integer, or None."""
    if x < 0:
        return None
    if x in (0, 1):
        return x
    lo, hi = 1, 1 << ((x.bit_length() + n - 1) // n + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid ** n
        if p == x:
            return mid
        if p < x:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def _rational_nth_root(w: FieldElem, n: int):
    """w^(1/n) inside the field, when w is a rational perfect n-th power."""
    if not w.is_rational():
        return None
    q = w.as_fraction()
    sign = 1
    if q < 0:
        if n % 2 == 0:
            return None
        sign = -1
        q = -q
    num = _int_nth_root(q.numerator, n)
    den = _int_nth_root(q.denominator, n)
    if num is None or den is None:
        return None
    return coerce(Fraction(sign * num, den), w.order)


def build_unchecked(name: str, cyclotomic_order: int = 1, transcendentals=(),
                    egraph=()) -> EFieldPresentation:
    """Bypass invariant validation (diagnostics only; see check_presentation)."""
    obj = object.__new__(EFieldPresentation)
    object.__setattr__(obj, "name", name)
    object.__setattr__(obj, "cyclotomic_order", cyclotomic_order)
    object.__setattr__(obj, "transcendentals", tuple(transcendentals))
    object.__setattr__(obj, "egraph", tuple(egraph))
    return obj


# -- evaluation ---------------------------------------------------------------


@dataclass(frozen=True)
class EEvalResult:
    value: FieldElem | None = None
    root_specs: tuple = ()  # ((val, denominator >= 2), ...)
    outside_span: bool = False

    @property
    def is_value(self) -> bool:
        return self.value is not None


def e_eval(f: EFieldPresentation, a: FieldElem) -> EEvalResult:
    """Evaluate E(a) from the graph.

    Integer coordinates in the argument span give the product of value
    powers; fractional coordinates report the roots that would be needed;
    arguments outside the Q-span report a fresh value marker.
    """
    a = coerce(a, f.cyclotomic_order)
    if a.is_zero():
        return EEvalResult(value=FieldElem.one(f.cyclotomic_order))
    if not f.egraph:
        return EEvalResult(outside_span=True)
    coords = rational_span_solve([arg for arg, _ in f.egraph], a)
    if coords is None:
        return EEvalResult(outside_span=True)
    if all(q.denominator == 1 for q in coords):
        out = FieldElem.one(f.cyclotomic_order)
        for q, (_, val) in zip(coords, f.egraph):
            if q:
                out = out * val ** int(q)
        return EEvalResult(value=out)
    roots = tuple((val, q.denominator)
                  for q, (_, val) in zip(coords, f.egraph)
                  if q.denominator != 1)
    return EEvalResult(root_specs=roots)


def extend_graph(f: EFieldPresentation, new_pairs) -> EFieldPresentation:
    """Adjoin graph pairs; arguments must stay Q-linearly independent."""
    pairs = list(f.egraph)
    for a, v in new_pairs:
        pairs.append((coerce(a, f.cyclotomic_order),
                      coerce(v, f.cyclotomic_order)))
    for _, v in pairs:
        if v.is_zero():
            raise ZeroValue("graph values must be nonzero")
    rel = integer_kernel_basis(coordinate_matrix([a for a, _ in pairs]))
    if rel:
        raise LinearDependence(rel[0])
    new_syms = set()
    for a, v in pairs:
        new_syms |= a.symbols() | v.symbols()
    trans = list(f.transcendentals)
    for s in sorted(new_syms - set(trans)):
        trans.append(s)
    return replace(f, transcendentals=tuple(trans), egraph=tuple(pairs))


def adjoin_transcendentals(f: EFieldPresentation, names) -> EFieldPresentation:
    trans = list(f.transcendentals)
    for s in names:
        if s in trans:
            raise LinearDependence([], f"symbol {s} already present")
        trans.append(s)
    return replace(f, transcendentals=tuple(trans))


# -- graph consolidation (used by the amalgamation constructions) ------------


@dataclass(frozen=True)
class WellDefCheck:
    kernel_basis: tuple  # integer vectors over the concatenated arguments
    verdicts: tuple  # bool per vector


def merge_graphs(pairs, order: int):
    """Check coherence of a concatenated pair family and rebuild it on a
    Z-basis of the argument lattice.

    Returns (consolidated_pairs, WellDefCheck).  Raises WellDefFailure when
    some integer kernel vector of the arguments has value product != 1.
    """
    pairs = [(coerce(a, order), coerce(v, order)) for a, v in pairs]
    if not pairs:
        return (), WellDefCheck((), ())
    args = [a for a, _ in pairs]
    vals = [v for _, v in pairs]
    kernel = integer_kernel_basis(coordinate_matrix(args))
    verdicts = []
    for vec in kernel:
        prod = FieldElem.one(order)
        for z, v in zip(vec, vals):
            if z:
                prod = prod * v ** z
        ok = prod.is_one()
        verdicts.append(ok)
        if not ok:
            raise WellDefFailure(vec, prod)
    check = WellDefCheck(tuple(tuple(v) for v in kernel), tuple(verdicts))
    if not kernel:
        return tuple(pairs), check
    # rebuild on a Z-basis of the argument lattice
    basis_idx: list[int] = []
    for i in range(len(args)):
        if rational_span_solve([args[j] for j in basis_idx], args[i]) is None:
            basis_idx.append(i)
    coords = []
    lcm = 1
    for a in args:
        q = rational_span_solve([args[j] for j in basis_idx], a)
        coords.append(q)
        for x in q:
            lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    int_rows = [[int(x * lcm) for x in q] for q in coords]
    h, t = integer_row_basis(int_rows)
    out = []
    for j in range(len(h)):
        arg = FieldElem.zero(order)
        val = FieldElem.one(order)
        for i, z in enumerate(t[j]):
            if z:
                arg = arg + coerce(z, order) * args[i]
                val = val * vals[i] ** z
        out.append((arg, val))
    return tuple(out), check


# -- realizing exponential points (the constructive reduction) ----------------


@dataclass(frozen=True)
class SolveResult:
    presentation: EFieldPresentation
    point_x: tuple
    point_y: tuple
    param_values: dict  # locus parameter -> FieldElem
    adjoined: tuple  # ((symbol, role), ...) in adjunction order
    reduction: ReductionResult


def solve(f: EFieldPresentation, v: ParametricVariety,
          auto_extend: bool = True) -> SolveResult:
    """Extend ``f`` so the variety acquires an exponential point.

    Reduces to additively free form, adjoins a fresh generic point for the
    reduced variety with freely chosen exponentials, and pulls back.  The
    returned point satisfies every defining relation of ``v`` and agrees
    with e_eval on the extended presentation.
    """
    order = f.cyclotomic_order
    if v.cyclotomic_order not in (1, order):
        raise ExponentialConflict(
            f"variety uses cyclotomic order {v.cyclotomic_order}, "
            f"presentation has {order}")
    rr = variety_reduce(v)
    if rr.vprime is not None:
        cert = additive_freeness(rr.vprime)
        if not cert.is_free:
            raise NotAdditivelyFree(cert.relation, cert.value)

    adjoined: list = []
    current = f
    param_values: dict = {}

    def _fresh(prefix: str, role: str) -> str:
        nonlocal current
        name = fresh_name(prefix, set(current.transcendentals) | set(v.base_params)
                          | set(v.locus_params))
        current = adjoin_transcendentals(current, [name])
        adjoined.append((name, role))
        return name

    # generic point for the reduced variety's X-side parameters
    xprime_params = []
    if rr.vprime is not None:
        for u in rr.vprime.locus_params:
            if any(u in x.symbols() for x in rr.vprime.X):
                xprime_params.append(u)
    for u in xprime_params:
        c = _fresh("_c", f"generic value for {u}")
        param_values[u] = current.elem(c)

    # exponential values for the reduced variety's coordinates
    new_pairs = []
    ec_values = []
    if rr.vprime is not None:
        for p in range(len(rr.vprime.X)):
            arg = rr.vprime.X[p].subs(param_values)
            yp = rr.vprime.Y[p]
            i_orig = rr.index_map[p]
            if rr.vprime.free_Y[p] and rr.N != 1 and not v.free_Y[i_orig]:
                # the original coordinate pins rho^N; only an exact rational
                # root keeps us inside the purely transcendental regime
                want = v.Y[i_orig].subs(param_values)
                val = _rational_nth_root(want, rr.N)
                if val is None:
                    raise MissingExponential(
                        f"coordinate {i_orig} needs an {rr.N}-th root of "
                        f"{want}", root_specs=[(want, rr.N)])
            elif rr.vprime.free_Y[p]:
                sym = next(iter(yp.symbols()))
                r = _fresh("_r", f"free exponential for {sym}")
                val = current.elem(r)
                param_values[sym] = val
            else:
                val = yp.subs(param_values)
                ev = e_eval(current, arg)
                if ev.is_value:
                    if ev.value != val:
                        raise ExponentialConflict(
                            f"E({arg}) is already {ev.value}, variety needs {val}")
                    ec_values.append(val)
                    continue
                if not ev.outside_span:
                    raise MissingExponential(
                        f"E({arg}) needs roots of existing values",
                        root_specs=list(ev.root_specs))
            new_pairs.append((arg, val))
            ec_values.append(val)
        current = extend_graph(current, new_pairs)

    # resolve the base offsets b_i, preferring constrained variety values
    prefix_cache: dict = {}

    def _prefix(i: int) -> FieldElem:
        if i not in prefix_cache:
            acc = FieldElem.one(order)
            for p in range(len(rr.index_map)):
                na = rr.A[i][p] * rr.N
                acc = acc * ec_values[p] ** int(na)
            prefix_cache[i] = acc
        return prefix_cache[i]

    def _resolve_b(i: int, b: FieldElem) -> FieldElem:
        nonlocal current
        ev = e_eval(current, b)
        required = None
        if not v.free_Y[i]:
            required = v.Y[i].subs(param_values) / _prefix(i)
        if ev.is_value:
            if required is not None and ev.value != required:
                raise ExponentialConflict(
                    f"coordinate {i}: E({b}) = {ev.value} conflicts with the "
                    f"variety constraint {required}")
            return ev.value
        if not ev.outside_span:
            raise MissingExponential(
                f"E({b}) needs roots of existing values",
                root_specs=list(ev.root_specs))
        if required is not None:
            current = extend_graph(current, [(b, required)])
            adjoined.append((f"E({b})", "pinned by variety constraint"))
            return required
        if not auto_extend:
            raise MissingExponential(f"E({b}) is undefined and auto-extension "
                                     "is disabled")
        g = _fresh("_g", f"fresh value for E({b})")
        gval = current.elem(g)
        current = extend_graph(current, [(b, gval)])
        return gval

    point_x, point_y = pullback(rr, [x.subs(param_values) for x in
                                     (rr.vprime.X if rr.vprime else ())],
                                ec_values, resolve_b=_resolve_b)

    # final consistency check against every constrained coordinate
    for i in range(v.n):
        if not v.free_Y[i]:
            want = v.Y[i].subs(param_values)
            if point_y[i] != want:
                raise ExponentialConflict(
                    f"coordinate {i} forces E = {want} but the homomorphism "
                    f"gives {point_y[i]}")
        else:
            sym = next(iter(v.Y[i].symbols()))
            param_values.setdefault(sym, point_y[i])
        ev = e_eval(current, point_x[i])
        assert ev.is_value and ev.value == point_y[i], \
            "point must agree with e_eval"

    return SolveResult(presentation=current, point_x=point_x, point_y=point_y,
                       param_values=param_values, adjoined=tuple(adjoined),
                       reduction=rr)


# -- hull extraction -----------------------------------------------------------


@dataclass(frozen=True)
class HullPresentation:
    generators: tuple
    closed_under_graph: bool


def hull(f: EFieldPresentation, elems) -> HullPresentation:
    """Close a generator list under detectable graph application.

    A combination sum(z_i arg_i) with integer z lands in the Q-span of the
    generators (and 1) exactly when the corresponding value product belongs
    to the hull; the detectable such z form a saturated lattice, recomputed
    until the span stops growing.
    """
    order = f.cyclotomic_order
    gens = []
    for e in elems:
        e = coerce(e, order)
        if not any(e == g for g in gens):
            gens.append(e)
    args = [a for a, _ in f.egraph]
    vals = [v for _, v in f.egraph]
    if not args:
        return HullPresentation(tuple(gens), True)
    one = FieldElem.one(order)
    for _ in range(len(args) + 1):
        combined = args + gens + [one]
        rel = kernel_basis(coordinate_matrix(combined))
        proj = [vec[:len(args)] for vec in rel]
        proj = [v for v in proj if any(v)]
        if not proj:
            break
        ortho = kernel_basis(proj)
        if ortho:
            lattice = integer_kernel_basis(ortho)
        else:
            # projections span all of Q^len(args)
            lattice = [[1 if i == j else 0 for j in range(len(args))]
                       for i in range(len(args))]
        grew = False
        for z in lattice:
            val = one
            for zi, v in zip(z, vals):
                if zi:
                    val = val * v ** zi
            if rational_span_solve(gens + [one], val) is None:
                gens.append(val)
                grew = True
        if not grew:
            break
    return HullPresentation(tuple(gens), True)


# -- generator families ---------------------------------------------------------


def minimal_ea_family(prefix, name: str = "minimal") -> EFieldPresentation:
    """Presentation with E(1) transcendental and E(E(1)^n) = q_n prescribed.

    ``prefix`` lists q_2..q_N (nonzero rationals); distinct prefixes give
    presentations that cannot be jointly embedded.
    """
    tau = FieldElem.from_symbol("tau")
    pairs = [(FieldElem.one(), tau)]
    for i, q in enumerate(prefix):
        q = Fraction(q)
        if q == 0:
            raise ZeroValue(f"prefix entry {i} is zero")
        pairs.append((tau ** (i + 2), coerce(q)))
    return EFieldPresentation(name=name, cyclotomic_order=1,
                              transcendentals=("tau",), egraph=tuple(pairs))


def graph_conflicts(f1: EFieldPresentation, f2: EFieldPresentation):
    """Pairs of (arg, val1, val2) where the two graphs disagree."""
    out = []
    for a1, v1 in f1.egraph:
        for a2, v2 in f2.egraph:
            if a1 == a2 and v1 != v2:
                out.append((a1, v1, v2))
    return out


# -- diagnostics -----------------------------------------------------------------


def check_presentation(f: EFieldPresentation, spot_checks: int = 10,
                       seed: int = 0) -> dict:
    """Validate the invariants and spot-check the homomorphism law."""
    violations = []
    for i, (a, v) in enumerate(f.egraph):
        if v.is_zero():
            violations.append({"kind": "zero_value", "index": i})
        if a.is_zero():
            violations.append({"kind": "zero_argument", "index": i})
    args = [a for a, _ in f.egraph if not a.is_zero()]
    if args:
        rel = integer_kernel_basis(coordinate_matrix(args))
        if rel:
            violations.append({"kind": "dependent_arguments",
                               "certificate": rel[0]})
    checks = 0
    if not violations and f.egraph:
        rng = random.Random(seed)
        k = len(f.egraph)
        for _ in range(spot_checks):
            z = [rng.randint(-3, 3) for _ in range(k)]
            a = FieldElem.zero(f.cyclotomic_order)
            expected = FieldElem.one(f.cyclotomic_order)
            for zi, (arg, val) in zip(z, f.egraph):
                if zi:
                    a = a + coerce(zi, f.cyclotomic_order) * arg
                    expected = expected * val ** zi
            ev = e_eval(f, a)
            if not ev.is_value or ev.value != expected:
                violations.append({"kind": "homomorphism_failure",
                                   "coefficients": z})
            checks += 1
    return {"ok": not violations, "violations": violations,
            "spot_checks": checks}


# -- evaluating exponential terms at a point --------------------------------------


def eval_term(f: EFieldPresentation, term: ETerm, assignment: dict) -> FieldElem:
    """Evaluate an exponential term; E-subterms go through e_eval.

    Raises MissingExponential when the graph does not determine a value.
    """
    order = f.cyclotomic_order
    if isinstance(term, exprlang.IntLit):
        return FieldElem.from_int(term.value, order)
    if isinstance(term, exprlang.RatLit):
        return coerce(term.value, order)
    if isinstance(term, exprlang.Var):
        if term.name in assignment:
            return coerce(assignment[term.name], order)
        return FieldElem.from_symbol(term.name, order)
    if isinstance(term, exprlang.Add):
        return eval_term(f, term.left, assignment) + eval_term(f, term.right, assignment)
    if isinstance(term, exprlang.Sub):
        return eval_term(f, term.left, assignment) - eval_term(f, term.right, assignment)
    if isinstance(term, exprlang.Mul):
        return eval_term(f, term.left, assignment) * eval_term(f, term.right, assignment)
    if isinstance(term, exprlang.Pow):
        return eval_term(f, term.base, assignment) ** term.exponent
    if isinstance(term, Exp):
        inner = eval_term(f, term.arg, assignment)
        ev = e_eval(f, inner)
        if not ev.is_value:
            raise MissingExponential(f"E({inner}) is not determined by the graph")
        return ev.value
    raise TypeError(f"not an ETerm: {term!r}")


def eval_system(f: EFieldPresentation, system, assignment: dict) -> bool:
    """Exact truth of every atom of an ESystem at the assignment."""
    for atom in system.atoms:
        lhs = eval_term(f, atom.lhs, assignment)
        rhs = eval_term(f, atom.rhs, assignment)
        holds = lhs == rhs
        if atom.rel == "neq":
            holds = not holds
        if not holds:
            return False
    return True
