"""Parametric subvarieties of G_a^n x G_m^n and the additive-freeness pipeline.

A variety is presented by a generic point: n additive coordinates X_i and n
multiplicative coordinates Y_i, rational functions of the ambient base
transcendentals and fresh locus parameters.  Additive freeness asks for no
integer relation sum(m_i X_i) = a with a over the base; since an element is
base-valued exactly when all its locus-parameter derivatives vanish, the
decision is a rational linear-algebra problem, exact and complete here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import Inconsistent, UnsupportedShape, MissingExponential
from .exprlang import FlatSystem, fresh_name
from .fieldelem import FieldElem, coerce, eliminate_symbols
from .linalg import (coordinate_matrix, integer_kernel_basis, kernel_basis,
                     qlin_solve)
from .mpoly import MPoly, ZETA


@dataclass(frozen=True)
class ParametricVariety:
    base_params: tuple
    locus_params: tuple
    X: tuple  # FieldElem
    Y: tuple  # FieldElem, each nonzero
    free_Y: tuple  # bool per coordinate
    cyclotomic_order: int = 1

    def __post_init__(self):
        n = len(self.X)
        if n < 1:
            raise UnsupportedShape("variety needs at least one coordinate")
        if len(self.Y) != n or len(self.free_Y) != n:
            raise UnsupportedShape("X, Y, free_Y must have equal length")
        if set(self.base_params) & set(self.locus_params):
            raise UnsupportedShape("locus parameters must be fresh")
        declared = set(self.base_params) | set(self.locus_params)
        for e in list(self.X) + list(self.Y):
            extra = e.symbols() - declared
            if extra:
                raise UnsupportedShape(f"undeclared symbols {sorted(extra)}")
        for i, y in enumerate(self.Y):
            if y.is_zero():
                raise UnsupportedShape(f"Y[{i}] is zero")
            if self.free_Y[i]:
                others = set()
                for j, x in enumerate(self.X):
                    others |= x.symbols()
                for j, yy in enumerate(self.Y):
                    if j != i:
                        others |= yy.symbols()
                sym = _single_param(y, self.locus_params)
                if sym is None or sym in others:
                    raise UnsupportedShape(
                        f"free Y[{i}] must be a dedicated locus parameter")

    @property
    def n(self) -> int:
        return len(self.X)


def _single_param(e: FieldElem, params) -> str | None:
    syms = e.symbols()
    if len(syms) != 1:
        return None
    sym = next(iter(syms))
    if sym not in params:
        return None
    return sym if e == FieldElem.from_symbol(sym, e.order) else None


@dataclass(frozen=True)
class FreenessCertificate:
    verdict: str  # "free" | "not_free"
    relation: tuple | None = None  # integer vector
    value: FieldElem | None = None  # the base element a

    @property
    def is_free(self) -> bool:
        return self.verdict == "free"


@dataclass(frozen=True)
class ReductionResult:
    variety: ParametricVariety
    vprime: ParametricVariety | None  # None when every X is base-valued
    A: tuple  # n rows of k Fractions
    b: tuple  # n FieldElems over the base
    N: int
    index_map: tuple  # selected coordinate indices
    carried_Y: bool  # True when N == 1 and Y was carried over


# -- the derivative criterion -------------------------------------------------


def _derivative_rows(elems, params):
    """Stacked Q-rows whose kernel is {m : sum m_i elems_i is base-valued}."""
    rows = []
    for u in params:
        derivs = [e.derivative(u) for e in elems]
        rows.extend(coordinate_matrix(derivs))
    return rows


def additive_freeness(v: ParametricVariety) -> FreenessCertificate:
    """Decide whether the variety is additively free.

    Not-free certificates carry an integer relation and the base value, and
    re-verify by the identity sum(m_i X_i) - a == 0.
    """
    rows = _derivative_rows(list(v.X), v.locus_params)
    kernel = integer_kernel_basis(rows) if rows else integer_kernel_basis(
        [[Fraction(0)] * v.n])
    if not kernel:
        return FreenessCertificate("free")
    m = kernel[0]
    total = FieldElem.zero(v.cyclotomic_order)
    for mi, x in zip(m, v.X):
        total = total + coerce(mi, v.cyclotomic_order) * x
    a = eliminate_symbols(total, v.locus_params)
    assert (total - a).is_zero(), "certificate must re-verify"
    return FreenessCertificate("not_free", relation=tuple(m), value=a)


def freeness_oracle(v: ParametricVariety, bound: int) -> FreenessCertificate:
    """Brute-force check over all integer vectors with |m_i| <= bound.

    Independent of the kernel computation: enumerates vectors and tests the
    locus-parameter derivatives of sum(m_i X_i) directly.
    """
    from math import gcd
    rows = []
    for u in v.locus_params:
        rows.extend(coordinate_matrix([x.derivative(u) for x in v.X]))
    int_rows = []
    for row in rows:
        lcm = 1
        for q in row:
            lcm = lcm * q.denominator // gcd(lcm, q.denominator)
        int_rows.append([int(q * lcm) for q in row])
    n = v.n
    vec = [-bound] * n

    def is_relation(m) -> bool:
        for row in int_rows:
            if sum(mi * c for mi, c in zip(m, row)):
                return False
        return True

    while True:
        if any(vec) and is_relation(vec):
            m = list(vec)
            total = FieldElem.zero(v.cyclotomic_order)
            for mi, x in zip(m, v.X):
                total = total + coerce(mi, v.cyclotomic_order) * x
            a = eliminate_symbols(total, v.locus_params)
            return FreenessCertificate("not_free", relation=tuple(m), value=a)
        i = n - 1
        while i >= 0 and vec[i] == bound:
            vec[i] = -bound
            i -= 1
        if i < 0:
            return FreenessCertificate("free")
        vec[i] += 1


# -- reduction to additively free form ----------------------------------------


def reduce(v: ParametricVariety) -> ReductionResult:
    """Select a maximal base-independent coordinate subset and factor X
    through it: X = A * X_selected + b with N = lcm of A's denominators."""
    order = v.cyclotomic_order
    selected: list[int] = []
    sel_rows: list = []  # derivative-coordinate columns for selected X
    a_rows: list = []
    b_vals: list = []

    all_rows = {}  # per coordinate: its stacked derivative coordinates

    # build one consistent monomial indexing for every derivative at once
    per_param_rows = {}
    for u in v.locus_params:
        per_param_rows[u] = coordinate_matrix([x.derivative(u) for x in v.X])

    def column(i):
        col = []
        for u in v.locus_params:
            for row in per_param_rows[u]:
                col.append(row[i])
        return col

    cols = [column(i) for i in range(v.n)]
    height = len(cols[0]) if cols else 0

    for i in range(v.n):
        if not selected:
            sol = None if any(cols[i]) else []
        else:
            rows = [[cols[j][r] for j in selected] for r in range(height)]
            rhs = [cols[i][r] for r in range(height)]
            sol = qlin_solve(rows, rhs)
        if sol is None:
            selected.append(i)
            a_rows.append(None)  # fixed up below
            b_vals.append(FieldElem.zero(order))
        else:
            a_rows.append(list(sol))
            combo = FieldElem.zero(order)
            for q, j in zip(sol, selected):
                combo = combo + coerce(q, order) * v.X[j]
            b_vals.append(eliminate_symbols(v.X[i] - combo, v.locus_params))

    k = len(selected)
    A = []
    for i in range(v.n):
        if a_rows[i] is None:
            p = selected.index(i)
            A.append(tuple(Fraction(1) if j == p else Fraction(0)
                           for j in range(k)))
        else:
            row = a_rows[i] + [Fraction(0)] * (k - len(a_rows[i]))
            A.append(tuple(row))
    N = 1
    for row in A:
        for q in row:
            N = N * q.denominator // __import__("math").gcd(N, q.denominator)

    used = set(v.base_params) | set(v.locus_params)
    xprime = tuple(v.X[i] / N for i in selected)
    carried = N == 1
    yprime = []
    flags = []
    fresh_params = []
    for p, i in enumerate(selected):
        if carried:
            yprime.append(v.Y[i])
            flags.append(v.free_Y[i])
        else:
            q = fresh_name("_q", used)
            used.add(q)
            fresh_params.append(q)
            yprime.append(FieldElem.from_symbol(q, order))
            flags.append(True)
    if k == 0:
        vprime = None
    else:
        locus = [u for u in v.locus_params
                 if any(u in x.symbols() for x in xprime)
                 or any(u in y.symbols() for y in yprime)]
        locus += [q for q in fresh_params if q not in locus]
        vprime = ParametricVariety(
            base_params=v.base_params,
            locus_params=tuple(locus),
            X=xprime,
            Y=tuple(yprime),
            free_Y=tuple(flags),
            cyclotomic_order=order,
        )
    return ReductionResult(variety=v, vprime=vprime, A=tuple(A),
                           b=tuple(b_vals), N=N, index_map=tuple(selected),
                           carried_Y=carried)


def pullback(rr: ReductionResult, c_values, ec_values, resolve_b=None):
    """Map a point of the reduced variety back onto the original one.

    d = A*(N*c) + b componentwise; Ed_i = prod_j ec_j^(N*A)_{ij} * E(b_i).
    E(b_i) for nonzero b_i comes from ``resolve_b(i, b_i)``; without a
    resolver a nonzero b_i raises MissingExponential.
    """
    k = len(rr.index_map)
    if len(c_values) != k or len(ec_values) != k:
        raise UnsupportedShape("point arity does not match the reduction")
    order = rr.variety.cyclotomic_order
    for e in ec_values:
        if coerce(e, order).is_zero():
            raise UnsupportedShape("multiplicative coordinates must be nonzero")
    d = []
    ed = []
    for i in range(rr.variety.n):
        di = rr.b[i]
        edi = FieldElem.one(order)
        for p in range(k):
            na = rr.A[i][p] * rr.N
            assert na.denominator == 1
            di = di + coerce(rr.A[i][p] * rr.N, order) * coerce(c_values[p], order)
            edi = edi * (coerce(ec_values[p], order) ** int(na))
        if not rr.b[i].is_zero():
            if resolve_b is None:
                raise MissingExponential(
                    f"E({rr.b[i]}) is required for coordinate {i}")
            edi = edi * coerce(resolve_b(i, rr.b[i]), order)
        d.append(di)
        ed.append(edi)
    return tuple(d), tuple(ed)


# -- building varieties from flat systems --------------------------------------


@dataclass(frozen=True)
class FromFlatResult:
    variety: ParametricVariety
    assignments: dict  # every unknown -> FieldElem over base + locus params
    coordinates: tuple  # unknown names, in variety coordinate order


def from_flat(fs: FlatSystem, base_params, cyclotomic_order: int = 1,
              extra_coefficients=()) -> FromFlatResult:
    """Present a flat system's solution set as a parametric variety.

    Supported fragment: polynomials split into (a) equations affine-linear in
    the unknowns with no paired y-variables and (b) equations pinning one
    y-variable to a base element.  The variety's coordinates are the paired
    variables; unknowns never under E are solved in the affine part only
    (their freedom becomes locus parameters), so the exponential map is
    never forced at points the system does not exponentiate.
    """
    order = cyclotomic_order
    base = tuple(base_params)
    coeff_syms = set(base) | set(extra_coefficients) | {ZETA}
    paired = list(fs.xvars)
    if not paired:
        raise UnsupportedShape("system has no exponential part")
    yset = set(fs.yvars)
    unknowns = list(paired)
    for p in fs.polys:
        for s in sorted(p.symbols()):
            if s not in coeff_syms and s not in yset and s not in unknowns:
                unknowns.append(s)

    def affine_split(p: MPoly):
        """p as sum(coeff_u * u) + const, coefficients over the base."""
        cmap: dict = {}
        const = MPoly.zero(order)
        for mono, c in p.terms.items():
            d = dict(mono)
            touched = [s for s in d if s in unknowns]
            deg = sum(d[s] for s in touched)
            if deg == 0:
                const = const + MPoly({mono: c}, order)
            elif deg == 1:
                s = touched[0]
                rest = tuple(sorted((t, e) for t, e in mono if t != s))
                cmap.setdefault(s, MPoly.zero(order))
                cmap[s] = cmap[s] + MPoly({rest: c}, order)
            else:
                raise UnsupportedShape(f"not affine in the unknowns: {p}")
        return ({s: FieldElem(q) for s, q in cmap.items() if not q.is_zero()},
                FieldElem(const))

    affine = []  # (coeff map unknown -> FieldElem, const FieldElem)
    y_polys = []  # (yvar, coeff of y over base, affine rest)
    for p in fs.polys:
        psyms = p.symbols()
        ys = sorted(psyms & yset)
        if ys:
            if len(ys) > 1:
                raise UnsupportedShape(
                    f"equation couples several exponential values: {p}")
            y = ys[0]
            if p.degree_in(y) > 1:
                raise UnsupportedShape(f"nonlinear in exponential value: {p}")
            coeff = MPoly.zero(order)
            rest = MPoly.zero(order)
            for mono, c in p.terms.items():
                if y in dict(mono):
                    coeff = coeff + MPoly({tuple(sorted(
                        (s, e) for s, e in mono if s != y)): c}, order)
                else:
                    rest = rest + MPoly({mono: c}, order)
            if coeff.symbols() & set(unknowns):
                raise UnsupportedShape(
                    f"exponential value with unknown coefficient: {p}")
            # a*y + r(unknowns) = 0: the value is pinned after the affine
            # solve (this is how alias equations x_new = y_old come in)
            y_polys.append((y, FieldElem(coeff), affine_split(rest)))
            continue
        affine.append(affine_split(p))

    # Gaussian elimination over the base function field
    rows = [[cm.get(u, FieldElem.zero(order)) for u in unknowns] + [-const]
            for cm, const in affine]
    pivots = []
    r = 0
    for c in range(len(unknowns)):
        pivot = next((i for i in range(r, len(rows))
                      if not rows[i][c].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = FieldElem.one(order) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if not rows[i][-1].is_zero():
            raise Inconsistent("affine part of the system has no solution")

    used = set(base) | set(unknowns) | yset | set(extra_coefficients)
    free_cols = [c for c in range(len(unknowns)) if c not in pivots]
    params = {}
    for c in free_cols:
        p = fresh_name("_p", used)
        used.add(p)
        params[c] = p
    assignment: dict = {}
    for c in free_cols:
        assignment[unknowns[c]] = FieldElem.from_symbol(params[c], order)
    for rr_, c in reversed(list(enumerate(pivots))):
        val = rows[rr_][-1]
        for fc in free_cols:
            if not rows[rr_][fc].is_zero():
                val = val - rows[rr_][fc] * assignment[unknowns[fc]]
        assignment[unknowns[c]] = val

    y_constraints: dict = {}
    for y, coeff, (cmap, const) in y_polys:
        rest = const
        for u, cu in cmap.items():
            rest = rest + cu * assignment[u]
        val = -rest / coeff
        if val.is_zero():
            raise Inconsistent(
                f"exponential coordinate {y} forced to zero")
        if y in y_constraints and y_constraints[y] != val:
            raise Inconsistent(f"conflicting constraints on {y}")
        y_constraints[y] = val

    locus = [params[c] for c in free_cols]
    X = []
    Y = []
    flags = []
    for i, x in enumerate(paired):
        X.append(assignment[x])
        if fs.yvars[i] in y_constraints:
            Y.append(y_constraints[fs.yvars[i]])
            flags.append(False)
        else:
            q = fresh_name("_q", used)
            used.add(q)
            locus.append(q)
            Y.append(FieldElem.from_symbol(q, order))
            flags.append(True)
    v = ParametricVariety(
        base_params=base,
        locus_params=tuple(locus),
        X=tuple(X),
        Y=tuple(Y),
        free_Y=tuple(flags),
        cyclotomic_order=order,
    )
    return FromFlatResult(variety=v, assignments=assignment,
                          coordinates=tuple(paired))
