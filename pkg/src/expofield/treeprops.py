"""Finite witnesses for the combinatorial dividing lines.

The built-in witness pair is phi(x, yz) := E(y*x) = z with
psi(y1z1, y2z2) := y1 = y2 & z1 != z2.  Arrays built on Q-linearly
independent multipliers b_i and distinct nonzero constants c_j realize
every branch through an additively free variety; candidate trees for the
strong order property are falsified by the same finite checks.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product

from .errors import (CyclotomicOrderMismatch, DomainError, NotTranscendental,
                     UnsupportedShape, ZeroValue)
from .efield import (EFieldPresentation, SolveResult, adjoin_transcendentals,
                     e_eval, eval_system, extend_graph, presentation, solve)
from .exprlang import (Atom, ESystem, Exp, Mul, Var, fresh_name, parse,
                       print_system, flatten)
from .fieldelem import FieldElem, coerce, cyclotomic_root
from .linalg import coordinate_matrix, integer_kernel_basis
from .variety import (ParametricVariety, additive_freeness, from_flat)

PHI_TEXT = "E(y*x) = z"
PSI_TEXT = "y1 = y2 & z1 != z2"


@dataclass(frozen=True)
class TP2Witness:
    n: int
    J: int
    base: EFieldPresentation
    b: tuple  # n multipliers, Q-linearly independent together with 1
    c: tuple  # J distinct nonzero values
    phi: ESystem
    psi: ESystem

    def param(self, i: int, j: int) -> tuple:
        """The array entry a[i][j] = (b_i, c_j); indices start at 1."""
        return (self.b[i - 1], self.c[j - 1])


@dataclass(frozen=True)
class SOP1Candidate:
    depth: int
    tree: dict  # binary string (len < depth) -> (y, z) parameter pair
    base: EFieldPresentation
    phi: ESystem
    psi: ESystem

    def __post_init__(self):
        for level in range(self.depth):
            for bits in product("01", repeat=level):
                node = "".join(bits)
                if node not in self.tree:
                    raise UnsupportedShape(f"tree is missing node {node!r}")


@dataclass(frozen=True)
class BranchResult:
    branch: tuple
    consistent: bool
    detail: str
    solution: SolveResult | None = None


@dataclass(frozen=True)
class VerifyReport:
    condition_i: tuple  # BranchResult per checked branch
    condition_ii: str  # "structural" | "unverified"
    condition_iii: tuple  # ((indices, verdict), ...)
    realizing_extension: EFieldPresentation | None = None

    @property
    def ok(self) -> bool:
        return (all(r.consistent for r in self.condition_i)
                and all(v for _, v in self.condition_iii))


def _is_builtin_pair(phi: ESystem, psi: ESystem) -> bool:
    return (print_system(phi) == print_system(parse(PHI_TEXT))
            and print_system(psi) == print_system(parse(PSI_TEXT)))


def _psi_holds(psi: ESystem, f: EFieldPresentation, left, right) -> bool:
    y1, z1 = left
    y2, z2 = right
    return eval_system(f, psi, {"y1": y1, "z1": z1, "y2": y2, "z2": z2})


def _branch_system(params) -> ESystem:
    """Conjunction of phi(x, y_i z_i) instances over one shared x."""
    atoms = []
    for y, z in params:
        ysyms = sorted(y.symbols())
        if y.is_rational():
            ynode = _rat_node(y.as_fraction())
        elif len(ysyms) == 1 and y == FieldElem.from_symbol(next(iter(ysyms)), y.order):
            ynode = Var(name=next(iter(ysyms)))
        else:
            raise UnsupportedShape(
                "witness multipliers must be symbols or rationals")
        if not z.is_rational():
            zsyms = sorted(z.symbols())
            if len(zsyms) == 1 and z == FieldElem.from_symbol(zsyms[0], z.order):
                znode = Var(name=zsyms[0])
            else:
                raise UnsupportedShape(
                    "witness values must be symbols or rationals")
        else:
            znode = _rat_node(z.as_fraction())
        atoms.append(Atom(Exp(arg=Mul(left=ynode, right=Var(name="x"))),
                          "eq", znode))
    return ESystem(tuple(atoms))


def _rat_node(q: Fraction):
    from .exprlang import IntLit, RatLit
    return IntLit(value=int(q)) if q.denominator == 1 else RatLit(value=q)


def check_branch(f: EFieldPresentation, params) -> BranchResult:
    """Condition (i) for one branch: realize the conjunction through the
    flat-system -> variety -> freeness -> solve pipeline."""
    system = _branch_system(params)
    fs = flatten(system)
    try:
        res = from_flat(fs, base_params=f.transcendentals,
                        cyclotomic_order=f.cyclotomic_order)
        cert = additive_freeness(res.variety)
        if not cert.is_free:
            return BranchResult(tuple(params), False,
                                f"variety not additively free: {cert.relation}")
        sol = solve(f, res.variety)
    except DomainError as exc:
        return BranchResult(tuple(params), False, str(exc))
    # confirm by evaluating the original system at the solved point
    assign = point_assignment(res, sol)
    if not eval_system(sol.presentation, system, assign):
        return BranchResult(tuple(params), False,
                            "solution does not satisfy the system")
    return BranchResult(tuple(params), True, "realized", solution=sol)


def point_assignment(res, sol) -> dict:
    """Values for every original unknown at a solved point (coordinates from
    the point itself, parameter-only unknowns through the affine solution)."""
    assign = dict(zip(res.coordinates, sol.point_x))
    for unk, expr in res.assignments.items():
        if unk not in assign:
            assign[unk] = expr.subs(sol.param_values)
    return assign


def branch_variety(w: "TP2Witness", sigma) -> ParametricVariety:
    """The array variety for one branch: a shared coordinate x_0 with free
    exponential and the rows x_i = b_i * x_0 pinned to column values."""
    u = FieldElem.from_symbol("_p1", w.base.cyclotomic_order)
    xs = [u] + [bi * u for bi in w.b]
    ys = [FieldElem.from_symbol("_q1", w.base.cyclotomic_order)]
    ys += [w.c[sigma[i] - 1] for i in range(w.n)]
    return ParametricVariety(
        base_params=tuple(sorted(set(w.base.transcendentals))),
        locus_params=("_p1", "_q1"),
        X=tuple(xs), Y=tuple(ys),
        free_Y=(True,) + (False,) * w.n,
        cyclotomic_order=w.base.cyclotomic_order,
    )


def tp2_witness(n: int, J: int, sigma, c_values=None):
    """Build the n x J array witness and verify it along one branch.

    sigma maps 1..n to 1..J; fresh transcendentals b_1..b_n are the
    multipliers and c_j = j by default.  The branch is realized on the
    variety {x_i = b_i x_0, y_i = c_sigma(i)} with y_0 free.
    """
    if n < 1 or J < 1:
        raise UnsupportedShape("need n, J >= 1")
    sigma = tuple(sigma)
    if len(sigma) != n or any(not 1 <= s <= J for s in sigma):
        raise UnsupportedShape("sigma must map 1..n into 1..J")
    base = presentation("A", transcendentals=tuple(f"b{i}" for i in range(1, n + 1)))
    b = tuple(base.elem(f"b{i}") for i in range(1, n + 1))
    if c_values is None:
        c = tuple(FieldElem.from_int(j) for j in range(1, J + 1))
    else:
        c = tuple(coerce(v) for v in c_values)
        if len(c) != J:
            raise UnsupportedShape("need J column values")
    for j, cj in enumerate(c):
        if cj.is_zero():
            raise ZeroValue(f"c_{j + 1} must be nonzero")
    for j in range(J):
        for k in range(j + 1, J):
            if c[j] == c[k]:
                raise UnsupportedShape("column values must be distinct")
    witness = TP2Witness(n=n, J=J, base=base, b=b, c=c,
                         phi=parse(PHI_TEXT), psi=parse(PSI_TEXT))
    rel = integer_kernel_basis(coordinate_matrix(
        [FieldElem.one()] + list(b)))
    assert not rel, "1, b_1..b_n must be Q-linearly independent"

    report = verify_finite_witness(witness, branches=[])
    w_var = branch_variety(witness, sigma)
    cert = additive_freeness(w_var)
    if not cert.is_free:
        branch = BranchResult(sigma, False,
                              f"variety not additively free: {cert.relation}")
    else:
        try:
            sol = solve(base, w_var)
        except DomainError as exc:
            branch = BranchResult(sigma, False, str(exc))
        else:
            x0 = sol.point_x[0]
            ok = all(e_eval(sol.presentation, b[i] * x0).value
                     == c[sigma[i] - 1] for i in range(n))
            branch = BranchResult(sigma, ok,
                                  "realized" if ok else "evaluation mismatch",
                                  solution=sol)
    report = VerifyReport(
        condition_i=(branch,),
        condition_ii=report.condition_ii,
        condition_iii=report.condition_iii,
        realizing_extension=branch.solution.presentation
        if branch.solution else None,
    )
    return witness, report


def verify_finite_witness(cand, branches=()) -> VerifyReport:
    """Check the three defining conditions at finite depth.

    (iii) runs exhaustively over the array or tree; (ii) is certified
    structurally for the built-in formula pair only; (i) runs the full
    realization pipeline per supplied branch.
    """
    if isinstance(cand, TP2Witness):
        return _verify_tp2(cand, branches)
    if isinstance(cand, SOP1Candidate):
        return _verify_sop1(cand, branches)
    raise UnsupportedShape(f"cannot verify {type(cand).__name__}")


def _verify_tp2(w: TP2Witness, branches) -> VerifyReport:
    cond_iii = []
    for i in range(1, w.n + 1):
        for j in range(1, w.J + 1):
            for k in range(1, w.J + 1):
                if j == k:
                    continue
                ok = _psi_holds(w.psi, w.base, w.param(i, j), w.param(i, k))
                cond_iii.append(((i, j, k), ok))
    cond_ii = "structural" if _is_builtin_pair(w.phi, w.psi) else "unverified"
    cond_i = []
    extension = None
    for sigma in branches:
        sigma = tuple(sigma)
        params = [w.param(i, sigma[i - 1]) for i in range(1, w.n + 1)]
        result = check_branch(w.base, params)
        cond_i.append(BranchResult(sigma, result.consistent, result.detail,
                                   result.solution))
        if result.solution is not None and extension is None:
            extension = result.solution.presentation
    return VerifyReport(condition_i=tuple(cond_i), condition_ii=cond_ii,
                        condition_iii=tuple(cond_iii),
                        realizing_extension=extension)


def _verify_sop1(cand: SOP1Candidate, branches) -> VerifyReport:
    cond_iii = []
    nodes = sorted(cand.tree, key=lambda s: (len(s), s))
    for eta in nodes:
        left = eta + "1"
        if left not in cand.tree:
            continue
        for nu in nodes:
            if nu.startswith(eta + "0"):
                ok = _psi_holds(cand.psi, cand.base, cand.tree[left],
                                cand.tree[nu])
                cond_iii.append(((left, nu), ok))
    cond_ii = "structural" if _is_builtin_pair(cand.phi, cand.psi) else "unverified"
    cond_i = []
    extension = None
    if branches == "all":
        branches = ["".join(bits) for bits in product("01", repeat=cand.depth)]
    for sigma in branches:
        sigma = "".join(str(x) for x in sigma)
        params = [cand.tree[sigma[:k]] for k in range(min(len(sigma), cand.depth))]
        if not params:
            cond_i.append(BranchResult((sigma,), True, "vacuous"))
            continue
        result = check_branch(cand.base, params)
        cond_i.append(BranchResult((sigma,), result.consistent, result.detail,
                                   result.solution))
        if result.solution is not None and extension is None:
            extension = result.solution.presentation
    return VerifyReport(condition_i=tuple(cond_i), condition_ii=cond_ii,
                        condition_iii=tuple(cond_iii),
                        realizing_extension=extension)


# -- definability witnesses -----------------------------------------------------


@dataclass(frozen=True)
class StabilizerWitness:
    mode: str  # "rational" | "transcendental"
    presentation: EFieldPresentation
    argument: FieldElem  # b (rational mode) or a (transcendental mode)
    checks: dict


def z_stabilizer_witness(f: EFieldPresentation, c, d=None):
    """Witness that a non-integer c fails to stabilize the kernel of E.

    Rational c = n/m (m > 1): adjoin b with E(b) a primitive m-th root of
    unity, so E(mb) = 1 while E(nb) != 1.  Non-constant c: realize the
    variety {c*x1 = x2, y1 = 1, y2 = d}, giving E(a) = 1, E(ca) = d != 1
    (d defaults to 2).  Integer c is refused: no witness exists.
    """
    c = coerce(c, f.cyclotomic_order)
    if c.is_rational():
        q = c.as_fraction()
        if q.denominator == 1:
            raise NotTranscendental(
                f"c = {q} is an integer: it stabilizes the kernel, no witness exists")
        n, m = q.numerator, q.denominator
        if f.cyclotomic_order % m != 0:
            raise CyclotomicOrderMismatch(
                f"need a cyclotomic order divisible by {m}, have "
                f"{f.cyclotomic_order}")
        zeta_m = cyclotomic_root(f.cyclotomic_order,
                                 f.cyclotomic_order // m)
        bname = fresh_name("_z", set(f.transcendentals))
        ext = extend_graph(adjoin_transcendentals(f, [bname]),
                           [(FieldElem.from_symbol(bname, f.cyclotomic_order),
                             zeta_m)])
        b = ext.elem(bname)
        em = e_eval(ext, coerce(m, ext.cyclotomic_order) * b).value
        en = e_eval(ext, coerce(n, ext.cyclotomic_order) * b).value
        checks = {"E(m*b) = 1": em.is_one(), "E(n*b) != 1": not en.is_one()}
        assert all(checks.values()), checks
        return StabilizerWitness("rational", ext, b, checks)
    return _transcendental_witness(f, c, d)


def _transcendental_witness(f, c, d=None):
    if c.is_constant():
        raise NotTranscendental(f"c = {c} is constant over Q(zeta)")
    order = f.cyclotomic_order
    if d is None:
        d = FieldElem.from_int(2, order)
    d = coerce(d, order)
    if d.is_zero() or d.is_one():
        raise UnsupportedShape("need d distinct from 0 and 1")
    used = set(f.transcendentals) | {s for s in c.symbols()} | {s for s in d.symbols()}
    p = fresh_name("_p", used)
    u = FieldElem.from_symbol(p, order)
    v = ParametricVariety(
        base_params=tuple(sorted(set(f.transcendentals)
                                 | c.symbols() | d.symbols())),
        locus_params=(p,),
        X=(u, c * u),
        Y=(FieldElem.one(order), d),
        free_Y=(False, False),
        cyclotomic_order=order,
    )
    sol = solve(f, v)
    a = sol.point_x[0]
    checks = {
        "E(a) = 1": e_eval(sol.presentation, a).value.is_one(),
        "E(c*a) = d": e_eval(sol.presentation, c * a).value == d,
        "d != 1": not d.is_one(),
    }
    assert all(checks.values()), checks
    return StabilizerWitness("transcendental", sol.presentation, a, checks)


# -- type-counting families -------------------------------------------------------


@dataclass(frozen=True)
class TypeFamily:
    presentations: tuple
    certificates: tuple  # ((i, j, n | None), ...) least disagreeing exponent


def type_family(f: EFieldPresentation, assignments) -> TypeFamily:
    """One presentation per assignment n -> value, all over a shared fresh
    transcendental x with E(x^n) = value; pairwise distinction certificates
    name the least exponent where two assignments disagree."""
    order = f.cyclotomic_order
    xname = fresh_name("_x", set(f.transcendentals))
    x = FieldElem.from_symbol(xname, order)
    outs = []
    norm = []
    for idx, asg in enumerate(assignments):
        asg = {int(n): coerce(v, order) for n, v in asg.items()}
        for n, v in asg.items():
            if n < 1:
                raise UnsupportedShape("exponents must be positive")
            if v.is_zero():
                raise ZeroValue(f"assignment {idx} maps {n} to zero")
        norm.append(asg)
        pairs = [(x ** n, asg[n]) for n in sorted(asg)]
        ext = extend_graph(adjoin_transcendentals(f, [xname]), pairs)
        outs.append(replace(ext, name=f"{f.name}_type{idx}"))
    certs = []
    for i in range(len(norm)):
        for j in range(i + 1, len(norm)):
            common = sorted(set(norm[i]) & set(norm[j]))
            least = next((n for n in common if norm[i][n] != norm[j][n]), None)
            certs.append((i, j, least))
    return TypeFamily(presentations=tuple(outs), certificates=tuple(certs))
