"""Named verification checks grouped into suites.

Each check yields a :class:`CheckResult`; suites never raise on a failed
identity, they record it. Usage errors (an order a suite cannot handle)
raise :class:`SuiteUsageError`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import lagrangian2 as lg
from .dynamics import (
    ChainIdentityViolation,
    build_gamma,
    chain_polynomials,
    check_darboux,
    darboux_multiplier,
    divergence,
    multiplier_term,
    solve_multiplier_exponents,
    time_dependent_darboux,
    verify_multiplier,
)
from .hierarchy import OperatorKind
from .integrals import (
    RationalSurface,
    exact_rank,
    independence_rank,
    j_integrals,
    random_samples,
    t_sequence,
)
from .listings import compare, known_discrepancy
from .polycore import JetPolynomial, render
from .powerexpr import IndeterminateZeroTest, PowerExpression

PASS = "pass"
FAIL = "fail"
DISCREPANCY = "documented-discrepancy"
SKIPPED = "skipped"

SUITES = ("darboux", "multipliers", "integrals", "lagrangian")

# float SVD rank is a reliable witness up to this order at the integer
# sample box; above it only the exact rank is checked
NUMERIC_RANK_MAX = 5

# default sweep depths when no single order is requested
DEFAULT_DEPTH = {"darboux": 8, "multipliers": 8, "integrals": 6, "lagrangian": 2}


class SuiteUsageError(ValueError):
    pass


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    status: str
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def _guarded(suite: str, name: str, fn) -> CheckResult:
    """Run ``fn() -> (ok, detail)``; a broken construction identity is a failure."""
    try:
        ok, detail = fn()
    except (ChainIdentityViolation, IndeterminateZeroTest) as exc:
        return CheckResult(suite, name, FAIL, {"error": f"{type(exc).__name__}: {exc}"})
    return CheckResult(suite, name, _status(ok), detail)


def _listing_check(kind: OperatorKind, m: int) -> CheckResult | None:
    try:
        cmp = compare(kind, m)
    except KeyError:
        return None
    detail = cmp.to_json()
    if cmp.matches:
        return CheckResult("darboux", f"listing[{m}]", PASS, detail)
    if kind is OperatorKind.ABEL and m == 4 and cmp.difference == known_discrepancy():
        detail["note"] = "printed line has 7*x*v where 7*x*a is correct; the printed chain computation carries 14*k^2*x^4*a"
        return CheckResult("darboux", f"listing[{m}]", DISCREPANCY, detail)
    return CheckResult("darboux", f"listing[{m}]", FAIL, detail)


def darboux_suite(kind: OperatorKind, n: int) -> list:
    s = kind.power
    out = []
    listing = _listing_check(kind, n)
    if listing is not None:
        out.append(listing)

    def chain():
        polys = chain_polynomials(kind, n)
        return True, {"polynomials": [render(p) for p in polys]}

    out.append(_guarded("darboux", f"chain[{n}]", chain))

    def div():
        d = divergence(build_gamma(kind, n))
        expected = multiplier_term(kind) * (-(n + s))
        return d == expected, {"divergence": render(d), "expected": render(expected)}

    out.append(_guarded("darboux", f"divergence[{n}]", div))

    def top_pair():
        gamma = build_gamma(kind, n)
        pair = check_darboux(gamma, chain_polynomials(kind, n)[-1])
        expected = -multiplier_term(kind)
        return pair.cofactor == expected, {"cofactor": render(pair.cofactor)}

    out.append(_guarded("darboux", f"top_cofactor[{n}]", top_pair))

    def family():
        ds = time_dependent_darboux(n, kind)
        return True, {"count": len(ds)}

    out.append(_guarded("darboux", f"time_dependent_family[{n}]", family))

    if kind is OperatorKind.ABEL and n == 2:

        def second_pair():
            pair = check_darboux(build_gamma(kind, 2), lg.Q1)
            expected = multiplier_term(kind) * -3
            return pair.cofactor == expected, {"cofactor": render(pair.cofactor)}

        out.append(_guarded("darboux", "cofactor[3v+kx^3]", second_pair))
    return out


def _exponent_check(name: str, kind: OperatorKind, n: int, d: JetPolynomial, expected) -> CheckResult:
    def run():
        gamma = build_gamma(kind, n)
        pair = check_darboux(gamma, d)
        (nu,) = solve_multiplier_exponents(gamma, [pair])
        verified = verify_multiplier(gamma, darboux_multiplier([pair], [nu]))
        return nu == expected and verified, {"exponent": str(nu), "expected": str(expected), "verified": verified}

    return _guarded("multipliers", name, run)


def multipliers_suite(kind: OperatorKind, n: int) -> list:
    top = chain_polynomials(kind, n)[-1]
    out = [_exponent_check(f"mu[{n}]", kind, n, top, Fraction(-(n + kind.power)))]
    if kind is OperatorKind.ABEL and n == 2:
        out.append(_exponent_check("nu[v+kx^3]", kind, 2, lg.P1, Fraction(-4)))
        out.append(_exponent_check("nu[3v+kx^3]", kind, 2, lg.Q1, Fraction(-4, 3)))
    return out


def integrals_suite(kind: OperatorKind, n: int, seed: int = 0, samples: int = 20) -> list:
    if n < 2:
        raise SuiteUsageError("time-polynomial integrals need order >= 2")
    out = []

    def sequence():
        seq = t_sequence(n, kind)
        return True, {"T": [s.render() for s in seq]}

    out.append(_guarded("integrals", f"t_sequence[{n}]", sequence))

    def integrals():
        js = j_integrals(n, kind)
        lead = [str(j.leading_coefficient()) for j in js]
        ok = all(j.t_degree == j.order for j in js)
        return ok, {"leading_coefficients": lead}

    out.append(_guarded("integrals", f"j_integrals[{n}]", integrals))

    def consistency():
        ds = time_dependent_darboux(n, kind)
        js = j_integrals(n, kind)
        ok = all(j.as_surface().same_as(RationalSurface(ds[r + 1], ds[0])) for r, j in enumerate(js))
        return ok, {"relation": "J_r = D_{r+1} / D_1"}

    out.append(_guarded("integrals", f"darboux_quotients[{n}]", consistency))

    points = random_samples(n, samples, seed, kind)

    def rank():
        ranks = [independence_rank(n, point, t, kind) for point, t in points]
        return all(r == n - 1 for r in ranks), {"ranks": ranks, "expected": n - 1, "seed": seed}

    def rank_exact():
        ranks = [exact_rank(n, point, t, kind) for point, t in points]
        return all(r == n - 1 for r in ranks), {"ranks": ranks, "expected": n - 1, "seed": seed}

    if n <= NUMERIC_RANK_MAX:
        out.append(_guarded("integrals", f"independence_rank[{n}]", rank))
    out.append(_guarded("integrals", f"exact_rank[{n}]", rank_exact))
    return out


def _energy_check():
    e = lg.abel_energy()
    expected = PowerExpression.power(lg.P1, -3, -lg.Q1)
    closed = lg._is_zero(e - expected, "energy closed form")
    gamma = build_gamma(OperatorKind.ABEL, 2)
    conserved = lg._is_zero(gamma(e), "Gamma(E)")
    # D1 = v + k x^3 and D2 = 3v + k x^3, cofactors -k x^2 and -3 k x^2
    d1, d2 = check_darboux(gamma, lg.P1), check_darboux(gamma, lg.Q1)
    darboux = d2.cofactor == d1.cofactor * 3 and lg._is_zero(
        e + PowerExpression.power(d1.polynomial, -3, d2.polynomial), "E = -D2/D1^3"
    )
    return closed and conserved and darboux, {
        "energy": e.render("named"),
        "closed_form": closed,
        "conserved": conserved,
        "darboux_quotient": darboux,
    }


def lagrangian_suite(kind: OperatorKind, n: int) -> list:
    if kind is not OperatorKind.ABEL or n != 2:
        raise SuiteUsageError("the lagrangian suite needs --family abel --order 2")
    x = lg.x

    def el(lagrangian):
        def run():
            residual = lg.on_shell_reduce(lg.euler_lagrange_residual(lagrangian))
            return lg._is_zero(residual, "on-shell EL"), {"lagrangian": lagrangian.render("named")}

        return run

    def helm(g):
        return lambda: (lg.helmholtz_check(g), {"g": g.render("named")})

    def family():
        cases = [(x**3, 2), (x**2, 1)]
        results = {f"U={render(u, 'named')},m={m}": lg.family_equation_check(u, m) for u, m in cases}
        return all(results.values()), results

    def symmetry():
        report = lg.noncartan_symmetry_check()
        ok = report.commutes and report.energy_action == -1 and report.hamiltonian_rel and report.symplectic_sym
        return ok, {
            "commutes": report.commutes,
            "energy_action": str(report.energy_action),
            "hamiltonian_rel": report.hamiltonian_rel,
            "symplectic_sym": report.symplectic_sym,
        }

    checks = [
        ("euler_lagrange[L_A]", el(lg.abel_lagrangian())),
        ("euler_lagrange[L_alt]", el(lg.alternative_lagrangian())),
        ("helmholtz[(v+kx^3)^-4]", helm(PowerExpression.power(lg.P1, -4))),
        ("helmholtz[(3v+kx^3)^-4/3]", helm(PowerExpression.power(lg.Q1, Fraction(-4, 3)))),
        ("energy", _energy_check),
        ("family_equation", family),
        ("symplectic_relation", lambda: (lg.symplectic_relation_check(), {})),
        ("noncartan_symmetry", symmetry),
    ]
    return [_guarded("lagrangian", name, fn) for name, fn in checks]


def run_suite(
    suite: str,
    kind: "OperatorKind | str",
    order: int | None = None,
    max_order: int | None = None,
    seed: int = 0,
) -> list:
    """Run one suite (or ``"all"``) at ``order``, or over a sweep of orders
    up to ``max_order`` when no order is given."""
    kind = OperatorKind.parse(kind)
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in SUITES:
            raise SuiteUsageError(f"unknown suite {name!r}")
    results = []
    for name in names:
        fn = {
            "darboux": darboux_suite,
            "multipliers": multipliers_suite,
            "integrals": lambda k, n: integrals_suite(k, n, seed),
            "lagrangian": lagrangian_suite,
        }[name]
        if order is not None:
            orders = [order]
        elif name == "lagrangian":
            orders = [2]
        else:
            lo = 2 if name == "integrals" else 1
            orders = list(range(lo, (max_order or DEFAULT_DEPTH[name]) + 1))
        for n in orders:
            try:
                results.extend(fn(kind, n))
            except SuiteUsageError as exc:
                if suite != "all":
                    raise
                results.append(CheckResult(name, f"{name}[{n}]", SKIPPED, {"reason": str(exc)}))
    return results


def outcome(results: list) -> str:
    return FAIL if any(r.status == FAIL for r in results) else PASS
