"""Identity catalog, grid runner and verification reports."""

from __future__ import annotations

import json
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import __version__
from . import closed_forms as cf
from . import fib_corollaries as fc
from .constants import ALPHA_F
from .exact import (
    ALPHA,
    BETA,
    FACTORIZATION_KINDS,
    SQRT5,
    GoldenValue,
    direct_sum,
    fib_sum_factorization,
    golden_power,
    lucas,
)
from .kernel import LN2, PI2_EXPR, LogPolyExpr, equivalent, lemma_derivative
from .oracles import lemma_fd
from .quadrature import F_integrand, LogIntegrand, OracleDidNotConverge, integrate

SUITES = ("core", "fib", "lemmas", "general", "all")
LEVELS = ("structural", "numerical", "quadrature")

QUAD_TOL = 1e-9
BASE_TOL = 1e-10
FIB_TOL = 1e-8
FD_TOL = 1e-5
CONSISTENCY_TOL = 1e-12
NEAR_ZERO = 1e-14
ABS_TOL_NEAR_ZERO = 1e-12
PROBES = (0.3, 1.0, ALPHA_F, 4.0)

# oracle accuracy target; well inside every identity tolerance
ORACLE_TOL = 1e-12

ERRATA = {
    "F(0,1,a) reference form": (
        "reference denominator 2a^2(a+1)^2 carries an extra factor a; "
        "the general closed form and quadrature both give 2a(a+1)^2"
    ),
}


@dataclass
class GridConfig:
    a_values: tuple = (0.25, 0.5, 1.0, 1.618034, 3.0, 10.0)
    m_max: int = 4
    k_max: int = 6
    r_values: tuple = (2, 4)
    fib_max: int = 3
    golden_exact_max: int = 6
    ln_power_k_max: int = 8
    binom_m_max: int = 5
    binom_k_max: int = 5
    dk_max: int = 12
    lemma_samples: int = 30
    seed: int = 4232

    @classmethod
    def from_mapping(cls, data: dict) -> "GridConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown grid keys: {sorted(unknown)}")
        kw = {}
        for k, v in data.items():
            kw[k] = tuple(v) if isinstance(v, list) else v
        return cls(**kw)


@dataclass
class IdentityCase:
    identity_id: str
    parameters: Dict[str, object]
    lhs_source: str  # "quadrature" | "exact-expression"
    rhs_source: str  # "exact-expression" | "golden-value"
    compute: Callable[[], "Outcome"] = field(repr=False, compare=False)
    tolerance: float = QUAD_TOL


@dataclass
class Outcome:
    lhs: float
    rhs: float
    level: str
    exact: Optional[bool] = None  # None: purely numerical comparison
    note: str = ""


@dataclass
class CaseRecord:
    identity_id: str
    parameters: Dict[str, object]
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    passed: bool
    equality_level: str
    tolerance: float
    note: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        for key in ("lhs", "rhs", "abs_err", "rel_err"):
            if not math.isfinite(d[key]):
                d[key] = None if math.isnan(d[key]) else ("inf" if d[key] > 0 else "-inf")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CaseRecord":
        d = dict(d)
        d["passed"] = d.pop("pass")
        for key in ("lhs", "rhs", "abs_err", "rel_err"):
            v = d[key]
            if v is None:
                d[key] = math.nan
            elif isinstance(v, str):
                d[key] = float(v)
        return cls(**d)


@dataclass
class VerificationReport:
    cases: List[CaseRecord]
    summary: dict
    timestamp: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.cases)

    def to_dict(self) -> dict:
        return {
            "summary": self.summary,
            "cases": [c.to_dict() for c in self.cases],
            "timestamp": self.timestamp,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        data = json.loads(text)
        return cls(
            [CaseRecord.from_dict(c) for c in data["cases"]],
            data["summary"],
            data.get("timestamp", {}),
        )


# --------------------------------------------------------------------------
# comparison helpers

def _quad(f: LogIntegrand) -> float:
    return integrate(f, ORACLE_TOL).value


def _exact_compare(e1: LogPolyExpr, e2: LogPolyExpr, probe: float = 1.7, note: str = "") -> Outcome:
    """Structural first, then partial-fraction normal form, then probes."""
    if e1 == e2:
        return Outcome(e1.evaluate(probe), e2.evaluate(probe), "structural", True, note)
    if equivalent(e1, e2):
        extra = "equal after partial-fraction normalisation"
        return Outcome(e1.evaluate(probe), e2.evaluate(probe), "structural", True,
                       f"{note}; {extra}" if note else extra)
    worst = None
    for a in PROBES:
        l, r = e1.evaluate(a), e2.evaluate(a)
        rel = abs(l - r) / abs(r) if r else abs(l - r)
        if worst is None or rel > worst[0]:
            worst = (rel, l, r)
    return Outcome(worst[1], worst[2], "numerical", None,
                   (note + "; " if note else "") + "representation differs; compared at probe points")


def _golden_compare(g1: GoldenValue, g2: GoldenValue, note: str = "") -> Outcome:
    return Outcome(g1.to_float(), g2.to_float(), "structural", g1 == g2, note)


# --------------------------------------------------------------------------
# catalog

def _case(cases, identity_id, params, lhs_src, rhs_src, compute, tol):
    cases.append(IdentityCase(identity_id, params, lhs_src, rhs_src, compute, tol))


def _quad_vs_expr(f: LogIntegrand, expr: LogPolyExpr, a: float) -> Callable[[], Outcome]:
    return lambda: Outcome(_quad(f), expr.evaluate(a), "quadrature")


def core_cases(grid: GridConfig) -> List[IdentityCase]:
    cases: List[IdentityCase] = []
    base = cf.base_integral()
    base_a = tuple(grid.a_values) + (round(ALPHA_F ** 2, 6),)
    for a in sorted(set(base_a)):
        _case(cases, "base", {"a": a}, "quadrature", "exact-expression",
              _quad_vs_expr(F_integrand(0, 0, a), base, a), BASE_TOL)

    for spec in fc.golden_base_specializations():
        _case(cases, "base.golden", {"integrand": spec.label}, "quadrature", "golden-value",
              (lambda s=spec: Outcome(_quad(s.integrand), s.rhs.to_float(), "quadrature")), QUAD_TOL)
        _case(cases, "base.golden.exact", {"integrand": spec.label}, "exact-expression", "golden-value",
              (lambda s=spec: _golden_compare(s.derived, s.rhs)), 0.0)

    builders = {"F0.closed": (0, cf.closed_F0), "F1.closed": (1, cf.closed_F1), "F2.closed": (2, cf.closed_F2)}
    for ident, (m, build) in builders.items():
        for k in range(grid.k_max + 1):
            expr = build(k)
            for a in grid.a_values:
                _case(cases, ident, {"m": m, "k": k, "a": a}, "quadrature", "exact-expression",
                      _quad_vs_expr(F_integrand(m, k, a), expr, a), QUAD_TOL)

    for (m, k), expr in sorted(cf.explicit_displays().items()):
        note = ""
        target = expr
        if (m, k) == (0, 1):
            target = corrected_F01_display()
            note = "erratum: " + ERRATA["F(0,1,a) reference form"]
        _case(cases, "F.explicit", {"m": m, "k": k}, "exact-expression", "exact-expression",
              (lambda t=target, mm=m, kk=k, n=note: _exact_compare(t, cf.closed_F_general(mm, kk), note=n)),
              0.0)

    for k in range(1, grid.ln_power_k_max + 1):
        expr = cf.ln_power_integral(k)
        for a in grid.a_values:
            f = LogIntegrand((1,), False, ((a, k + 1),))
            _case(cases, "ln_power", {"k": k, "a": a}, "quadrature", "exact-expression",
                  _quad_vs_expr(f, expr, a), QUAD_TOL)

    for m in range(2, grid.binom_m_max + 1):
        for k in range(1, grid.binom_k_max + 1):
            for a in grid.a_values:
                f, rhs = cf.binom_weighted_identity(m, k, a)
                _case(cases, "binomial_weighted", {"m": m, "k": k, "a": a}, "quadrature", "exact-expression",
                      (lambda f=f, rhs=rhs: Outcome(_quad(f), float(rhs), "quadrature")), QUAD_TOL)

    for k in range(1, min(grid.k_max, 5) + 1):
        minus, plus = cf.geometric_numerator_identity(k)
        fk0, f0k = cf.closed_F_general(k, 0), cf.closed_F0(k)
        _case(cases, "geometric.minus.exact", {"k": k}, "exact-expression", "exact-expression",
              (lambda mi=minus, a=fk0, b=f0k: _exact_compare(mi, a - b)), 0.0)
        _case(cases, "geometric.plus.exact", {"k": k}, "exact-expression", "exact-expression",
              (lambda pl=plus, a=fk0, b=f0k: _exact_compare(pl, a + b)), 0.0)
        num_minus = tuple([-1] + [0] * (k - 1) + [1])
        num_plus = tuple([1] + [0] * (k - 1) + [1])
        for a in grid.a_values:
            fm = LogIntegrand(num_minus, True, ((a, k + 1),))
            fp = LogIntegrand(num_plus, True, ((a, k + 1),))
            fs = LogIntegrand(tuple([1] * k), False, ((a, k + 1),))
            _case(cases, "geometric.minus", {"k": k, "a": a}, "quadrature", "exact-expression",
                  _quad_vs_expr(fm, minus, a), QUAD_TOL)
            _case(cases, "geometric.plus", {"k": k, "a": a}, "quadrature", "exact-expression",
                  _quad_vs_expr(fp, plus, a), QUAD_TOL)
            _case(cases, "geometric.sum_form", {"k": k, "a": a}, "quadrature", "exact-expression",
                  _quad_vs_expr(fs, minus, a), QUAD_TOL)

    for k in range(grid.k_max + 1):
        helper = cf.reciprocal_F0(k)
        via_sub = cf.closed_F0(k).substitute_reciprocal().shift(pow_a=-(k + 1))
        _case(cases, "reciprocal_helper.exact", {"k": k}, "exact-expression", "exact-expression",
              (lambda h=helper, v=via_sub: _exact_compare(h, v)), 0.0)
        for a in grid.a_values:
            # ln x / ((x-1)(a x + 1)^(k+1)) = a^-(k+1) ln x / ((x-1)(x + 1/a)^(k+1))
            ar = Fraction(a).limit_denominator(10 ** 9)
            f = LogIntegrand((1 / ar ** (k + 1),), True, ((1 / a, k + 1),))
            _case(cases, "reciprocal_helper", {"k": k, "a": a}, "quadrature", "exact-expression",
                  _quad_vs_expr(f, helper, a), QUAD_TOL)
    return cases


def corrected_F01_display() -> LogPolyExpr:
    """(a(pi^2 + ln^2 a) - 2(a+1) ln a) / (2a(a+1)^2)."""
    from .kernel import LN

    A = LogPolyExpr.monomial(1, pow_a=1)
    A1 = LogPolyExpr.monomial(1, pow_a1=1)
    return (A * (PI2_EXPR + LN2) - A1 * LN * 2).shift(-1, -2) * Fraction(1, 2)


def general_cases(grid: GridConfig) -> List[IdentityCase]:
    cases: List[IdentityCase] = []
    for m in range(grid.m_max + 1):
        for k in range(grid.k_max + 1):
            expr = cf.closed_F_general(m, k)
            for a in grid.a_values:
                _case(cases, "general.closed", {"m": m, "k": k, "a": a}, "quadrature", "exact-expression",
                      _quad_vs_expr(F_integrand(m, k, a), expr, a), QUAD_TOL)
    specialised = {0: cf.closed_F0, 1: cf.closed_F1, 2: cf.closed_F2}
    for m in range(grid.m_max + 1):
        for k in range(grid.k_max + 1):
            _case(cases, "general.alt", {"m": m, "k": k}, "exact-expression", "exact-expression",
                  (lambda m=m, k=k: _exact_compare(cf.closed_F_general_alt(m, k), cf.closed_F_general(m, k))),
                  CONSISTENCY_TOL)
            if m in specialised:
                _case(cases, "general.specialised", {"m": m, "k": k}, "exact-expression", "exact-expression",
                      (lambda m=m, k=k: _exact_compare(specialised[m](k), cf.closed_F_general(m, k))),
                      CONSISTENCY_TOL)
    for m in range(grid.m_max + 2):
        _case(cases, "general.m0", {"m": m}, "exact-expression", "exact-expression",
              (lambda m=m: _exact_compare(cf.closed_Fm0(m), cf.closed_F_general(m, 0))), CONSISTENCY_TOL)
        _case(cases, "general.m0.derivative_form", {"m": m}, "exact-expression", "exact-expression",
              (lambda m=m: _exact_compare(cf.closed_Fm0_derivative_form(m), cf.closed_Fm0(m))), CONSISTENCY_TOL)
    return cases


def lemma_samples(grid: GridConfig):
    """Deterministic random (c, s, x, k, a) tuples with rational entries."""
    rng = random.Random(grid.seed)
    out = []
    for _ in range(grid.lemma_samples):
        c = Fraction(rng.randint(-12, 12), 4)
        s = rng.randint(1, 5)
        x = Fraction(rng.randint(10, 300), 100)
        k = rng.randint(0, 6)
        a = Fraction(rng.randint(10, 300), 100)
        out.append((c, s, x, k, a))
    return out


def lemma_cases(grid: GridConfig) -> List[IdentityCase]:
    cases: List[IdentityCase] = []
    target = PI2_EXPR + LN2
    for k in range(1, grid.dk_max + 1):
        _case(cases, "dk.pi2_ln2", {"k": k}, "exact-expression", "exact-expression",
              (lambda k=k: _exact_compare(target.differentiate(k), cf.dk_pi2_ln2(k))), 0.0)
    for c, s, x, k, a in lemma_samples(grid):
        params = {"c": str(c), "s": s, "x": str(x), "k": k, "a": str(a)}
        _case(cases, "lemma.derivative", params, "exact-expression", "exact-expression",
              (lambda c=c, s=s, x=x, k=k, a=a: Outcome(
                  lemma_derivative(c, s, float(x), k, float(a)), lemma_fd(c, s, x, k, a), "numerical")),
              FD_TOL)
    for k in range(grid.k_max + 1):
        for a in grid.a_values:
            def special(k=k, a=a):
                closed = (-1) ** k * math.factorial(k) * (a + 3 + 2 * k) / (a + 1) ** (k + 2)
                return Outcome(lemma_derivative(3, 2, 1.0, k, a), closed, "numerical")
            _case(cases, "lemma.special", {"k": k, "a": a}, "exact-expression", "exact-expression",
                  special, CONSISTENCY_TOL)
    for kind in FACTORIZATION_KINDS:
        def fact(kind=kind):
            worst = 0
            for u in range(-40, 41):
                for v in range(-40, 41):
                    if (u - v) % 2:
                        continue
                    worst = max(worst, abs(fib_sum_factorization(u, v, kind).value - direct_sum(u, v, kind)))
            return Outcome(float(worst), 0.0, "structural", worst == 0)
        _case(cases, "fib.sum_factorization", {"kind": kind, "bound": 40}, "exact-expression",
              "exact-expression", fact, 0.0)
    return cases


def _alpha_relations() -> List[tuple]:
    rel = [
        ("alpha^2+1 = sqrt5*alpha", ALPHA ** 2 + 1, SQRT5 * ALPHA),
        ("beta^2+1 = -sqrt5*beta", BETA ** 2 + 1, -(SQRT5 * BETA)),
    ]
    for r in (2, 4, 6):
        rel.append((f"alpha^{2 * r}+1 = alpha^{r}*L_{r}", golden_power(2 * r) + 1, golden_power(r) * lucas(r)))
        rel.append((f"beta^{2 * r}+1 = beta^{r}*L_{r}", BETA ** (2 * r) + 1, BETA ** r * lucas(r)))
    return rel


def fib_cases(grid: GridConfig) -> List[IdentityCase]:
    cases: List[IdentityCase] = []
    for fam in fc.FibFamily:
        rs = grid.r_values if fam.uses_r else (2,)
        for r in rs:
            for n in range(grid.fib_max + 1):
                spec = fc.FibIntegrandSpec(fam, n, r)
                params = {"family": fam.value, "n": n}
                if fam.uses_r:
                    params["r"] = r
                f = fc.build_integrand(spec)
                rhs = fc.build_rhs(spec)
                _case(cases, f"fib.{fam.value}", params, "quadrature", "golden-value",
                      (lambda f=f, rhs=rhs: Outcome(_quad(f), rhs.to_float(), "quadrature")), FIB_TOL)
            top = grid.golden_exact_max if not fam.uses_r else grid.fib_max
            for n in range(top + 1):
                spec = fc.FibIntegrandSpec(fam, n, r)
                params = {"family": fam.value, "n": n}
                if fam.uses_r:
                    params["r"] = r
                _case(cases, f"fib.{fam.value}.exact", params, "exact-expression", "golden-value",
                      (lambda spec=spec: _golden_compare(fc.build_rhs(spec), fc.derive_rhs(spec))), 0.0)
    for label, spec, value in fc.particular_cases():
        _case(cases, "fib.particular", {"integrand": label}, "exact-expression", "golden-value",
              (lambda spec=spec, value=value: _golden_compare(fc.build_rhs(spec), value)), 0.0)
        f = fc.build_integrand(spec)
        _case(cases, "fib.particular.quadrature", {"integrand": label}, "quadrature", "golden-value",
              (lambda f=f, value=value: Outcome(_quad(f), value.to_float(), "quadrature")), QUAD_TOL)
    for s, q in ((0, 1), (1, 0), (1, -1), (2, 3), (Fraction(-1, 2), 5)):
        f, rhs = fc.affine_family_check(s, q)
        params = {"s": str(s), "q": str(q)}
        _case(cases, "fib.affine.linear", params, "quadrature", "golden-value",
              (lambda f=f, rhs=rhs: Outcome(_quad(f), rhs.to_float(), "quadrature")), FIB_TOL)
        _case(cases, "fib.affine.linear.exact", params, "exact-expression", "golden-value",
              (lambda s=s, q=q, rhs=rhs: _golden_compare(fc.derive_affine(s, q), rhs)), 0.0)
    for s, q, r in ((1, 7, 1), (2, 5, 7), (0, 1, -3), (3, 0, 0)):
        f, rhs = fc.affine_quadratic_check(s, q, r)
        params = {"s": s, "q": q, "r": r}
        _case(cases, "fib.affine.quadratic", params, "quadrature", "golden-value",
              (lambda f=f, rhs=rhs: Outcome(_quad(f), rhs.to_float(), "quadrature")), FIB_TOL)
        _case(cases, "fib.affine.quadratic.exact", params, "exact-expression", "golden-value",
              (lambda s=s, q=q, r=r, rhs=rhs: _golden_compare(fc.derive_affine_quadratic(s, q, r), rhs)), 0.0)
    for label, lhs, rhs in _alpha_relations():
        _case(cases, "fib.alpha_relations", {"relation": label}, "exact-expression", "exact-expression",
              (lambda lhs=lhs, rhs=rhs: Outcome(float(lhs), float(rhs), "structural", lhs == rhs)), 0.0)
    return cases


_SUITE_BUILDERS = {
    "core": core_cases,
    "general": general_cases,
    "lemmas": lemma_cases,
    "fib": fib_cases,
}


def build_catalog(suite: str = "all", grid: Optional[GridConfig] = None) -> List[IdentityCase]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    grid = grid or GridConfig()
    names = ("core", "general", "lemmas", "fib") if suite == "all" else (suite,)
    cases: List[IdentityCase] = []
    for name in names:
        cases.extend(_SUITE_BUILDERS[name](grid))
    return cases


# identities the catalog must cover (coverage lock)
REQUIRED_IDENTITIES = (
    "base", "base.golden", "base.golden.exact",
    "F0.closed", "F1.closed", "F2.closed", "F.explicit",
    "dk.pi2_ln2", "lemma.derivative", "lemma.special",
    "ln_power", "binomial_weighted",
    "general.closed", "general.alt", "general.specialised", "general.m0", "general.m0.derivative_form",
    "reciprocal_helper", "reciprocal_helper.exact",
    "geometric.minus", "geometric.plus", "geometric.sum_form",
    "geometric.minus.exact", "geometric.plus.exact",
    "fib.golden.L", "fib.golden.F", "fib.golden.L.exact", "fib.golden.F.exact",
    "fib.particular", "fib.affine.linear", "fib.affine.quadratic",
    "fib.even_r.L", "fib.even_r.F", "fib.power.L", "fib.power.F",
    "fib.combined_minus.L", "fib.combined_plus.L", "fib.combined_minus.F", "fib.combined_plus.F",
    "fib.sum_factorization", "fib.alpha_relations",
)


# --------------------------------------------------------------------------
# running

def judge(out: Outcome, tol: float) -> tuple:
    """(abs_err, rel_err, passed) with the near-zero and exact-equality rules."""
    abs_err = abs(out.lhs - out.rhs)
    if out.exact is not None:
        rel = 0.0 if out.exact else math.inf
        return abs_err, rel, out.exact
    if abs(out.rhs) < NEAR_ZERO:
        rel = abs_err
        return abs_err, rel, abs_err <= max(ABS_TOL_NEAR_ZERO, tol)
    rel = abs_err / abs(out.rhs)
    return abs_err, rel, rel <= tol


def run_case(case: IdentityCase, tolerance: Optional[float] = None) -> CaseRecord:
    tol = case.tolerance if tolerance is None or case.tolerance == 0.0 else tolerance
    try:
        out = case.compute()
    except OracleDidNotConverge as exc:
        return CaseRecord(case.identity_id, case.parameters, exc.best_estimate, math.nan, math.nan, math.inf,
                          False, "quadrature", tol, f"oracle did not converge after {exc.evaluations} evaluations")
    abs_err, rel, passed = judge(out, tol)
    return CaseRecord(case.identity_id, case.parameters, out.lhs, out.rhs, abs_err, rel, passed,
                      out.level, tol, out.note)


def run_suite(suite: str = "all", tolerance: Optional[float] = None, grid: Optional[GridConfig] = None,
              jobs: int = 1) -> VerificationReport:
    """Run every catalog entry of ``suite``; results keep catalog order."""
    if tolerance is not None and not (1e-13 <= tolerance <= 1e-3):
        raise ValueError("tolerance must lie in [1e-13, 1e-3]")
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    cases = build_catalog(suite, grid)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(lambda c: run_case(c, tolerance), cases))
    else:
        records = [run_case(c, tolerance) for c in cases]
    wall = time.perf_counter() - t0
    failed = sum(not r.passed for r in records)
    by_level: Dict[str, int] = {}
    for r in records:
        by_level[r.equality_level] = by_level.get(r.equality_level, 0) + 1
    summary = {
        "suite": suite,
        "total": len(records),
        "passed": len(records) - failed,
        "failed": failed,
        "by_level": dict(sorted(by_level.items())),
        "tolerance": "per-case defaults" if tolerance is None else tolerance,
        "tool_version": __version__,
        "errata": ERRATA,
    }
    timestamp = {"utc": started.isoformat(timespec="seconds"), "wall_time_s": round(wall, 3)}
    return VerificationReport(records, summary, timestamp)


def load_config(path: str) -> dict:
    """Flat JSON config: suite, tolerance, output, format and any GridConfig key."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    return data
