"""Trichotomy of f = [psi^(m)]^2 + psi^(n): trivially CM for odd n,
nontrivially CM only at (m, n) = (1, 2), sign-changing and non-monotonic for
every other even n.

Machinery: exact integer polynomials bounding f'_{m,2v}; leading-term sign
analysis at both ends; asymptotic envelopes; and certified witness search
(scan plus log-bisection) for sign changes and non-monotonicity.

Two bounding polynomial families are shipped. The "printed" ones are kept
exactly as displayed in the source being verified; the "derived" ones are
re-derived from the double inequality

    (k-1)!/x^k + k!/(2 x^(k+1)) < |psi^(k)(x)| < (k-1)!/x^k + k!/x^(k+1)

applied to f' = |psi^(2v+1)| - 2 |psi^(m)| |psi^(m+1)|, and satisfy

    q_derived/(2 x^(2m+2v+3)) < f' < p_derived/(4 x^(2m+2v+3)).

They differ: every negative printed coefficient is half the derived one.
bound_check audits all four variants and flags printed failures as findings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CapabilityError,
    ClassificationError,
    DomainError,
    SearchExhaustedError,
)
from .evaluation import DEFAULT_PRECISION, EvalResult, PrecisionConfig, log_grid, ulp
from .cm_engine import CMReport, FamilyIndex, cm_check, f_derivative, f_value


# ---------------------------------------------------------------------------
# Exact integer polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntPolynomial:
    """Sparse polynomial with exact integer coefficients.

    terms are (coeff, power) pairs, powers strictly decreasing, no zeros.
    """

    terms: tuple[tuple[int, int], ...]

    @staticmethod
    def from_pairs(pairs) -> "IntPolynomial":
        acc: dict[int, int] = {}
        for coeff, power in pairs:
            if not isinstance(coeff, int) or not isinstance(power, int):
                raise DomainError("coefficients and powers must be exact integers")
            if power < 0:
                raise DomainError(f"powers must be non-negative, got {power}")
            acc[power] = acc.get(power, 0) + coeff
        terms = tuple(
            (c, p) for p, c in sorted(acc.items(), reverse=True) if c != 0
        )
        return IntPolynomial(terms)

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate_exact(self, x: Fraction) -> Fraction:
        total = Fraction(0)
        for coeff, power in self.terms:
            total += coeff * x**power
        return total

    def evaluate(self, x: float) -> EvalResult:
        """Exact rational evaluation, rounded once to float."""
        exact = self.evaluate_exact(Fraction(x))
        try:
            value = float(exact)
        except OverflowError as exc:
            raise CapabilityError(f"polynomial value overflows at x={x}") from exc
        return EvalResult(value, ulp(value))

    def leading(self) -> tuple[int, int]:
        if self.is_zero():
            raise DomainError("zero polynomial has no leading term")
        return self.terms[0]

    def trailing(self) -> tuple[int, int]:
        if self.is_zero():
            raise DomainError("zero polynomial has no trailing term")
        return self.terms[-1]


def _validate_pos_int(name: str, v: int) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise DomainError(f"{name} must be a positive integer, got {v!r}")
    return v


def q_printed(m: int, n: int) -> IntPolynomial:
    """Lower-bound numerator as printed: terms with equal powers combined.

    2(2n)! x^(2m+2) + (2n+1)! x^(2m+1)
    - 2(m-1)! m! x^(2n+2) - 2[(m!)^2 + (m-1)!(m+1)!] x^(2n+1) - 2 m!(m+1)! x^(2n)
    """
    m = _validate_pos_int("m", m)
    n = _validate_pos_int("n", n)
    fm1, fm, fm2 = math.factorial(m - 1), math.factorial(m), math.factorial(m + 1)
    return IntPolynomial.from_pairs([
        (2 * math.factorial(2 * n), 2 * m + 2),
        (math.factorial(2 * n + 1), 2 * m + 1),
        (-2 * fm1 * fm, 2 * n + 2),
        (-2 * (fm * fm + fm1 * fm2), 2 * n + 1),
        (-2 * fm * fm2, 2 * n),
    ])


def p_printed(m: int, n: int) -> IntPolynomial:
    """Upper-bound numerator as printed.

    4(2n)! x^(2m+2) + 4(2n+1)! x^(2m+1)
    - 4(m-1)! m! x^(2n+2) - 2[(m!)^2 + (m-1)!(m+1)!] x^(2n+1) - m!(m+1)! x^(2n)
    """
    m = _validate_pos_int("m", m)
    n = _validate_pos_int("n", n)
    fm1, fm, fm2 = math.factorial(m - 1), math.factorial(m), math.factorial(m + 1)
    return IntPolynomial.from_pairs([
        (4 * math.factorial(2 * n), 2 * m + 2),
        (4 * math.factorial(2 * n + 1), 2 * m + 1),
        (-4 * fm1 * fm, 2 * n + 2),
        (-2 * (fm * fm + fm1 * fm2), 2 * n + 1),
        (-fm * fm2, 2 * n),
    ])


def q_derived(m: int, n: int) -> IntPolynomial:
    """Re-derived lower-bound numerator: q/(2x^(2m+2n+3)) <= f'_{m,2n}.

    From f' > A_{2n+1} - 2 B_m B_{m+1} with A/B the double-inequality bounds;
    positive terms match the printed ones, negative terms are exactly twice.
    """
    m = _validate_pos_int("m", m)
    n = _validate_pos_int("n", n)
    fm1, fm, fm2 = math.factorial(m - 1), math.factorial(m), math.factorial(m + 1)
    return IntPolynomial.from_pairs([
        (2 * math.factorial(2 * n), 2 * m + 2),
        (math.factorial(2 * n + 1), 2 * m + 1),
        (-4 * fm1 * fm, 2 * n + 2),
        (-4 * (fm * fm + fm1 * fm2), 2 * n + 1),
        (-4 * fm * fm2, 2 * n),
    ])


def p_derived(m: int, n: int) -> IntPolynomial:
    """Re-derived upper-bound numerator: f'_{m,2n} <= p/(4x^(2m+2n+3)).

    From f' < B_{2n+1} - 2 A_m A_{m+1}; again negative terms are twice the
    printed ones, positives identical.
    """
    m = _validate_pos_int("m", m)
    n = _validate_pos_int("n", n)
    fm1, fm, fm2 = math.factorial(m - 1), math.factorial(m), math.factorial(m + 1)
    return IntPolynomial.from_pairs([
        (4 * math.factorial(2 * n), 2 * m + 2),
        (4 * math.factorial(2 * n + 1), 2 * m + 1),
        (-8 * fm1 * fm, 2 * n + 2),
        (-4 * (fm * fm + fm1 * fm2), 2 * n + 1),
        (-2 * fm * fm2, 2 * n),
    ])


def leading_term_sign(poly: IntPolynomial, end: str) -> int:
    """Sign (+1/-1) of the coefficient that dominates at the given end:
    highest power toward infinity, lowest power toward zero."""
    if end not in ("zero", "infinity"):
        raise DomainError(f"end must be 'zero' or 'infinity', got {end!r}")
    if poly.is_zero():
        raise DomainError("zero polynomial has no dominant term")
    coeff, _ = poly.leading() if end == "infinity" else poly.trailing()
    return 1 if coeff > 0 else -1


# ---------------------------------------------------------------------------
# Bound audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundEntry:
    x: float
    f_prime: EvalResult
    bounds: dict[str, float]     # bound name -> exact-rounded bound value
    statuses: dict[str, str]     # bound name -> "holds" | "fails" | "inconclusive"
    margins: dict[str, float]    # signed margin in the direction that should hold


@dataclass(frozen=True)
class BoundAuditReport:
    m: int
    n: int
    grid: tuple[float, ...]
    entries: tuple[BoundEntry, ...]
    findings: tuple[str, ...]    # printed-bound failures, documented not fatal
    derived_ok: bool
    printed_p_ok: bool


_BOUND_NAMES = ("q_printed", "q_derived", "p_printed", "p_derived")


def _bound_values(m: int, n: int, x: float) -> dict[str, float]:
    X = Fraction(x)
    denom_q = 2 * X ** (2 * m + 2 * n + 3)
    denom_p = 4 * X ** (2 * m + 2 * n + 3)
    return {
        "q_printed": float(q_printed(m, n).evaluate_exact(X) / denom_q),
        "q_derived": float(q_derived(m, n).evaluate_exact(X) / denom_q),
        "p_printed": float(p_printed(m, n).evaluate_exact(X) / denom_p),
        "p_derived": float(p_derived(m, n).evaluate_exact(X) / denom_p),
    }


def bound_check(
    m: int,
    n: int,
    grid,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> BoundAuditReport:
    """Audit f'_{m,2n} against all four bound variants over the grid.

    Lower bounds should satisfy f' >= bound, upper bounds f' <= bound; a
    status is only "fails" when the violation clears the combined error
    margin.  Printed-bound failures become findings; derived-bound failures
    make derived_ok false (and should never happen).
    """
    m = _validate_pos_int("m", m)
    n = _validate_pos_int("n", n)
    pts = tuple(float(t) for t in grid)
    idx = FamilyIndex(m, 2 * n)
    entries: list[BoundEntry] = []
    findings: list[str] = []
    derived_ok = True
    printed_p_ok = True
    for x in pts:
        fp = f_derivative(idx, 1, x, cfg)
        bounds = _bound_values(m, n, x)
        statuses: dict[str, str] = {}
        margins: dict[str, float] = {}
        for name, b in bounds.items():
            lower = name.startswith("q")
            margin = (fp.value - b) if lower else (b - fp.value)
            err = fp.abs_error + ulp(b)
            if margin > err:
                status = "holds"
            elif margin < -err:
                status = "fails"
            else:
                status = "inconclusive"
            statuses[name] = status
            margins[name] = margin
            if status != "holds":
                if name.endswith("derived"):
                    derived_ok = False
                elif name == "p_printed":
                    printed_p_ok = False
                    findings.append(
                        f"printed upper bound {status} at (m={m}, n={n}), "
                        f"x={x:.6g}: margin {margin:.3e}"
                    )
                else:
                    findings.append(
                        f"printed lower bound {status} at (m={m}, n={n}), "
                        f"x={x:.6g}: f'={fp.value:.6e} vs bound {b:.6e}"
                    )
        entries.append(BoundEntry(x, fp, bounds, statuses, margins))
    return BoundAuditReport(
        m=m,
        n=n,
        grid=pts,
        entries=tuple(entries),
        findings=tuple(findings),
        derived_ok=derived_ok,
        printed_p_ok=printed_p_ok,
    )


# ---------------------------------------------------------------------------
# Combinatorial quantities and envelopes
# ---------------------------------------------------------------------------


def binom_quantity(i: int, m: int) -> tuple[int, str]:
    """i * C(2i-1, m) with its case label.

    The three cases are exhaustive and mutually exclusive: the value is 1
    exactly when i = m = 1, zero exactly when 2i-1 < m, and at least 2
    otherwise (which forces i >= 2).
    """
    i = _validate_pos_int("i", i)
    m = _validate_pos_int("m", m)
    value = i * math.comb(2 * i - 1, m)
    if i == 1 and m == 1:
        return value, "equals_one"
    if 2 * i - 1 < m:
        return value, "equals_zero"
    return value, "at_least_two"


def discriminant_mn(m: int) -> int:
    """1 - m*C(2m-1, m-1): zero at m = 1, negative for every m >= 2."""
    m = _validate_pos_int("m", m)
    return 1 - m * math.comb(2 * m - 1, m - 1)


def envelope(idx: FamilyIndex, x: float, end: str) -> EvalResult:
    """Asymptotic envelope of f_{m,2v} at the requested end, v = n/2.

    infinity: [(m-1)!]^2/x^(2m) * (1 - (2v-1)!/[(m-1)!]^2 * x^(2(m-v)))
    zero:     (m!)^2/x^(2(m+1)) * (1 - (2v)!/(m!)^2 * x^(2(m-v)+1))

    Exact rational arithmetic, rounded once; the sign of the envelope
    predicts the sign of f at that end (degenerate at m = v = 1, where the
    infinity-end leading coefficients cancel).
    """
    if end not in ("zero", "infinity"):
        raise DomainError(f"end must be 'zero' or 'infinity', got {end!r}")
    if idx.n % 2 != 0:
        raise DomainError(f"envelope applies to even second index, got {idx.n}")
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"argument must be a finite positive real, got {x!r}")
    m, v = idx.m, idx.n // 2
    X = Fraction(x)
    if end == "infinity":
        A = Fraction(math.factorial(m - 1) ** 2)
        inner = 1 - Fraction(math.factorial(2 * v - 1)) / A * X ** (2 * (m - v))
        exact = A / X ** (2 * m) * inner
    else:
        B = Fraction(math.factorial(m) ** 2)
        inner = 1 - Fraction(math.factorial(2 * v)) / B * X ** (2 * (m - v) + 1)
        exact = B / X ** (2 * (m + 1)) * inner
    try:
        value = float(exact)
    except OverflowError as exc:
        raise CapabilityError(
            f"envelope overflows at {idx.label()}, x={x}, end={end}"
        ) from exc
    return EvalResult(value, ulp(value))


# ---------------------------------------------------------------------------
# Witness search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchParams:
    x_min: float = 1e-3
    x_max: float = 1e3
    coarse_count: int = 128
    max_refinements: int = 80
    certify_factor: float = 10.0
    rel_width: float = 1e-6

    def __post_init__(self) -> None:
        if not (0.0 < self.x_min < self.x_max):
            raise DomainError("need 0 < x_min < x_max")
        if self.coarse_count < 2:
            raise DomainError("coarse_count must be at least 2")


DEFAULT_SEARCH = SearchParams()


@dataclass(frozen=True)
class Witness:
    """Certified pair of points with opposite signs of the probed quantity.

    kind "sign_change": quantity is f itself, x_positive/x_negative carry
    certified f > 0 resp. f < 0.  kind "non_monotonic": quantity is f', so
    x_positive is a certified increase point and x_negative a decrease point.
    Margins are |value| - abs_error, always positive by construction.
    """

    kind: str
    x_positive: float
    x_negative: float
    positive: EvalResult
    negative: EvalResult
    margin_positive: float
    margin_negative: float


def _certified_sign(ev: EvalResult, factor: float) -> int:
    if ev.value > factor * ev.abs_error:
        return 1
    if ev.value < -factor * ev.abs_error:
        return -1
    return 0


def _witness_search(
    probe,
    kind: str,
    label: str,
    search: SearchParams,
) -> Witness:
    """Scan a log grid for certified opposite signs, then log-bisect the
    bracket; stop early if a midpoint cannot be certified."""
    xs = log_grid(search.x_min, search.x_max, search.coarse_count)
    signs: list[tuple[float, EvalResult, int]] = []
    for x in xs:
        ev = probe(x)
        signs.append((x, ev, _certified_sign(ev, search.certify_factor)))

    bracket = None
    for (x1, e1, s1), (x2, e2, s2) in zip(signs, signs[1:]):
        if s1 != 0 and s2 != 0 and s1 != s2:
            bracket = (x1, e1, s1, x2, e2, s2)
            break
    if bracket is None:
        pos = sum(1 for _, _, s in signs if s == 1)
        neg = sum(1 for _, _, s in signs if s == -1)
        raise SearchExhaustedError(
            f"no certified {kind} bracket for {label} in "
            f"[{search.x_min:g}, {search.x_max:g}]: "
            f"{pos} certified positive, {neg} certified negative"
        )

    lo, elo, slo, hi, ehi, shi = bracket
    for _ in range(search.max_refinements):
        if hi / lo - 1.0 <= search.rel_width:
            break
        mid = math.sqrt(lo * hi)
        emid = probe(mid)
        smid = _certified_sign(emid, search.certify_factor)
        if smid == 0:
            break  # keep the last certified bracket
        if smid == slo:
            lo, elo = mid, emid
        else:
            hi, ehi = mid, emid

    if slo == 1:
        xp, ep, xn, en = lo, elo, hi, ehi
    else:
        xp, ep, xn, en = hi, ehi, lo, elo
    return Witness(
        kind=kind,
        x_positive=xp,
        x_negative=xn,
        positive=ep,
        negative=en,
        margin_positive=ep.value - ep.abs_error,
        margin_negative=-en.value - en.abs_error,
    )


def _validate_even_pair(m: int, even_n: int) -> tuple[int, int]:
    m = _validate_pos_int("m", m)
    if isinstance(even_n, bool) or not isinstance(even_n, int) or even_n < 2 or even_n % 2:
        raise DomainError(f"second index must be a positive even integer, got {even_n!r}")
    if m == 1 and even_n == 2:
        raise DomainError("the (1,2) member is completely monotonic; no witness exists")
    return m, even_n


def find_sign_change(
    m: int,
    even_n: int,
    search: SearchParams = DEFAULT_SEARCH,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> Witness:
    """Certified sign-change witness for f_{m,even_n}, (m, even_n) != (1,2).

    The scan window spans both asymptotic regimes, where the envelope signs
    guarantee opposite-sign values for every such pair.
    """
    m, even_n = _validate_even_pair(m, even_n)
    idx = FamilyIndex(m, even_n)
    return _witness_search(
        lambda x: f_value(idx, x, cfg), "sign_change", idx.label(), search
    )


def find_nonmonotonic(
    m: int,
    even_n: int,
    search: SearchParams = DEFAULT_SEARCH,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> Witness:
    """Certified non-monotonicity witness: points where f'_{m,even_n} is
    certified positive resp. negative."""
    m, even_n = _validate_even_pair(m, even_n)
    idx = FamilyIndex(m, even_n)
    return _witness_search(
        lambda x: f_derivative(idx, 1, x, cfg), "non_monotonic", idx.label(), search
    )


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationEntry:
    index: FamilyIndex
    verdict: str  # "CM_trivial" | "CM_nontrivial" | "sign_changing_nonmonotonic"
    cm_report: CMReport | None
    sign_witness: Witness | None
    monotonicity_witness: Witness | None


def expected_verdict(m: int, n: int) -> str:
    """Closed-form trichotomy rule: odd n trivially CM, (1,2) nontrivially
    CM, all other even n neither sign-stable nor monotonic."""
    if n % 2 == 1:
        return "CM_trivial"
    if (m, n) == (1, 2):
        return "CM_nontrivial"
    return "sign_changing_nonmonotonic"


def classify(
    m: int,
    n: int,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
    cm_max_order: int = 4,
    cm_grid=None,
    search: SearchParams = DEFAULT_SEARCH,
) -> ClassificationEntry:
    """Classify f_{m,n} and attach numeric evidence.

    CM verdicts carry a grid CM report (a certified violation contradicts
    the rule and raises); the sign-changing verdict carries both witness
    kinds (search failure raises, wrapped as a classification error).
    """
    m = _validate_pos_int("m", m)
    n = _validate_pos_int("n", n)
    verdict = expected_verdict(m, n)
    idx = FamilyIndex(m, n)
    if verdict in ("CM_trivial", "CM_nontrivial"):
        grid = tuple(cm_grid) if cm_grid is not None else log_grid(0.01, 100.0, 40)
        report = cm_check(idx, cm_max_order, grid, cfg)
        if report.verdict == "violation":
            worst = report.violations[0]
            raise ClassificationError(
                f"{idx.label()} should be completely monotonic but a violation "
                f"was certified at order {worst.order}, x={worst.x:.6g}"
            )
        return ClassificationEntry(idx, verdict, report, None, None)
    try:
        sw = find_sign_change(m, n, search, cfg)
        mw = find_nonmonotonic(m, n, search, cfg)
    except SearchExhaustedError as exc:
        raise ClassificationError(
            f"{idx.label()} should change sign and be non-monotonic, "
            f"but witness search failed: {exc}"
        ) from exc
    return ClassificationEntry(idx, verdict, None, sw, mw)
