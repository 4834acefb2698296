"""Volume predictions, rational recognition, and the analysis pipeline.

For a nonuniform quasi-arithmetic reflection group over Q in odd dimension
n = 2m - 1, the covolume is a rational multiple of a single transcendental
factor determined by the discriminant class delta of the rational form:

  * delta a square:  T = zeta(m);
  * otherwise:       T = |D|^(n/2) * L(m, chi_D),
                     D the fundamental discriminant of Q(sqrt(delta)).

``analyze`` runs diagram -> Gram -> classification -> prediction ->
realization -> volume -> recognition and reports every stage.  Recognized
identities are suggestions backed by numerics, never proofs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp

from . import geometry, integration
from .arithmeticity import ArithmeticityReport, Classification, classify
from .diagram import CoxeterDiagram, assert_lorentzian, gram_matrix, parse_diagram
from .errors import EvenDimension
from .lseries import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    dirichlet_L,
    fundamental_discriminant,
    riemann_zeta,
)
from .surd import prime_factors

RECOGNITION_SMOOTH_PRIMES = (2, 3, 5, 7)
RECOGNITION_SMOOTH_QMAX = 10**9
RECOGNITION_MAX_NUMERATOR = 16


@dataclass(frozen=True)
class VolumePrediction:
    """Transcendental factor T such that the covolume is in T * Q."""

    dimension: int
    delta: int
    case: str                       # "rational-field" or "quadratic-field"
    factor: mpmath.mpf
    factor_error: float
    discriminant: int | None = None

    @property
    def weight(self) -> int:
        return (self.dimension + 1) // 2


@dataclass(frozen=True)
class RationalRecognition:
    """Outcome of recognizing x as a fraction within a stated error."""

    status: str                     # "recognized" or "unrecognized"
    numerator: int | None
    denominator: int | None
    residual: float
    confidence: float
    method: str                     # "continued-fraction", "smooth-denominator", "none"
    q_factorization: dict[int, int] = field(default_factory=dict)

    @property
    def fraction(self) -> Fraction | None:
        if self.status != "recognized":
            return None
        return Fraction(self.numerator, self.denominator)


def transcendental_factor(
    n: int, delta: int, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> VolumePrediction:
    """The number-theoretic factor for dimension n and discriminant class delta."""
    if n % 2 == 0:
        raise EvenDimension(
            "even dimension: the covolume is a rational multiple of a sphere "
            "volume by generalized Gauss-Bonnet; nothing to predict"
        )
    if n < 5:
        raise ValueError("prediction applies in odd dimension n >= 5")
    m = (n + 1) // 2
    if delta == 1:
        value = riemann_zeta(m, ctx)
        return VolumePrediction(n, delta, "rational-field", value,
                                float(ctx.target_error), None)
    D = fundamental_discriminant(delta)
    with mp.workprec(ctx.workprec()):
        L = dirichlet_L(m, D, ctx)
        lead = mp.mpf(abs(D.D)) ** (mp.mpf(n) / 2)
        value = +(lead * L)
        err = float(lead) * float(ctx.target_error) * 2
    return VolumePrediction(n, delta, "quadratic-field", value, err, D.D)


def _to_fraction(v) -> Fraction:
    """Exact Fraction from int, float, Fraction, or mpmath mpf input."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    if isinstance(v, mpmath.mpf):
        sign, man, exp, _ = v._mpf_
        man, exp = int(man), int(exp)  # the gmpy2 backend hands back mpz
        if man == 0:
            return Fraction(0)
        frac = Fraction(man) * (Fraction(2) ** exp)
        return -frac if sign else frac
    raise TypeError(f"cannot convert {type(v).__name__} to an exact fraction")


def _continued_fraction_convergents(x: Fraction):
    p0, q0, p1, q1 = 0, 1, 1, 0
    while True:
        a = x.numerator // x.denominator
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield Fraction(p1, q1)
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def _smooth_denominators(limit: int, primes: tuple[int, ...]) -> list[int]:
    out = [1]
    for p in primes:
        grown = []
        for q in out:
            v = q * p
            while v <= limit:
                grown.append(v)
                v *= p
        out.extend(grown)
    return sorted(out)


def _smooth_candidates(x: Fraction, err: Fraction, primes, qmax, pmax) -> list[Fraction]:
    found = set()
    for q in _smooth_denominators(qmax, primes):
        p = round(x * q)
        if p == 0 or p > pmax:
            continue
        cand = Fraction(p, q)
        if abs(x - cand) <= err:
            found.add(cand)
    return sorted(found)


def recognize_rational(
    x,
    err,
    *,
    smooth_primes: tuple[int, ...] = RECOGNITION_SMOOTH_PRIMES,
    smooth_qmax: int = RECOGNITION_SMOOTH_QMAX,
    smooth_max_numerator: int = RECOGNITION_MAX_NUMERATOR,
) -> RationalRecognition:
    """Identify a positive real x, known to absolute error err, as a fraction.

    Primary route: the first continued-fraction convergent p/q within err,
    guarded by q <= (4 err)^(-1/2) so that noise cannot masquerade as a
    rational.  Confidence is the gap to the neighbouring convergent in
    units of err.

    When the guard rejects (the error window holds many fractions), a
    fallback looks for denominators with only small prime factors inside
    the window; it answers only if exactly one such candidate exists.
    These multipliers typically come out of index and covolume formulas as
    products of small primes, which is what makes the window search
    meaningful; an ambiguous window stays unrecognized.
    """
    x = _to_fraction(x)
    err = _to_fraction(err)
    if x <= 0 or err <= 0:
        raise ValueError("x and err must be positive")

    guard = int(math.isqrt(int(1 / (4 * err))))
    best: Fraction | None = None
    prev_q = None
    for conv in _continued_fraction_convergents(x):
        if abs(x - conv) <= err:
            best = conv
            break
        if conv.denominator > max(guard * 1000, 10**6):
            break
        prev_q = conv.denominator

    if best is not None and best.denominator <= guard:
        # the next convergent has denominator >= q + q_prev, so its distance
        # is at least 1/(q*(q + q_prev)); a competing simple rational would
        # have to live at least that far away
        nxt_gap = 1.0 / (best.denominator * (prev_q or 1) + best.denominator ** 2)
        return RationalRecognition(
            status="recognized",
            numerator=best.numerator,
            denominator=best.denominator,
            residual=float(abs(x - best)),
            confidence=float(nxt_gap / float(err)) if err else math.inf,
            method="continued-fraction",
            q_factorization=_factorize(best.denominator),
        )

    cands = _smooth_candidates(x, err, smooth_primes, smooth_qmax, smooth_max_numerator)
    if len(cands) == 1:
        cand = cands[0]
        return RationalRecognition(
            status="recognized",
            numerator=cand.numerator,
            denominator=cand.denominator,
            residual=float(abs(x - cand)),
            confidence=1.0,
            method="smooth-denominator",
            q_factorization=_factorize(cand.denominator),
        )

    return RationalRecognition(
        status="unrecognized",
        numerator=best.numerator if best else None,
        denominator=best.denominator if best else None,
        residual=float(abs(x - best)) if best else math.inf,
        confidence=0.0,
        method="none",
    )


def _factorize(q: int) -> dict[int, int]:
    out = {}
    for p in prime_factors(q):
        e = 0
        while q % p == 0:
            q //= p
            e += 1
        out[p] = e
    return out


@dataclass
class AnalysisReport:
    """Everything the pipeline learned about one diagram."""

    diagram: CoxeterDiagram
    signature: tuple[int, int, int]
    arithmeticity: ArithmeticityReport
    prediction: VolumePrediction | None = None
    prediction_skipped: str | None = None
    volume: integration.VolumeEstimate | None = None
    volume_source: str = "none"      # "integrated", "assumed", "none"
    recognition: RationalRecognition | None = None
    vertex_counts: tuple[int, int] | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        rep = {
            "diagram": {
                "dimension": self.diagram.dimension,
                "facets": self.diagram.facets,
                "edges": len(self.diagram.edges),
            },
            "signature": list(self.signature),
            "arithmeticity": {
                "field_generators": sorted(self.arithmeticity.field_generators),
                "field": "Q" if self.arithmeticity.field_is_rational else
                         "Q(sqrt " + ", sqrt ".join(
                             str(g) for g in sorted(self.arithmeticity.field_generators)) + ")",
                "delta": self.arithmeticity.delta,
                "classification": self.arithmeticity.classification.value,
                "witnesses": list(self.arithmeticity.witnesses),
            },
            "timings": self.timings,
        }
        if self.prediction is not None:
            rep["prediction"] = {
                "case": self.prediction.case,
                "dimension": self.prediction.dimension,
                "weight": self.prediction.weight,
                "delta": self.prediction.delta,
                "fundamental_discriminant": self.prediction.discriminant,
                "factor": mpmath.nstr(self.prediction.factor, 30),
                "factor_error": self.prediction.factor_error,
            }
        if self.prediction_skipped:
            rep["prediction_skipped"] = self.prediction_skipped
        if self.vertex_counts is not None:
            rep["vertices"] = {"finite": self.vertex_counts[0], "ideal": self.vertex_counts[1]}
        if self.volume is not None:
            rep["volume"] = {
                "value": self.volume.value,
                "abs_error": self.volume.abs_error,
                "rel_error": self.volume.rel_error,
                "samples": self.volume.samples,
                "strategy": self.volume.strategy,
                "source": self.volume_source,
            }
        if self.recognition is not None:
            rec = {
                "status": self.recognition.status,
                "residual": self.recognition.residual,
                "confidence": self.recognition.confidence,
                "method": self.recognition.method,
            }
            if self.recognition.numerator is not None:
                rec["numerator"] = self.recognition.numerator
                rec["denominator"] = self.recognition.denominator
                rec["q_factorization"] = {
                    str(p): e for p, e in self.recognition.q_factorization.items()
                }
            rep["recognition"] = rec
        return rep


def analyze(
    diagram_text: str,
    *,
    precision: int = 128,
    target_rel_err: float = 1e-3,
    seed: int = integration.DEFAULT_SEED,
    assume_volume: str | float | None = None,
    assume_err: float | None = None,
    lseries_context: PrecisionContext = DEFAULT_CONTEXT,
    max_log2_samples: int = 18,
) -> AnalysisReport:
    """Full pipeline on a diagram file's text.

    With ``assume_volume`` (an externally computed high-precision value)
    the numeric integrator is skipped and recognition uses the assumed
    value; otherwise the volume is integrated and recognition runs at the
    integrator's accuracy, which limits how large a denominator can be
    certified.
    """
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    diagram = parse_diagram(diagram_text)
    G = gram_matrix(diagram)
    sig = assert_lorentzian(G)
    timings["gram"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    arith = classify(G)
    timings["arithmeticity"] = time.perf_counter() - t0

    report = AnalysisReport(diagram, sig, arith, timings=timings)

    n = diagram.dimension
    if not arith.field_is_rational:
        report.prediction_skipped = "field of definition is not Q"
    elif arith.classification == Classification.NOT_QUASI_ARITHMETIC:
        report.prediction_skipped = "group is not quasi-arithmetic"
    elif n % 2 == 0:
        report.prediction_skipped = "even dimension (Gauss-Bonnet case)"
    elif n < 5:
        report.prediction_skipped = "dimension below 5"
    else:
        t0 = time.perf_counter()
        report.prediction = transcendental_factor(n, arith.delta, lseries_context)
        timings["prediction"] = time.perf_counter() - t0

    volume_value: mpmath.mpf | None = None
    volume_err: float | None = None
    if assume_volume is not None:
        with mp.workprec(max(precision, 256)):
            volume_value = mp.mpf(assume_volume)
        volume_err = float(assume_err if assume_err is not None else 1e-9)
        report.volume = integration.VolumeEstimate(float(volume_value), volume_err, 0, "assumed")
        report.volume_source = "assumed"
    else:
        t0 = time.perf_counter()
        realization = geometry.realize(G, precision)
        geometry.enumerate_vertices(realization)
        report.vertex_counts = (
            len(realization.finite_vertices), len(realization.ideal_vertices)
        )
        kp = geometry.to_klein(realization)
        timings["geometry"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        est = integration.polytope_volume(
            kp, target_rel_err, seed=seed, max_log2_samples=max_log2_samples
        )
        timings["volume"] = time.perf_counter() - t0
        report.volume = est
        report.volume_source = "integrated"
        volume_value = mp.mpf(est.value)
        volume_err = est.abs_error

    if report.prediction is not None and volume_value is not None:
        t0 = time.perf_counter()
        with mp.workprec(max(precision, 256)):
            T = report.prediction.factor
            x = volume_value / T
            err_x = (mp.mpf(volume_err) + abs(x) * report.prediction.factor_error) / T
        report.recognition = recognize_rational(x, err_x)
        timings["recognition"] = time.perf_counter() - t0

    return report


def render_text(report: AnalysisReport) -> str:
    """Human-readable summary of an analysis report."""
    a = report.arithmeticity
    lines = []
    lines.append(f"dimension {report.diagram.dimension}, "
                 f"{report.diagram.facets} facets, signature {report.signature}")
    fieldname = "Q" if a.field_is_rational else (
        "Q(" + ", ".join(f"sqrt {g}" for g in sorted(a.field_generators)) + ")")
    lines.append(f"field of definition: {fieldname}")
    lines.append(f"classification: {a.classification.value}")
    if a.delta is not None:
        lines.append(f"discriminant class delta = {a.delta}")
    for w in a.witnesses:
        lines.append(f"  witness: {w}")
    p = report.prediction
    if p is not None:
        if p.case == "rational-field":
            tdesc = f"zeta({p.weight})"
        else:
            tdesc = f"{abs(p.discriminant)}^({p.dimension}/2) * L({p.weight}, chi_{p.discriminant})"
        lines.append(f"covolume is a rational multiple of T = {tdesc}")
        lines.append(f"T = {mpmath.nstr(p.factor, 25)}")
    elif report.prediction_skipped:
        lines.append(f"no volume prediction: {report.prediction_skipped}")
    if report.vertex_counts:
        lines.append(f"vertices: {report.vertex_counts[0]} finite, "
                     f"{report.vertex_counts[1]} ideal")
    v = report.volume
    if v is not None:
        lines.append(f"volume ({report.volume_source}): {v.value:.12g} "
                     f"+- {v.abs_error:.2g}")
    r = report.recognition
    if r is not None:
        if r.status == "recognized":
            fact = " * ".join(f"{p}^{e}" if e > 1 else str(p)
                              for p, e in sorted(r.q_factorization.items()))
            lines.append(
                f"suggested identity: volume = {r.numerator}/{r.denominator} * T "
                f"(denominator = {fact}; method {r.method}; residual {r.residual:.2g})"
            )
            lines.append("  (numerical suggestion, not a proof)")
        else:
            lines.append("no rational multiplier recognized at this accuracy")
    return "\n".join(lines)
