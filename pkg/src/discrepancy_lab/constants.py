"""Closed-form constants, the exponent optimization, and numeric inequality harnesses.

The final exponent bound eta < 1/(32 + 4 sqrt(41)) comes from maximizing a
four-term minimum over a free split parameter alpha in (0, 1/2); this module
evaluates that optimization, verifies the algebraic identities around it,
brute-forces the composition inequality behind the tree/cycle bookkeeping,
and evaluates both sides of the summed tail estimates for concrete values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, DomainError, ParameterDomain

__all__ = [
    "ALPHA_OPT",
    "EPSILON_MAX",
    "ETA_MAX",
    "ParameterSet",
    "OptimizationResult",
    "lambert_w0",
    "lemma5_verify",
    "compositions",
    "epsilon_tau",
    "optimize_alpha",
    "eta_bound",
    "stirling2",
    "stirling2_bound_ratio",
    "sum_chain_report",
    "geometric_tail_check",
    "binomial_shift_check",
    "validate_parameters",
    "lambert_gain_report",
    "constants_report",
]

_SQRT41 = math.sqrt(41.0)
ALPHA_OPT = (_SQRT41 - 5.0) / 4.0
EPSILON_MAX = (8.0 - _SQRT41) / 23.0
ETA_MAX = 1.0 / (32.0 + 4.0 * _SQRT41)


# ----------------------------------------------------------------------
# Lambert W, principal branch
# ----------------------------------------------------------------------
def lambert_w0(z: float) -> float:
    """Principal branch of w e^w = z for z >= -1/e, by guarded Halley iteration.

    Residual |w e^w - z| <= 1e-13 * max(1, |z|).
    """
    z = float(z)
    if math.isnan(z):
        raise DomainError("lambert_w0 of NaN")
    branch_point = -math.exp(-1.0)
    if z < branch_point:
        raise DomainError(f"lambert_w0 needs z >= -1/e, got {z}")
    if z == 0.0:
        return 0.0
    # initial guess
    if z > math.e:
        w = math.log(z)
        w -= math.log(w)
    elif z > -0.25:
        w = z * math.exp(-z * 0.5) if abs(z) < 1 else 1.0
    else:
        # series at the branch point
        p = math.sqrt(2.0 * (math.e * z + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 * p ** 3 / 72.0
    tol = 1e-13 * max(1.0, abs(z))
    for _ in range(200):
        ew = math.exp(w)
        f = w * ew - z
        if abs(f) <= tol:
            return w
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1) if wp1 != 0 else ew
        step = f / denom
        # guard against overshooting below the branch point
        while w - step < -1.0:
            step *= 0.5
        w -= step
    ew = math.exp(w)
    if abs(w * ew - z) <= tol:
        return w
    raise DomainError(f"lambert_w0 failed to converge for z = {z}")


# ----------------------------------------------------------------------
# composition inequality (Lagrange bookkeeping for tree/cycle factors)
# ----------------------------------------------------------------------
def compositions(total: int, parts: int, minimum: int = 2) -> Iterable[tuple[int, ...]]:
    """Ordered compositions of `total` into `parts` parts, each >= minimum."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def _lagrange_stationary(v: int, l: int, k: int) -> dict:
    """Stationary point of the relaxed product objective under sum = v.

    First k parts solve x = 2/w with w = W(2 e^{1-lambda}); the rest sit at
    e^{lambda/2 - 1}.  Solved for lambda by bisection on the sum constraint.
    Returns the parts, lambda, and the resulting upper-bound surrogate
    exp(lambda (v - 2k)) (k >= 1) or (v/l)^{2v} (k = 0).
    """
    if k == 0:
        part = v / l
        lam = 2.0 * (1.0 + math.log(part))
        parts_tree: list[float] = []
        parts_rest = [part] * l
        surrogate_log = (lam - 2.0) * v  # equals 2 v log(v/l)
    elif k == l:
        w = 2.0 * k / v
        lam = 1.0 - math.log(w * math.exp(w) / 2.0)
        parts_tree = [v / k] * k
        parts_rest = []
        surrogate_log = lam * (v - 2 * k)
    else:
        def gap(lam: float) -> float:
            w = lambert_w0(2.0 * math.exp(1.0 - lam))
            return k * 2.0 / w + (l - k) * math.exp(lam / 2.0 - 1.0) - v

        lo, hi = -50.0, 80.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if gap(mid) > 0:
                hi = mid
            else:
                lo = mid
        lam = 0.5 * (lo + hi)
        w = lambert_w0(2.0 * math.exp(1.0 - lam))
        parts_tree = [2.0 / w] * k
        parts_rest = [math.exp(lam / 2.0 - 1.0)] * (l - k)
        surrogate_log = lam * (v - 2 * k)
    objective_log = sum((x - 2.0) * math.log(x) for x in parts_tree) \
        + sum(2.0 * x * math.log(x) for x in parts_rest)
    return {
        "lambda": lam,
        "parts_tree": parts_tree,
        "parts_rest": parts_rest,
        "objective_log": objective_log,
        "surrogate_log": surrogate_log,
    }


def lemma5_verify(v: int, l: int, k: int, max_v: int = 20) -> dict:
    """Exhaustive check of prod v_j^{v_j-2} * prod v_j^{2 v_j} <= C (v/k)^{v-2k}.

    Enumerates all ordered compositions of v into l parts >= 2 (first k parts
    carry the tree exponent v_j - 2, the rest the cycle exponent 2 v_j) and
    reports the exact maximal ratio against (v/k)^{v-2k}, or (v/l)^{2v} when
    k = 0.  The Lagrange stationary point of the relaxation is reported for
    cross-checking.
    """
    if v > max_v:
        raise BudgetExceeded(f"v = {v} exceeds budget {max_v}")
    if not (0 <= k <= l <= v // 2) or l < 1:
        raise DomainError(f"need 1 <= l <= v/2 and 0 <= k <= l, got v={v} l={l} k={k}")
    if k >= 1:
        bound = Fraction(v, k) ** (v - 2 * k)
    else:
        bound = Fraction(v, l) ** (2 * v)
    best: Fraction | None = None
    arg: tuple[int, ...] | None = None
    count = 0
    for comp in compositions(v, l, 2):
        count += 1
        lhs = 1
        for j, part in enumerate(comp):
            lhs *= part ** (part - 2) if j < k else part ** (2 * part)
        ratio = Fraction(lhs) / bound
        if best is None or ratio > best:
            best, arg = ratio, comp
    if best is None:
        raise DomainError(f"no compositions of {v} into {l} parts >= 2")
    return {
        "v": v, "l": l, "k": k,
        "bound": bound,
        "max_ratio": best,
        "argmax": arg,
        "compositions": count,
        "stationary": _lagrange_stationary(v, l, k),
    }


# ----------------------------------------------------------------------
# the exponent optimization
# ----------------------------------------------------------------------
_TAU_TERMS = (
    lambda a: (4.0 - 8.0 * a) / (11.0 - 8.0 * a),
    lambda a: (1.0 - 2.0 * a) / (5.0 - 2.0 * a),
    lambda a: (1.0 + 4.0 * a) / (11.0 + 12.0 * a),
    lambda a: a / (4.0 + 3.0 * a),
)


def epsilon_tau(alpha: float) -> float:
    """The four-term minimum bounding the admissible exponent for a split alpha."""
    if not 0.0 < alpha < 0.5:
        raise DomainError(f"alpha must lie in (0, 1/2), got {alpha}")
    return min(term(alpha) for term in _TAU_TERMS)


@dataclass(frozen=True)
class OptimizationResult:
    alpha_opt: float
    epsilon_max: float
    eta_max: float
    active_terms: tuple[int, ...]


def optimize_alpha(step: float = 1e-6) -> OptimizationResult:
    """Grid search of epsilon_tau over (0, 1/2); the exact optimum is
    (sqrt(41)-5)/4 where the second and fourth terms cross."""
    alphas = np.arange(step, 0.5, step)
    values = np.minimum.reduce([
        (4.0 - 8.0 * alphas) / (11.0 - 8.0 * alphas),
        (1.0 - 2.0 * alphas) / (5.0 - 2.0 * alphas),
        (1.0 + 4.0 * alphas) / (11.0 + 12.0 * alphas),
        alphas / (4.0 + 3.0 * alphas),
    ])
    idx = int(np.argmax(values))
    alpha = float(alphas[idx])
    eps = float(values[idx])
    # active terms at the exact optimum, where the minimum is attained twice
    exact = [term(ALPHA_OPT) for term in _TAU_TERMS]
    active = tuple(i for i, t in enumerate(exact) if abs(t - EPSILON_MAX) < 1e-12)
    return OptimizationResult(alpha_opt=alpha, epsilon_max=eps,
                              eta_max=eps / 4.0, active_terms=active)


def eta_bound() -> dict:
    """The closed forms of the final exponent and their algebraic identity."""
    eta_closed = 1.0 / (32.0 + 4.0 * _SQRT41)
    eta_from_eps = (8.0 - _SQRT41) / 92.0
    return {
        "eta_closed": eta_closed,
        "eta_from_eps": eta_from_eps,
        "equal": math.isclose(eta_closed, eta_from_eps, rel_tol=1e-15),
        "epsilon_max": EPSILON_MAX,
        "alpha_opt": ALPHA_OPT,
    }


# ----------------------------------------------------------------------
# Stirling numbers
# ----------------------------------------------------------------------
def stirling2(v: int, l: int, max_v: int = 25) -> int:
    """Stirling number of the second kind via the standard recurrence, exact."""
    if v > max_v:
        raise BudgetExceeded(f"v = {v} exceeds budget {max_v}")
    if l < 0 or v < 0 or l > v:
        return 0
    if v == 0:
        return 1 if l == 0 else 0
    row = [1] + [0] * v  # S(0, .)
    for i in range(1, v + 1):
        new = [0] * (v + 1)
        for j in range(1, i + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[l]


def stirling2_bound_ratio(max_v: int = 25) -> Fraction:
    """max of S(v,l) / (C(v,l) l^{v-l}) over 1 <= l <= v <= max_v."""
    best = Fraction(0)
    for v in range(1, max_v + 1):
        for l in range(1, v + 1):
            ratio = Fraction(stirling2(v, l), math.comb(v, l) * l ** (v - l))
            best = max(best, ratio)
    return best


# ----------------------------------------------------------------------
# the summed tail estimates
# ----------------------------------------------------------------------
def sum_chain_report(v_values: Sequence[int], n: int, alpha: float,
                     q: int, max_v: int = 20) -> list[dict]:
    """Left sides and claimed bounds of the two tree-sum tails, per v.

    sum1 runs l = 1 .. floor(alpha v) with summand C(v,l) l^{v/2+l} v^{v-2l}
    n^{-v/2+l}; sum2 runs l = floor(alpha v)+1 .. floor(v/2) with summand
    C(v,l) l^{5l/2} v^{v-2l} q^l n^{-l/2}.  Bounds are the closed forms the
    chain asserts up to constants; ratios are recorded, not asserted here.
    """
    out = []
    for v in v_values:
        if v > max_v:
            raise BudgetExceeded(f"v = {v} exceeds budget {max_v}")
        if v < 2:
            raise DomainError("v >= 2 required")
        split = math.floor(alpha * v)
        sum1 = 0.0
        for l in range(1, split + 1):
            sum1 += math.comb(v, l) * l ** (v / 2 + l) * float(v) ** (v - 2 * l) \
                * float(n) ** (-v / 2 + l)
        sum2 = 0.0
        for l in range(split + 1, v // 2 + 1):
            sum2 += math.comb(v, l) * float(l) ** (2.5 * l) * float(v) ** (v - 2 * l) \
                * float(q) ** l * float(n) ** (-l / 2)
        bound1 = float(v) ** (v * (1.5 - alpha) - 0.5) * float(n) ** (-v * (0.5 - alpha))
        bound2 = float(v) ** (v * (1.0 + alpha / 2) + 0.5) * float(q) ** (alpha * v + 1) \
            * float(n) ** (-alpha * v / 2 - 0.5)
        out.append({
            "v": v, "n": n, "q": q, "alpha": alpha,
            "sum1": sum1, "bound1": bound1,
            "ratio1": sum1 / bound1 if bound1 else math.inf,
            "sum2": sum2, "bound2": bound2,
            "ratio2": sum2 / bound2 if bound2 else math.inf,
        })
    return out


def geometric_tail_check(v: int, n: int, alpha: float) -> dict:
    """Exact check of sum_{l=1}^{floor(alpha v)} (n/v)^l <= 2 (n/v)^{floor(alpha v)}.

    Valid whenever n >= 2v; both sides exact rationals.
    """
    split = math.floor(alpha * v)
    ratio = Fraction(n, v)
    lhs = sum((ratio ** l for l in range(1, split + 1)), Fraction(0))
    rhs = 2 * ratio ** split if split >= 1 else Fraction(0)
    return {
        "v": v, "n": n, "alpha": alpha, "terms": split,
        "lhs": lhs, "rhs": rhs,
        "holds": lhs <= rhs if split >= 1 else lhs == 0,
        "premise": n >= 2 * v,
    }


def binomial_shift_check(v: int, m: int) -> dict:
    """Exact arithmetic behind the binomial index shift with m extra slots.

    The clean identity is C(v, l+m+1) C(l+m+1, m+1) = C(v, m+1) C(v-m-1, l).
    Bounding C(v, m+1) <= v^{m+1}/(m+1)! and C(l+m+1, m+1) >=
    ((l+m+1)/(m+1))^{m+1} gives, exactly,

        C(v, l+m+1) <= C(v-m-1, l) (l+m+1)^{-m-1} v^{m+1} (m+1)^{m+1}/(m+1)!

    The same display without the last factor (how the chain writes it, up to
    its absorbed constant) can fail; its worst ratio is reported.
    """
    identity_ok = True
    corrected_ok = True
    raw_max = Fraction(0)
    fac = math.factorial(m + 1)
    for l in range(0, v - m):
        lhs = Fraction(math.comb(v, l + m + 1))
        if lhs * math.comb(l + m + 1, m + 1) != \
                Fraction(math.comb(v, m + 1)) * math.comb(v - m - 1, l):
            identity_ok = False
        raw_rhs = Fraction(math.comb(v - m - 1, l)) * Fraction(
            v ** (m + 1), (l + m + 1) ** (m + 1))
        if raw_rhs:
            raw_max = max(raw_max, lhs / raw_rhs)
        if lhs > raw_rhs * Fraction((m + 1) ** (m + 1), fac):
            corrected_ok = False
    return {
        "v": v, "m": m,
        "identity_holds": identity_ok,
        "corrected_holds": corrected_ok,
        "raw_max_ratio": raw_max,
        "stirling_factor": Fraction((m + 1) ** (m + 1), fac),
    }


# ----------------------------------------------------------------------
# parameter validation and reports
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class ParameterSet:
    """Derived Riesz-product parameters with their validity flags."""

    n: int
    epsilon: float
    a: float
    b: float
    q_real: float
    q: int
    rho: float
    rho_tilde: float
    divides: bool
    regime_psi_l1: bool       # b < 1/4 and eps < min(1/3, 1/(1+12b))
    regime_tail_l1: bool      # eps < (8 - sqrt 41)/23


def validate_parameters(n: int, epsilon: float, a: float, b: float) -> ParameterSet:
    """Compute q, rho, rho~ and flag which norm-estimate regimes apply."""
    if b >= 0.25:
        raise ParameterDomain(f"b must satisfy b < 1/4, got {b}")
    if n < 2:
        raise ParameterDomain(f"n must be >= 2, got {n}")
    q_real = float(n) ** epsilon
    q = max(1, round(q_real))
    rho = math.sqrt(q) / n
    rho_tilde = a * q ** b / n
    return ParameterSet(
        n=n, epsilon=epsilon, a=a, b=b,
        q_real=q_real, q=q, rho=rho, rho_tilde=rho_tilde,
        divides=(n % q == 0),
        regime_psi_l1=(b < 0.25 and epsilon < min(1.0 / 3.0, 1.0 / (1.0 + 12.0 * b))),
        regime_tail_l1=(epsilon < EPSILON_MAX),
    )


def lambert_gain_report(l_values: Sequence[int], v_values: Sequence[int],
                        kappa: float = 1.0 / 1711.0) -> list[dict]:
    """W(z0) over a grid of (l, v), z0 = (e/2) l^{1/4} v^{29/8}.

    Reports whether W(z0) > 79/20 and the constant gap W(z0) - z0^kappa; the
    surrounding chain is reported, not asserted, because its absolute
    constants are left open.
    """
    out = []
    for l in l_values:
        for v in v_values:
            z0 = 0.5 * math.e * l ** 0.25 * float(v) ** (29.0 / 8.0)
            w = lambert_w0(z0)
            out.append({
                "l": l, "v": v, "z0": z0, "w": w,
                "w_exceeds_79_20": w > 79.0 / 20.0,
                "kappa_gap": w - z0 ** kappa,
            })
    return out


def constants_report(grid_step: float = 1e-6) -> dict:
    """The JSON payload behind the `constants` surface: every closed form,
    the identity residuals, and the grid-search confirmation."""
    opt = optimize_alpha(grid_step)
    eta = eta_bound()
    identity_residual = abs(eta["eta_closed"] - eta["eta_from_eps"]) \
        / eta["eta_closed"]
    return {
        "eta": eta["eta_closed"],
        "eta_from_eps": eta["eta_from_eps"],
        "identity_residual": identity_residual,
        "epsilon_max": EPSILON_MAX,
        "epsilon_max_evaluated": epsilon_tau(ALPHA_OPT),
        "alpha_opt": ALPHA_OPT,
        "alpha_opt_grid": opt.alpha_opt,
        "alpha_grid_error": abs(opt.alpha_opt - ALPHA_OPT),
        "epsilon_max_grid": opt.epsilon_max,
        "active_terms": list(opt.active_terms),
        "eta_max_grid": opt.eta_max,
        "stirling_s42": stirling2(4, 2),
        "stirling_bound_ratio": float(stirling2_bound_ratio(12)),
        "lambert_roundtrip_5": lambert_w0(5.0) * math.exp(lambert_w0(5.0)),
    }
