"""The radial potential of the Ricci-flat metric of Calabi type.

On the total space of a negative power of the canonical bundle over a
compact Einstein base of complex dimension n, the rotation-invariant
Kaehler potential u(x) of the Ricci-flat metric is characterized by

    u(0) = 0,  u'(0) = c > 0,
    (1 + k0 x u'(x))^{n-1} (u'(x) + x u''(x)) = c   for x >= 0,

with k0 > 0 the Einstein normalization of the base. This module computes
the Taylor data of u at 0 by two independent routes and evaluates the
closed form numerically:

* ``u_coeffs_closed``: the explicit product formula for
  a_j = u^(j)(0), exact rationals;
* ``u_coeffs_ode``: forward substitution on the truncated defining
  condition, exact rationals, no knowledge of the product formula;
* ``u_coeffs``: both, with exact agreement enforced;
* ``ClosedFormEvaluator``: double-precision values of u, u', u'' away
  from 0, via the n-th root t(x) = (1 + n k0 c x)^{1/n} and
  principal-branch logarithms against the nontrivial n-th roots of
  unity (the imaginary parts must cancel; a residue above tolerance
  raises rather than silently returning a wrong branch);
* ``h_r`` / ``h_values``: the exact constants
  h_r = (1/r!) sum_j m^j B_{r,j}(a_1..a_r) that scale the degree-r
  blocks in the diastasis expansion of e^{m u} - 1.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

from .bell import BellTable
from .rationals import Rational, factorial
from .series import TruncatedSeries

__all__ = [
    "CalabiParams",
    "CoefficientSequence",
    "CoefficientMethodMismatch",
    "BranchResidueError",
    "u_coeffs_closed",
    "u_coeffs_ode",
    "u_coeffs",
    "taylor_series",
    "condition_series_residual",
    "HrValue",
    "h_r",
    "h_values",
    "ConditionReport",
    "ClosedFormEvaluator",
]


class CoefficientMethodMismatch(ArithmeticError):
    """The closed-form and forward-substitution coefficient routes disagreed."""


class BranchResidueError(ArithmeticError):
    """Imaginary parts of the closed form failed to cancel within tolerance."""


def _exact(value: Rational | int | str, what: str) -> Fraction:
    if isinstance(value, float):
        raise TypeError(f"{what} must be exact (int, Fraction, or 'p/q'), not float")
    return Fraction(value)


@dataclass(frozen=True)
class CalabiParams:
    """Parameters of the radial potential.

    n  -- complex dimension of the base, integer >= 2
    k0 -- Einstein normalization of the base metric, rational > 0
    c  -- scale fixing u'(0) = c, rational > 0
    """

    n: int
    k0: Fraction
    c: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "k0", _exact(self.k0, "k0"))
        object.__setattr__(self, "c", _exact(self.c, "c"))
        if self.k0 <= 0:
            raise ValueError(f"k0 must be positive, got {self.k0}")
        if self.c <= 0:
            raise ValueError(f"c must be positive, got {self.c}")

    @property
    def radicand_slope(self) -> Fraction:
        """n * k0 * c: the slope inside the n-th root of the closed form.

        Also the reciprocal of the Taylor radius of convergence at 0.
        """
        return self.n * self.k0 * self.c


@dataclass(frozen=True)
class CoefficientSequence:
    """Exact derivatives a_j = u^(j)(0) for j = 1..order."""

    params: CalabiParams
    values: tuple[Fraction, ...]
    method: str

    _METHODS = ("closed-form", "ode", "cross-checked")

    def __post_init__(self) -> None:
        if self.method not in self._METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @property
    def order(self) -> int:
        return len(self.values)

    def a(self, j: int) -> Fraction:
        """The j-th derivative at 0, 1-based."""
        if not 1 <= j <= self.order:
            raise IndexError(f"derivative index {j} outside 1..{self.order}")
        return self.values[j - 1]


def u_coeffs_closed(params: CalabiParams, order: int) -> CoefficientSequence:
    """Derivatives at 0 from the explicit product formula.

    a_j = ((-1)^{j+1} / j) * c^j * k0^{j-1} * prod_{s=1}^{j-1} (n s - 1).

    The product is never zero for n >= 2, so the signs alternate strictly
    starting from a_1 = c > 0.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    values = []
    c_power = params.c          # c^j
    k_power = Fraction(1)       # k0^{j-1}
    prod = 1                    # prod_{s=1}^{j-1} (n s - 1)
    for j in range(1, order + 1):
        if j > 1:
            c_power *= params.c
            k_power *= params.k0
            prod *= params.n * (j - 1) - 1
        sign = 1 if j % 2 == 1 else -1
        values.append(sign * c_power * k_power * prod / j)
    return CoefficientSequence(params, tuple(values), "closed-form")


def u_coeffs_ode(params: CalabiParams, order: int) -> CoefficientSequence:
    """Derivatives at 0 by forward substitution on the defining condition.

    Writing u'(x) = sum_{r>=0} v_r x^r, w = k0 x u' and P = (1 + w)^{n-1},
    the condition P * (u' + x u'') = c matched at x^r gives

        r = 0:   v_0 = c
        r >= 1:  (r + 1) v_r = - sum_{s=1}^{r} P_s (r - s + 1) v_{r-s},

    where P is produced alongside by the logarithmic-derivative recurrence
    r P_r = sum_{i=1}^{r} ((n-1) i - (r - i)) w_i P_{r-i}. The unknown
    enters linearly with coefficient r + 1, so each step is one exact
    division. a_j = (j-1)! v_{j-1}.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    top = order - 1
    alpha = params.n - 1
    v = [params.c] + [Fraction(0)] * top
    w = [Fraction(0)] * (top + 1)
    p = [Fraction(1)] + [Fraction(0)] * top
    for r in range(1, top + 1):
        w[r] = params.k0 * v[r - 1]
        p[r] = sum((alpha * i - (r - i)) * w[i] * p[r - i] for i in range(1, r + 1)) / r
        v[r] = -sum(p[s] * (r - s + 1) * v[r - s] for s in range(1, r + 1)) / (r + 1)
    values = tuple(factorial(j - 1) * v[j - 1] for j in range(1, order + 1))
    return CoefficientSequence(params, values, "ode")


def u_coeffs(params: CalabiParams, order: int) -> CoefficientSequence:
    """Both routes, compared entry by entry; exact agreement is mandatory.

    A mismatch is an internal-consistency failure, not a user error, and
    raises ``CoefficientMethodMismatch`` naming the first bad index.
    """
    closed = u_coeffs_closed(params, order)
    ode = u_coeffs_ode(params, order)
    if closed.values != ode.values:
        for j in range(1, order + 1):
            if closed.a(j) != ode.a(j):
                raise CoefficientMethodMismatch(
                    f"coefficient routes disagree at j={j} for n={params.n}, "
                    f"k0={params.k0}, c={params.c}: "
                    f"closed-form {closed.a(j)} vs forward substitution {ode.a(j)}"
                )
    return CoefficientSequence(params, ode.values, "cross-checked")


def taylor_series(coeffs: CoefficientSequence) -> TruncatedSeries:
    """u as an exact truncated series: constant term 0, [x^j] = a_j / j!."""
    terms = [Fraction(0)] + [coeffs.a(j) / factorial(j) for j in range(1, coeffs.order + 1)]
    return TruncatedSeries(tuple(terms))


def condition_series_residual(params: CalabiParams, order: int) -> TruncatedSeries:
    """(1 + k0 x u')^{n-1} (u' + x u'') - c as an exact truncated series.

    Built from the forward-substitution coefficients with the generic
    series arithmetic (an independent re-expansion of the condition);
    identically zero through the requested order when the solver is
    consistent.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    depth = order + 1
    seq = u_coeffs_ode(params, depth + 1)
    u_prime = TruncatedSeries(tuple(seq.values[k] / factorial(k) for k in range(depth + 1)))
    x = TruncatedSeries.x(depth)
    horizontal = 1 + params.k0 * (x * u_prime)
    fiber = u_prime + x * u_prime.derivative()
    return horizontal.pow_int(params.n - 1) * fiber - params.c


@dataclass(frozen=True)
class HrValue:
    """One block-scale constant: h_r at twist multiple m."""

    r: int
    m: Fraction
    value: Fraction


def _h_from_table(table: BellTable, m: Fraction, r: int) -> Fraction:
    acc = Fraction(0)
    m_power = Fraction(1)
    for j in range(1, r + 1):
        m_power *= m
        acc += m_power * table.value(r, j)
    return acc / factorial(r)


def h_values(params: CalabiParams, m: Rational | int, r_max: int) -> tuple[HrValue, ...]:
    """h_1..h_{r_max} sharing one coefficient sequence and one Bell table.

    h_r = (1/r!) sum_{j=1}^{r} m^j B_{r,j}(a_1, ..., a_r); these are the
    r-th Taylor coefficients of e^{m u(x)} at 0, i.e. the scales of the
    degree-r blocks in the fiberwise expansion of the embedding candidate.
    """
    m = _exact(m, "m")
    if m <= 0:
        raise ValueError(f"m must be positive, got {m}")
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    seq = u_coeffs(params, r_max)
    table = BellTable(seq.values)
    return tuple(HrValue(r, m, _h_from_table(table, m, r)) for r in range(1, r_max + 1))


def h_r(params: CalabiParams, m: Rational | int, r: int) -> HrValue:
    """A single block-scale constant; see ``h_values`` for batches."""
    return h_values(params, m, r)[-1]


@dataclass(frozen=True)
class ConditionReport:
    """Pointwise numeric check of the defining condition at one x.

    horizontal_factor = 1 + k0 x u'(x)   (must stay positive)
    fiber_factor      = u'(x) + x u''(x) (must stay positive)
    ode_residual      = (horizontal^{n-1} * fiber - c) / c
    imaginary_residue = largest |Im| left over by the complex closed form
    """

    x: float
    horizontal_factor: float
    fiber_factor: float
    ode_residual: float
    imaginary_residue: float


class ClosedFormEvaluator:
    """Double-precision evaluation of u, u', u'' from the closed form.

    The closed form is, with t(x) = (1 + n k0 c x)^{1/n} and
    tau = exp(2 pi i / n),

        u(x) = (n/k0)(t - 1)
               - sum_{j=1}^{n-1} ((1 - tau^j)/k0) log[(t - tau^j)/(1 - tau^j)]

    For x >= 0 the root t is real >= 1 and every log argument stays in
    the half plane Re > 0, so principal branches are safe and the
    imaginary parts cancel in conjugate pairs. The leftover imaginary
    residue is checked against ``imag_tol`` on every call; exceeding it
    means a branch was crossed and raises ``BranchResidueError`` instead
    of returning a silently wrong value.
    """

    def __init__(self, params: CalabiParams, imag_tol: float = 1e-10):
        self.params = params
        self.imag_tol = float(imag_tol)
        self._n = params.n
        self._k0 = float(params.k0)
        self._c = float(params.c)
        self._slope = float(params.radicand_slope)
        self._roots = tuple(
            cmath.exp(2j * cmath.pi * j / params.n) for j in range(1, params.n)
        )
        self._weights = tuple((1 - root) / self._k0 for root in self._roots)

    def _t(self, x: float) -> float:
        if x < 0:
            raise ValueError(f"the potential is defined for x >= 0, got {x}")
        return (1.0 + self._slope * x) ** (1.0 / self._n)

    def _guard(self, value: complex, x: float, what: str) -> tuple[float, float]:
        residue = abs(value.imag)
        if residue > self.imag_tol:
            raise BranchResidueError(
                f"imaginary residue {residue:.3e} in {what} at x={x} "
                f"exceeds tolerance {self.imag_tol:.1e}"
            )
        return value.real, residue

    def u_with_residue(self, x: float) -> tuple[float, float]:
        """(u(x), imaginary residue of the complex sum)."""
        t = self._t(x)
        total = complex(self._n / self._k0 * (t - 1.0))
        for root, weight in zip(self._roots, self._weights):
            total -= weight * cmath.log((t - root) / (1.0 - root))
        return self._guard(total, x, "u")

    def u(self, x: float) -> float:
        return self.u_with_residue(x)[0]

    def derivatives(self, x: float) -> tuple[float, float, float]:
        """(u(x), u'(x), u''(x)) by termwise differentiation, same guard."""
        u_val, u1_val, u2_val, _ = self._parts(x)
        return u_val, u1_val, u2_val

    def _parts(self, x: float) -> tuple[float, float, float, float]:
        t = self._t(x)
        dt = (self._slope / self._n) * t ** (1 - self._n)
        d2t = (self._slope / self._n) * (1 - self._n) * t ** (-self._n) * dt
        u_acc = complex(self._n / self._k0 * (t - 1.0))
        u1_acc = complex(self._n / self._k0 * dt)
        u2_acc = complex(self._n / self._k0 * d2t)
        for root, weight in zip(self._roots, self._weights):
            gap = t - root
            u_acc -= weight * cmath.log(gap / (1.0 - root))
            u1_acc -= weight * dt / gap
            u2_acc -= weight * (d2t / gap - (dt * dt) / (gap * gap))
        u_val, res0 = self._guard(u_acc, x, "u")
        u1_val, res1 = self._guard(u1_acc, x, "u'")
        u2_val, res2 = self._guard(u2_acc, x, "u''")
        return u_val, u1_val, u2_val, max(res0, res1, res2)

    def condition_report(self, x: float) -> ConditionReport:
        _, u1, u2, residue = self._parts(x)
        horizontal = 1.0 + self._k0 * x * u1
        fiber = u1 + x * u2
        residual = (horizontal ** (self._n - 1) * fiber - self._c) / self._c
        return ConditionReport(x, horizontal, fiber, residual, residue)

    def derivative_fd(self, x: float, step: float | None = None) -> float:
        """u'(x) by finite differences, independent of the formulas above.

        Central 2-point with h = 1e-5 (1 + x) by default; second-order
        one-sided at the left endpoint where x - h would leave the domain.
        """
        h = step if step is not None else 1e-5 * (1.0 + x)
        if x - h >= 0:
            return (self.u(x + h) - self.u(x - h)) / (2 * h)
        return (-3 * self.u(x) + 4 * self.u(x + h) - self.u(x + 2 * h)) / (2 * h)
