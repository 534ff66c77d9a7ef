"""Profile polynomials of the reduced rotation-invariant extremal equation.

A U(n)-invariant Kahler metric on C^n \\ {0} is encoded by its momentum
profile g(s) = s u'(s), s = |z|^2, which under the extremal condition
satisfies the autonomous equation

    s g'(s) = F(g(s)),
    F(g) = (c4 g^{n+2} + c3 g^{n+1} + g^n + c1 g + c0) / g^{n-1}.

After cancelling common powers of g between numerator and denominator we
write F = H(g) / g^m.  Everything downstream is driven by H: its real roots
bound the admissible range (A, B) of g, their multiplicities and signs
decide which solution family the coefficients realize, and the scalar
curvature is the affine function

    R(s) = -(n+2)(n+1) c4 g(s) - (n+1) n c3.

This module builds H, isolates its roots, locates admissible windows, and
classifies coefficient sets into the published solution cases.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import AmbiguousWindow, IllConditioned, NoWindow, Unclassifiable

# |c4| below this is treated as exactly zero: the extremal/cscK split is
# exactly the c4 = 0 split, and smaller values are numerically meaningless.
DEGENERATE_LEADING = 1e-12

_DEFAULT_ROOT_TOL = 1e-10


class Theorem(enum.Enum):
    """Which classification list a case label belongs to."""

    SMOOTH_CN = "SmoothCn"
    SCALAR_FLAT_C2 = "ScalarFlatC2"
    POSITIVE_CSCK_C2 = "PositiveCscKC2"
    EXTREMAL_C2 = "ExtremalC2"


_CASE_RANGES = {
    Theorem.SMOOTH_CN: range(1, 5),
    Theorem.SCALAR_FLAT_C2: range(1, 5),
    Theorem.POSITIVE_CSCK_C2: range(1, 5),
    Theorem.EXTREMAL_C2: range(1, 14),
}


@dataclass(frozen=True)
class Coefficients:
    """The four free constants (c0, c1, c3, c4) of the profile equation."""

    c0: float = 0.0
    c1: float = 0.0
    c3: float = 0.0
    c4: float = 0.0

    def __post_init__(self):
        for name in ("c0", "c1", "c3", "c4"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"coefficient {name} must be finite, got {v}")


@dataclass(frozen=True)
class ProfilePolynomial:
    """Numerator H and denominator exponent m of F = H(g)/g^m.

    ``coeffs`` holds H in ascending powers with the leading coefficient
    nonzero; ``denom_exponent`` is m (0 <= m <= n-1).
    """

    coeffs: tuple[float, ...]
    denom_exponent: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def h(self, g):
        """Evaluate H(g) by Horner's rule (works on scalars and arrays)."""
        return npoly.polyval(g, self.coeffs)

    def h_deriv(self, g, order: int = 1):
        return npoly.polyval(g, npoly.polyder(self.coeffs, order))


@dataclass(frozen=True)
class RootMultiset:
    """Real roots (value, multiplicity), ascending, plus conjugate pairs
    a +- ib stored as (a, b) with b > 0 (repeated once per multiplicity)."""

    roots: tuple[tuple[float, int], ...]
    complex_pairs: tuple[tuple[float, float], ...] = ()

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots) + 2 * len(self.complex_pairs)

    def multiplicity_at(self, value: float) -> int:
        for r, m in self.roots:
            if r == value:
                return m
        raise KeyError(f"{value} is not a recorded root")


@dataclass(frozen=True)
class AdmissibleWindow:
    """Successive nonnegative roots (A, B) of H with H > 0 in between.

    ``B`` is ``math.inf`` when the window is unbounded (only possible when
    deg H <= m + 1); ``B_mult`` is 0 in that case.
    """

    A: float
    B: float
    A_mult: int
    B_mult: int

    @property
    def finite(self) -> bool:
        return math.isfinite(self.B)

    @property
    def width(self) -> float:
        return self.B - self.A

    def midpoint(self) -> float:
        return 0.5 * (self.A + self.B) if self.finite else self.A + 1.0


@dataclass(frozen=True)
class CaseLabel:
    theorem: Theorem
    case_index: int
    descriptor: str = ""

    def __post_init__(self):
        if self.case_index not in _CASE_RANGES[self.theorem]:
            raise ValueError(
                f"case {self.case_index} outside the published range for "
                f"{self.theorem.value}"
            )

    def __str__(self):
        tail = f" ({self.descriptor})" if self.descriptor else ""
        return f"{self.theorem.value} case {self.case_index}{tail}"


@dataclass(frozen=True)
class ProfileModel:
    """A coefficient set together with its derived polynomial data."""

    n: int
    coeffs: Coefficients
    poly: ProfilePolynomial
    roots: RootMultiset
    window: AdmissibleWindow


# ---------------------------------------------------------------------------
# Building and evaluating F = H/g^m
# ---------------------------------------------------------------------------

def build_profile(n: int, c: Coefficients) -> ProfilePolynomial:
    """Assemble the trimmed numerator H and exponent m of F = H/g^m.

    The raw numerator is c4 g^{n+2} + c3 g^{n+1} + g^n + c1 g + c0 over
    g^{n-1}; common powers of g are cancelled, so

      * c0 != 0            ->  H = full numerator,               m = n-1
      * c0 == 0, c1 != 0   ->  H = c4 g^{n+1}+c3 g^n+g^{n-1}+c1, m = n-2
      * c0 == c1 == 0      ->  H = c4 g^3 + c3 g^2 + g,          m = 0
    """
    if n < 2:
        raise ValueError(f"dimension n must be >= 2, got {n}")
    c4 = 0.0 if abs(c.c4) < DEGENERATE_LEADING else c.c4
    num = np.zeros(n + 3)
    num[0] = c.c0
    num[1] += c.c1
    num[n] += 1.0
    num[n + 1] += c.c3
    num[n + 2] += c4
    m = n - 1
    if c.c0 == 0.0:
        cancel = 1 if c.c1 != 0.0 else m
        num = num[cancel:]
        m -= cancel
    coeffs = npoly.polytrim(num, tol=0.0)
    while len(coeffs) > 1 and abs(coeffs[-1]) < DEGENERATE_LEADING:
        coeffs = coeffs[:-1]
    return ProfilePolynomial(tuple(float(v) for v in coeffs), m)


def eval_profile(P: ProfilePolynomial, g):
    """F(g) = H(g)/g^m.  Raises for g = 0 when m > 0."""
    m = P.denom_exponent
    if m > 0 and np.any(np.asarray(g) == 0.0):
        raise ZeroDivisionError("F(g) has a pole at g = 0 for this profile")
    return P.h(g) / g**m if m else P.h(g)


def eval_profile_derivative(P: ProfilePolynomial, g):
    """dF/dg from the polynomial quotient rule (never finite differences)."""
    m = P.denom_exponent
    if m == 0:
        return P.h_deriv(g)
    if np.any(np.asarray(g) == 0.0):
        raise ZeroDivisionError("F'(g) has a pole at g = 0 for this profile")
    return (P.h_deriv(g) * g - m * P.h(g)) / g ** (m + 1)


def eval_profile_second_derivative(P: ProfilePolynomial, g):
    m = P.denom_exponent
    if m == 0:
        return P.h_deriv(g, 2)
    if np.any(np.asarray(g) == 0.0):
        raise ZeroDivisionError("F''(g) has a pole at g = 0 for this profile")
    return (
        P.h_deriv(g, 2) * g * g
        - 2.0 * m * P.h_deriv(g) * g
        + m * (m + 1) * P.h(g)
    ) / g ** (m + 2)


# ---------------------------------------------------------------------------
# Real-root isolation
# ---------------------------------------------------------------------------

def find_real_roots(P: ProfilePolynomial, tol: float = _DEFAULT_ROOT_TOL) -> RootMultiset:
    """Isolate the real roots of H with multiplicities, plus conjugate pairs.

    Companion-matrix eigenvalues give a backward-stable root multiset; a
    multiple root of multiplicity k comes back as a cluster of k values
    split by O(eps^{1/k}), whose mean recovers the root to near machine
    precision.  We therefore cluster eigenvalues in the complex plane
    (merge radius max(1e3*tol, 1e-7) scaled by root size, per the stated
    multiplicity-merging rule), average each cluster, and polish simple
    roots by Newton on H and k-fold roots by Newton on H^{(k-1)}.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    deg = P.degree
    if deg == 0:
        return RootMultiset(())
    eig = np.roots(P.coeffs[::-1])
    scale = 1.0 + max(abs(eig.real).max(), abs(eig.imag).max())
    radius = max(1e3 * tol, 1e-7) * scale

    clusters: list[list[complex]] = []
    for z in sorted(eig, key=lambda w: (w.real, w.imag)):
        for cl in clusters:
            mean = sum(cl) / len(cl)
            if abs(z - mean) <= radius:
                cl.append(z)
                break
        else:
            clusters.append([z])

    real_roots: list[tuple[float, int]] = []
    upper_pairs: list[tuple[float, float, int]] = []
    for cl in clusters:
        mean = sum(cl) / len(cl)
        k = len(cl)
        if abs(mean.imag) <= radius:
            real_roots.append((_polish_real(P, mean.real, k), k))
        elif mean.imag > 0:
            z = _polish_complex(P, mean) if k == 1 else mean
            upper_pairs.append((z.real, abs(z.imag), k))

    real_roots.sort()
    for (r1, _), (r2, _) in zip(real_roots, real_roots[1:]):
        if r2 - r1 < tol:
            raise IllConditioned(
                f"distinct roots {r1} and {r2} are closer than tol={tol}"
            )
    pairs = []
    for a, b, k in sorted(upper_pairs):
        pairs.extend([(a, b)] * k)
    out = RootMultiset(tuple(real_roots), tuple(pairs))
    if out.total_multiplicity != deg:
        raise IllConditioned(
            "root clustering lost multiplicity "
            f"(got {out.total_multiplicity}, expected {deg})"
        )
    return out


def _polish_real(P: ProfilePolynomial, x: float, mult: int) -> float:
    # A k-fold root of H is a simple root of H^(k-1); Newton there converges
    # quadratically and cannot be derailed by the flat contact of H itself.
    c = P.coeffs
    for _ in range(mult - 1):
        c = npoly.polyder(c)
    dc = npoly.polyder(c)
    for _ in range(8):
        f = npoly.polyval(x, c)
        df = npoly.polyval(x, dc)
        if df == 0.0:
            break
        step = f / df
        x_new = x - step
        if not math.isfinite(x_new):
            break
        x = x_new
        if abs(step) <= 1e-16 * (1.0 + abs(x)):
            break
    return float(x)


def _polish_complex(P: ProfilePolynomial, z: complex) -> complex:
    c = P.coeffs
    dc = npoly.polyder(c)
    for _ in range(8):
        df = npoly.polyval(z, dc)
        if df == 0:
            break
        step = npoly.polyval(z, c) / df
        z_new = z - step
        if not (math.isfinite(z_new.real) and math.isfinite(z_new.imag)):
            break
        z = z_new
        if abs(step) <= 1e-16 * (1.0 + abs(z)):
            break
    return z


# ---------------------------------------------------------------------------
# Admissible windows
# ---------------------------------------------------------------------------

def admissible_windows(P: ProfilePolynomial, R: RootMultiset) -> list[AdmissibleWindow]:
    """All intervals (A, B) of successive nonnegative roots with H > 0 inside.

    B = +inf is admitted only when deg H <= m + 1 (otherwise g cannot grow
    without bound) and H stays positive beyond the last root.
    """
    zero_snap = 1e-12 * (1.0 + max((abs(r) for r, _ in R.roots), default=0.0))
    vals = []
    for r, mult in R.roots:
        v = 0.0 if abs(r) <= zero_snap else r
        if v >= 0.0:
            vals.append((v, mult))
    windows = []
    for (a, ma), (b, mb) in zip(vals, vals[1:]):
        if _positive_between(P, a, b):
            windows.append(AdmissibleWindow(a, b, ma, mb))
    if vals and P.degree <= P.denom_exponent + 1 and P.leading > 0.0:
        a, ma = vals[-1]
        probe = np.linspace(a + 1.0, a + 100.0, 8)
        if np.all(P.h(probe) > 0.0):
            windows.append(AdmissibleWindow(a, math.inf, ma, 0))
    return windows


def _positive_between(P: ProfilePolynomial, a: float, b: float) -> bool:
    x = a + (b - a) * np.linspace(0.08, 0.92, 9)
    return bool(np.all(P.h(x) > 0.0))


def admissible_window(
    P: ProfilePolynomial,
    R: RootMultiset,
    index: Optional[int] = None,
) -> AdmissibleWindow:
    """The unique admissible window, or the ``index``-th when several exist.

    Raises NoWindow when the coefficients admit no positive increasing
    solution, and AmbiguousWindow when a choice is required but not given.
    """
    windows = admissible_windows(P, R)
    if not windows:
        raise NoWindow("no successive nonnegative roots with H > 0 between them")
    if index is not None:
        if not 0 <= index < len(windows):
            raise NoWindow(f"window_index {index} out of range ({len(windows)} found)")
        return windows[index]
    if len(windows) > 1:
        raise AmbiguousWindow(windows)
    return windows[0]


# ---------------------------------------------------------------------------
# Scalar curvature and classification
# ---------------------------------------------------------------------------

def scalar_curvature_affine_coeffs(n: int, c: Coefficients) -> tuple[float, float]:
    """R(s) = slope * g(s) + intercept with slope = -(n+2)(n+1)c4 and
    intercept = -(n+1)n c3."""
    c4 = 0.0 if abs(c.c4) < DEGENERATE_LEADING else c.c4
    return (-(n + 2) * (n + 1) * c4, -(n + 1) * n * c.c3)


def classify(
    n: int,
    c: Coefficients,
    window: AdmissibleWindow,
    roots: RootMultiset,
) -> CaseLabel:
    """Assign the unique published case for an admissible coefficient set.

    Dispatch: c4 = 0 goes to the constant-scalar-curvature lists (scalar
    flat when c3 = 0, positive when c3 < 0); c4 != 0 with c0 = c1 = 0 goes
    to the smooth-at-origin list via the root pattern of c4 g^2 + c3 g + 1;
    everything else lands in the singular-origin extremal list according to
    root multiplicities and which roots bound the window.
    """
    c4 = 0.0 if abs(c.c4) < DEGENERATE_LEADING else c.c4
    c3 = 0.0 if abs(c.c3) < DEGENERATE_LEADING else c.c3
    smooth_origin = c.c0 == 0.0 and c.c1 == 0.0

    if c4 == 0.0:
        if n == 2:
            if c3 == 0.0:
                return _classify_scalar_flat(c, window, roots)
            if c3 < 0.0:
                return _classify_positive_csck(c, window, roots)
            raise Unclassifiable(
                "negative constant scalar curvature (R = -(n+1)n c3 < 0) "
                "admits no positive increasing solution"
            )
        if smooth_origin:
            return CaseLabel(Theorem.SMOOTH_CN, 1, "constant scalar curvature")
        raise Unclassifiable(
            "constant-scalar-curvature classification away from the origin "
            "is only available for n = 2"
        )

    if smooth_origin:
        return _classify_smooth_cn(c4, window, roots)
    if n != 2:
        raise Unclassifiable(
            "origin-singular extremal classification is only available for n = 2"
        )
    return _classify_extremal_c2(c, window, roots)


def _window_bounds_as_roots(window, roots):
    simple = [(r, m) for r, m in roots.roots]
    lo = next(((r, m) for r, m in simple if _same_root(r, window.A)), None)
    hi = None
    if window.finite:
        hi = next(((r, m) for r, m in simple if _same_root(r, window.B)), None)
    return lo, hi


def _same_root(r: float, v: float) -> bool:
    return abs(r - v) <= 1e-9 * (1.0 + abs(v))


def _classify_scalar_flat(c, window, roots) -> CaseLabel:
    th = Theorem.SCALAR_FLAT_C2
    if c.c0 == 0.0 and c.c1 == 0.0:
        return CaseLabel(th, 1, "Euclidean family")
    if c.c0 == 0.0:
        return CaseLabel(th, 2, "Burns family")
    mults = sorted(m for _, m in roots.roots)
    if mults == [1, 1]:
        return CaseLabel(th, 3, "LeBrun ALE family (Eguchi-Hanson at k=2)")
    if mults == [2]:
        return CaseLabel(th, 4, "complete scalar-flat on the punctured plane")
    raise Unclassifiable("scalar-flat quadratic numerator with no real window")


def _classify_positive_csck(c, window, roots) -> CaseLabel:
    th = Theorem.POSITIVE_CSCK_C2
    if c.c0 == 0.0 and c.c1 == 0.0:
        return CaseLabel(th, 1, "Fubini-Study family")
    lo, hi = _window_bounds_as_roots(window, roots)
    if c.c0 == 0.0:
        if lo and hi and lo[1] == 1 and hi[1] == 1:
            return CaseLabel(th, 2, "cscK cone between two sections")
        raise Unclassifiable("positive cscK quadratic with degenerate window")
    if lo and hi:
        if lo[1] == 1 and hi[1] == 1 and len(roots.roots) == 3:
            return CaseLabel(th, 3, "positive cscK, three simple roots")
        if lo[1] == 2 and hi[1] == 1:
            return CaseLabel(th, 4, "positive cscK on a positive line bundle")
    raise Unclassifiable("positive cscK cubic with unrecognized root pattern")


def _classify_smooth_cn(c4, window, roots) -> CaseLabel:
    th = Theorem.SMOOTH_CN
    # H = g (c4 g^2 + c3 g + 1); the window is (0, beta) and the quadratic's
    # root pattern decides the case.
    if not _same_root(window.A, 0.0):
        raise Unclassifiable("smooth-origin profile with a window not starting at 0")
    others = [(r, m) for r, m in roots.roots if not _same_root(r, 0.0)]
    pos = [(r, m) for r, m in others if r > 0.0]
    neg = [(r, m) for r, m in others if r < 0.0]
    if len(pos) == 1 and pos[0][1] == 2 and not neg and not roots.complex_pairs:
        return CaseLabel(th, 2, "Biquard family")
    if len(pos) == 1 and len(neg) == 1 and pos[0][1] == neg[0][1] == 1:
        return CaseLabel(th, 3, "weighted projective orbifold family")
    if len(pos) == 2 and all(m == 1 for _, m in pos) and not neg:
        return CaseLabel(th, 4, "Gauduchon cone family")
    raise Unclassifiable(
        "smooth-origin cubic admits a window only with a positive double "
        "root or two simple roots straddling/above the window"
    )


def _classify_extremal_c2(c, window, roots) -> CaseLabel:
    th = Theorem.EXTREMAL_C2
    lo, hi = _window_bounds_as_roots(window, roots)
    if lo is None or hi is None:
        raise Unclassifiable("extremal window must be bounded by real roots")
    (A, mA), (B, mB) = lo, hi
    others = [
        (r, m)
        for r, m in roots.roots
        if not (_same_root(r, A) or _same_root(r, B))
    ]
    npairs = len(roots.complex_pairs)

    if c.c0 == 0.0:
        # cubic numerator, F polynomial
        if (mA, mB) == (1, 2) and not others:
            return CaseLabel(th, 3, "double upper root, window (alpha, beta)")
        if (mA, mB) == (1, 1) and len(others) == 1:
            r = others[0][0]
            if r < A:
                return CaseLabel(th, 4, "third root below zero")
            return CaseLabel(th, 5, "third root above the window")
        raise Unclassifiable("cubic extremal numerator with unrecognized pattern")

    # quartic numerator
    if npairs == 1 and (mA, mB) == (1, 1) and not others:
        return CaseLabel(th, 13, "conjugate-pair quartic, window (alpha, beta)")
    if npairs:
        raise Unclassifiable("conjugate pair coexisting with an unexpected window")
    if (mA, mB) == (2, 2) and not others:
        return CaseLabel(th, 6, "double roots at both ends")
    if (mA, mB) == (2, 1) and len(others) == 1 and others[0][0] > B:
        return CaseLabel(th, 7, "double lower root, simple roots above")
    if (mA, mB) == (1, 1) and len(others) == 1 and others[0][1] == 2:
        r = others[0][0]
        if r < A:
            return CaseLabel(th, 8, "double root below the window")
        raise Unclassifiable("double root above an all-simple window")
    if (mA, mB) == (2, 1) and len(others) == 1 and others[0][0] < A:
        return CaseLabel(th, 9, "double middle root")
    if (mA, mB) == (1, 2) and len(others) == 1 and others[0][0] < A:
        return CaseLabel(th, 10, "double upper root, window (beta, gamma)")
    if (mA, mB) == (1, 1) and len(others) == 2:
        below = sum(1 for r, _ in others if r < A)
        above = sum(1 for r, _ in others if r > B)
        if below == 1 and above == 1:
            return CaseLabel(th, 11, "four simple roots, middle window")
        if below == 2:
            return CaseLabel(th, 12, "four simple roots, top window")
    raise Unclassifiable("quartic extremal numerator with unrecognized pattern")


# ---------------------------------------------------------------------------
# Model assembly
# ---------------------------------------------------------------------------

def build_model(
    n: int,
    c: Coefficients,
    root_tol: float = _DEFAULT_ROOT_TOL,
    window_index: Optional[int] = None,
) -> ProfileModel:
    """Build H, isolate roots, select the admissible window."""
    poly = build_profile(n, c)
    roots = find_real_roots(poly, root_tol)
    window = admissible_window(poly, roots, index=window_index)
    return ProfileModel(n, c, poly, roots, window)


def classify_model(model: ProfileModel) -> CaseLabel:
    return classify(model.n, model.coeffs, model.window, model.roots)
