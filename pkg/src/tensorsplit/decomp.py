"""ANOVA and anchored decompositions with their kernels and constants.

Both decompositions replace, per coordinate, a factor by a projection onto
constants: the mean-value projection (ANOVA) or evaluation at an anchor
point (anchored).  On separable functions each component is again separable,
so mixed derivatives and weighted norms reduce to one-dimensional integrals.

The univariate kernels tie function values to derivatives::

    g(x) = g(anchor) + integral of g'(t) * anchored_kernel(x, t) dt
    g(x) = mean(g)   + integral of g'(t) * anova_kernel(x, t) dt

and the derived constants (the energy of the averaged anchored kernel, and
the per-coordinate contraction factors) drive the norm-equivalence and
truncation bounds downstream.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ConfigInvalid, NormInfinite
from .functions import SeparableFunction, Term, deriv_inner
from .gammas import GammaModel
from .indexing import SupportSet
from .quadrature import QuadratureRule, gauss_legendre, integrate_piecewise

__all__ = [
    "MODE_ANOVA",
    "MODE_ANCHORED",
    "DecompositionTerm",
    "anchored_kernel",
    "anova_kernel",
    "averaged_anchored_kernel",
    "averaged_kernel_energy",
    "anchored_contraction",
    "anova_contraction",
    "anova_term",
    "anchored_term",
    "decompose",
    "weighted_norm",
    "reconstruct",
    "anchored_representation",
    "mean_representation",
    "DEFAULT_ANCHOR",
]

MODE_ANOVA = "anova"
MODE_ANCHORED = "anchored"

#: midpoint anchor minimizes both kernel constants
DEFAULT_ANCHOR = 0.5

_ZERO_TOL = 1e-12


def _check_anchor(anchor: float) -> float:
    anchor = float(anchor)
    if not 0.0 <= anchor <= 1.0:
        raise ConfigInvalid(f"anchor must lie in [0, 1], got {anchor}")
    return anchor


def _check_mode(mode: str) -> str:
    if mode not in (MODE_ANOVA, MODE_ANCHORED):
        raise ConfigInvalid(f"mode must be '{MODE_ANOVA}' or '{MODE_ANCHORED}'")
    return mode


# ---------------------------------------------------------------------------
# kernels and constants


def anchored_kernel(x: float, t: float, anchor: float = DEFAULT_ANCHOR) -> float:
    """Indicator difference 1_[0,x](t) - 1_[0,anchor](t)."""
    anchor = _check_anchor(anchor)
    return (1.0 if t <= x else 0.0) - (1.0 if t <= anchor else 0.0)


def anova_kernel(x: float, t: float) -> float:
    """t on [0, x), and -(1 - t) on [x, 1]."""
    return t if t < x else -(1.0 - t)


def averaged_anchored_kernel(t: float, anchor: float = DEFAULT_ANCHOR) -> float:
    """Integral of the anchored kernel over x: -t below the anchor, 1-t above."""
    anchor = _check_anchor(anchor)
    return -t if t < anchor else 1.0 - t


def averaged_kernel_energy(anchor: float = DEFAULT_ANCHOR) -> float:
    """Squared L2 norm of the averaged anchored kernel: 1/3 - a(1-a)."""
    anchor = _check_anchor(anchor)
    return 1.0 / 3.0 - anchor * (1.0 - anchor)


def anchored_contraction(anchor: float = DEFAULT_ANCHOR) -> float:
    """Per-coordinate L2 contraction of anchored components: max(a^2,(1-a)^2)/2."""
    anchor = _check_anchor(anchor)
    return 0.5 * max(anchor**2, (1.0 - anchor) ** 2)


def anova_contraction() -> float:
    """Per-coordinate L2 contraction of ANOVA components: 1/6."""
    return 1.0 / 6.0


def anchored_representation(
    factor, x: float, anchor: float = DEFAULT_ANCHOR, rule: QuadratureRule | None = None
) -> float:
    """Reconstruct g(x) from g(anchor) and the derivative, via the kernel."""
    rule = rule or gauss_legendre(8)
    integral = integrate_piecewise(
        lambda t: factor.deriv(t) * anchored_kernel(x, t, anchor), rule, (x, anchor)
    )
    return factor.value(anchor) + integral


def mean_representation(factor, x: float, rule: QuadratureRule | None = None) -> float:
    """Reconstruct g(x) from its mean and the derivative, via the kernel."""
    rule = rule or gauss_legendre(8)
    integral = integrate_piecewise(
        lambda t: factor.deriv(t) * anova_kernel(x, t), rule, (x,)
    )
    return factor.mean + integral


# ---------------------------------------------------------------------------
# decomposition terms


@dataclass(frozen=True)
class DecompositionTerm:
    """One component of a decomposition, with its active set and energy.

    ``mixed_norm_sq`` is the squared L2 norm of the component's mixed first
    derivative in the active directions; for the empty set it is the square
    of the constant component.  ``exact`` records whether every ingredient
    was integrated exactly.
    """

    omega: SupportSet
    func: SeparableFunction
    mixed_norm_sq: float
    exact: bool = True


def _project_terms(f: SeparableFunction, omega: SupportSet, replace) -> list[Term]:
    """Project every product term: active factors centered, others collapsed.

    ``replace(factor) -> (shifted_factor, collapse_value)`` where the
    shifted factor is used on active coordinates and the collapse value on
    inactive ones.
    """
    out = []
    for t in f.terms:
        coef = t.coef
        factors = {}
        dead = False
        for k in range(1, f.dim + 1):
            g = t.factors.get(k)
            if k in omega:
                if g is None or g.degree == 0:
                    dead = True  # centering a constant kills the product
                    break
                shifted, _ = replace(g)
                factors[k] = shifted
            elif g is not None:
                _, collapse = replace(g)
                coef *= collapse
        if not dead and coef != 0.0:
            out.append(Term(coef, factors))
    return out


def _mixed_norm_sq(terms: list[Term], omega: SupportSet) -> float:
    if not omega:
        return math.fsum(t.coef for t in terms) ** 2
    pieces = []
    for r, tr in enumerate(terms):
        for ts in terms:
            prod = tr.coef * ts.coef
            for k in omega:
                prod *= deriv_inner(tr.factor(k), ts.factor(k))
            pieces.append(prod)
    return math.fsum(pieces)


def _terms_exact(terms: list[Term]) -> bool:
    return all(
        f.exact and f.degree is not None for t in terms for f in t.factors.values()
    )


def anova_term(f: SeparableFunction, omega: SupportSet) -> DecompositionTerm:
    """Component with active set omega of the mean-projection decomposition."""
    _check_support(f, omega)
    terms = _project_terms(f, omega, lambda g: (g.shifted(g.mean), g.mean))
    return DecompositionTerm(
        omega, SeparableFunction(f.dim, terms), _mixed_norm_sq(terms, omega),
        exact=_terms_exact(terms),
    )


def anchored_term(
    f: SeparableFunction, omega: SupportSet, anchor: float = DEFAULT_ANCHOR
) -> DecompositionTerm:
    """Component with active set omega of the anchor-evaluation decomposition."""
    anchor = _check_anchor(anchor)
    _check_support(f, omega)

    def replace(g):
        at_anchor = g.value(anchor)
        return g.shifted(at_anchor), at_anchor

    terms = _project_terms(f, omega, replace)
    return DecompositionTerm(
        omega, SeparableFunction(f.dim, terms), _mixed_norm_sq(terms, omega),
        exact=_terms_exact(terms),
    )


def _check_support(f: SeparableFunction, omega: SupportSet):
    if omega.max_coord > f.dim:
        raise ConfigInvalid(
            f"active set {omega!r} exceeds the function dimension {f.dim}"
        )


def all_supports(dim: int) -> Iterable[SupportSet]:
    """All subsets of {1..dim}, by size then lexicographic order."""
    coords = range(1, dim + 1)
    for size in range(dim + 1):
        for combo in itertools.combinations(coords, size):
            yield SupportSet(combo)


def decompose(
    f: SeparableFunction, mode: str, anchor: float = DEFAULT_ANCHOR
) -> list[DecompositionTerm]:
    """All components of the chosen decomposition, in canonical set order."""
    _check_mode(mode)
    if mode == MODE_ANOVA:
        return [anova_term(f, omega) for omega in all_supports(f.dim)]
    return [anchored_term(f, omega, anchor) for omega in all_supports(f.dim)]


def weighted_norm(
    f: SeparableFunction,
    gamma: GammaModel,
    mode: str,
    anchor: float = DEFAULT_ANCHOR,
) -> float:
    """Weighted decomposition norm: sqrt of sum gamma^-1 * component energy.

    Raises ``NormInfinite`` when a component with nonzero energy meets a
    vanishing set weight: the function then lies outside the space.
    """
    terms = decompose(f, mode, anchor)
    scale = max((t.mixed_norm_sq for t in terms), default=0.0)
    tol = _ZERO_TOL * (1.0 + scale)
    pieces = []
    for t in terms:
        gv = gamma.value(t.omega)
        if gv == 0.0:
            if t.mixed_norm_sq > tol:
                raise NormInfinite(
                    f"component {t.omega!r} has energy {t.mixed_norm_sq} but zero weight"
                )
            continue
        pieces.append(t.mixed_norm_sq / gv)
    return math.sqrt(max(0.0, math.fsum(pieces)))


def reconstruct(terms: Sequence[DecompositionTerm], x: Sequence[float]) -> float:
    """Sum of all components at a point; equals the original function."""
    ordered = sorted(terms, key=lambda t: (len(t.omega), t.omega.coords))
    return math.fsum(t.func.value(x) for t in ordered)
