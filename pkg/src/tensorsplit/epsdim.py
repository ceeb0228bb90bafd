"""Threshold index sets and exact eps-dimension computation.

The eps-dimension of a weighted-space pair (a, b) is the total dimension of
the subspaces whose comparison ratio c_j = b_j / a_j stays at or above
eps**2 (the boundary is included).  Enumeration is exact: a depth-first scan
over the index tree prunes branches with a certified bound on how much the
ratio can still grow when new coordinates enter, so the returned set is the
full threshold set, not a heuristic approximation.

For dyadic mixed-smoothness weights with a common smoothness exponent the
set can instead be counted support by support: all indices sharing a support
and an excess level total carry the same ratio, and their number is a
binomial coefficient.  ``spline_eps_dimension`` does this counting and also
reports the coarser closed-form bound in which the per-(support, excess)
population is replaced by |support|**excess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigInvalid, EnumerationCap, NotCompact, TailUnavailable
from .gammas import GammaModel, ProductGamma
from .indexing import ZERO_INDEX, IndexSet, IndexVector, SupportSet
from .sequences import ConstantSeq, CoordSeq, ProductOfSeqs, seq_ratio
from .weights import (
    AnisotropicWeights,
    ProductWeights,
    ScaledWeights,
    SplineWeights,
    TableWeights,
    UnitWeights,
    WeightModel,
    exp2,
    ratio,
    spline_weight_value,
)

__all__ = [
    "DimensionModel",
    "AllOneDims",
    "SplineDims",
    "CustomDims",
    "EpsDimResult",
    "FiniteUniverse",
    "ProductDecay",
    "auto_certificate",
    "enumerate_threshold_set",
    "eps_dimension",
    "eps_dimension_restricted",
    "stabilization_dim",
    "spline_eps_dimension",
]

DEFAULT_CAP = 10_000_000


class DimensionModel:
    """Dimensions of the per-coordinate subspaces W_{j,k}."""

    def coord_dim(self, j: int, k: int) -> int:
        raise NotImplementedError

    def subspace_dim(self, j: IndexVector) -> int:
        d = 1
        for k, jk in j.entries:
            d *= self.coord_dim(jk, k)
        return d


class AllOneDims(DimensionModel):
    """Every subspace is one-dimensional (orthonormal-system splittings)."""

    def coord_dim(self, j: int, k: int) -> int:
        return 1


class SplineDims(DimensionModel):
    """Dyadic complement dimensions: 1 at level 0, 2**(j-1) for j >= 1."""

    def coord_dim(self, j: int, k: int) -> int:
        return 1 if j == 0 else 2 ** (j - 1)


class CustomDims(DimensionModel):
    def __init__(self, fn):
        self.fn = fn

    def coord_dim(self, j: int, k: int) -> int:
        d = int(self.fn(j, k))
        if d < 1:
            raise ConfigInvalid("subspace dimensions must be positive")
        return d


def dims_from_json(obj) -> DimensionModel:
    if obj == "all_one":
        return AllOneDims()
    if obj == "spline":
        return SplineDims()
    raise ConfigInvalid(f"unknown dimension model {obj!r}")


@dataclass(frozen=True)
class EpsDimResult:
    """Exact dimension count for one threshold level.

    ``index_set`` is materialized for enumerative computations and None for
    the counting route; ``coarse_bound`` carries the coarser closed-form
    upper bound where available.
    """

    n: int
    eps: float
    index_set: IndexSet | None = None
    truncated: bool = False
    coarse_bound: int | None = None


# ---------------------------------------------------------------------------
# decay certificates


@dataclass(frozen=True)
class FiniteUniverse:
    """All candidate indices are known in advance (finite tables)."""

    candidates: tuple[IndexVector, ...]


@dataclass(frozen=True)
class SupportDecay:
    """Finitely many admissible supports; the ratio decays in every level.

    Used for level-graded models whose set weights have enumerable support:
    per support the surviving levels form a downward-closed box scanned
    directly.
    """

    supports: tuple[SupportSet, ...]


@dataclass(frozen=True)
class ProductDecay:
    """Per-coordinate upper bounds on the ratio multiplier at entry.

    ``mult.value(k)`` bounds c_{j + l*e_k} / c_j over all levels l >= 1 and
    all j not containing k; raising an existing level never increases c.
    """

    mult: CoordSeq


class _BoostTable:
    """Cached suffix products of multipliers exceeding one."""

    def __init__(self, mult: CoordSeq):
        self.mult = mult
        k_last = mult.last_k_with_value_ge(math.nextafter(1.0, math.inf))
        if k_last is math.inf or k_last == math.inf:
            raise NotCompact(
                "entry multipliers stay above 1 for arbitrarily large coordinates"
            )
        self.k_last = int(k_last)
        # suffix[i] = prod over k in (i, k_last] of max(1, M_k)
        suffix = [1.0] * (self.k_last + 2)
        for k in range(self.k_last, 0, -1):
            suffix[k] = suffix[k + 1] * max(1.0, mult.value(k))
        self.suffix = suffix

    def after(self, k0: int) -> float:
        if k0 >= self.k_last:
            return 1.0
        return self.suffix[k0 + 1]


def auto_certificate(a: WeightModel, b: WeightModel):
    """Derive a decay certificate for a model pair, or raise TailUnavailable."""
    if isinstance(a, TableWeights):
        return FiniteUniverse(tuple(a.support()))
    if isinstance(b, TableWeights):
        return FiniteUniverse(tuple(b.support()))

    a_base, _ = _strip_scale(a)
    b_base, _ = _strip_scale(b)

    if isinstance(b_base, UnitWeights):
        if (
            isinstance(a_base, (SplineWeights, AnisotropicWeights))
            and a_base.gamma.is_finite_support
        ):
            return SupportDecay(tuple(a_base.gamma.iter_support()))
        return ProductDecay(_inverse_growth_seq(a_base))
    if isinstance(a_base, ProductWeights) and isinstance(b_base, ProductWeights):
        return ProductDecay(seq_ratio(a_base.gamma_seq, b_base.gamma_seq))
    if isinstance(a_base, SplineWeights) and isinstance(b_base, SplineWeights):
        return _spline_pair_certificate(a_base, b_base)
    raise TailUnavailable(
        f"no automatic decay certificate for ({type(a).__name__}, {type(b).__name__})"
    )


def _strip_scale(m: WeightModel):
    factor = 1.0
    while isinstance(m, ScaledWeights):
        factor *= m.factor
        m = m.base
    return m, factor


def _inverse_growth_seq(model: WeightModel) -> CoordSeq:
    """Bound on how much 1/a grows when a coordinate enters the support."""
    if isinstance(model, ProductWeights):
        return model.gamma_seq
    if isinstance(model, SplineWeights):
        return model.multiplier_seq()
    if isinstance(model, AnisotropicWeights):
        if isinstance(model.gamma, ProductGamma):
            return model.gamma.seq
        raise TailUnavailable("anisotropic weights need product gamma for certificates")
    if isinstance(model, UnitWeights):
        return ConstantSeq(1.0)
    raise TailUnavailable(f"no growth bound for {type(model).__name__}")


def _spline_pair_certificate(a: SplineWeights, b: SplineWeights) -> ProductDecay:
    if not (a.s.is_constant and b.s.is_constant):
        raise TailUnavailable("spline/spline certificates need constant smoothness")
    ds = a.s.const - b.s.const
    if ds <= 0:
        raise NotCompact("target smoothness must be strictly smaller than the source")
    if not (isinstance(a.gamma, ProductGamma) and isinstance(b.gamma, ProductGamma)):
        raise TailUnavailable("spline/spline certificates need product gammas")
    gamma_ratio = seq_ratio(a.gamma.seq, b.gamma.seq)
    # entry multiplier: (gamma_a/gamma_b) * (lam_b/lam_a) * 2**(-2 ds)
    lam_b_over_a = _param_ratio(b.lam, a.lam)
    decay = ConstantSeq(exp2(-2.0 * ds))
    return ProductDecay(ProductOfSeqs([gamma_ratio, lam_b_over_a, decay]))


def _param_ratio(num, den) -> CoordSeq:
    if num.is_constant and den.is_constant:
        return ConstantSeq(num.const / den.const)
    raise TailUnavailable("per-coordinate parameter ratios need constant parameters")


# ---------------------------------------------------------------------------
# enumeration


def enumerate_threshold_set(
    a: WeightModel,
    b: WeightModel,
    eps: float,
    certificate=None,
    cap: int = DEFAULT_CAP,
    max_coordinate: int | None = None,
    on_cap: str = "raise",
) -> tuple[IndexSet, bool]:
    """Enumerate all indices with b_j / a_j >= eps**2 (boundary included).

    Returns ``(index_set, truncated)``.  With ``on_cap='raise'`` exceeding
    the cap raises ``EnumerationCap``; with ``'truncate'`` a partial set is
    returned and flagged.
    """
    if eps <= 0:
        raise ConfigInvalid("eps must be positive")
    if certificate is None:
        certificate = auto_certificate(a, b)
    eps2 = eps * eps

    if isinstance(certificate, FiniteUniverse):
        members = [
            j
            for j in certificate.candidates
            if (max_coordinate is None or j.max_coord <= max_coordinate)
            and ratio(a, b, j) >= eps2
        ]
        return IndexSet(members), False

    if isinstance(certificate, SupportDecay):
        return _enumerate_by_support(
            a, b, eps2, certificate.supports, cap, max_coordinate, on_cap
        )

    if not isinstance(certificate, ProductDecay):
        raise ConfigInvalid(f"unknown certificate {certificate!r}")

    mult = certificate.mult
    boost = _BoostTable(mult)
    level_cap = _combined_level_cap(a, b)

    out: list[IndexVector] = []
    truncated = False
    visited = 0
    stack: list[tuple[IndexVector, float]] = [(ZERO_INDEX, ratio(a, b, ZERO_INDEX))]

    while stack:
        j, cj = stack.pop()
        visited += 1
        if visited > cap:
            if on_cap == "truncate":
                truncated = True
                break
            raise EnumerationCap(f"visited more than {cap} candidate indices")
        if cj >= eps2:
            out.append(j)
            if len(out) > cap:
                if on_cap == "truncate":
                    truncated = True
                    break
                raise EnumerationCap(f"threshold set exceeds cap {cap}")
        kmax = j.max_coord

        if kmax > 0 and (level_cap is None or j.level(kmax) < level_cap):
            jj = j.bump(kmax)
            cc = ratio(a, b, jj)
            if cc * boost.after(kmax) >= eps2:
                stack.append((jj, cc))

        k = kmax + 1
        while max_coordinate is None or k <= max_coordinate:
            if mult.value(k) > 0.0:
                jj = j.bump(k)
                cc = ratio(a, b, jj)
                if cc * boost.after(k) >= eps2:
                    stack.append((jj, cc))
            msup = mult.tail_sup(k)
            if cj * msup * boost.after(k) < eps2:
                break
            if (
                k >= mult.nonincreasing_from
                and k > boost.k_last
                and not mult.decays_to_zero
            ):
                raise NotCompact(
                    "entry multipliers do not decay; the threshold set is unbounded"
                )
            k += 1
            if k > 10_000_000:
                raise EnumerationCap("coordinate scan exceeded the hard guard")

    return IndexSet(out), truncated


def _combined_level_cap(a: WeightModel, b: WeightModel) -> int | None:
    caps = [m.max_level for m in (a, b) if m.max_level is not None]
    return min(caps) if caps else None


def _enumerate_by_support(a, b, eps2, supports, cap, max_coordinate, on_cap):
    """Per-support level scan; the ratio must be nonincreasing in each level.

    Levels of a fixed support form a lattice; bumping coordinates in
    nondecreasing position order visits each level vector once, and a
    subthreshold vector prunes its whole upward cone.
    """
    out: list[IndexVector] = []
    truncated = False
    for sigma in supports:
        if max_coordinate is not None and sigma.max_coord > max_coordinate:
            continue
        coords = list(sigma)
        start = IndexVector({k: 1 for k in coords})
        stack: list[tuple[IndexVector, int]] = [(start, 0)]
        while stack:
            j, pos = stack.pop()
            if ratio(a, b, j) < eps2:
                continue
            out.append(j)
            if len(out) > cap:
                if on_cap == "truncate":
                    return IndexSet(out[:cap]), True
                raise EnumerationCap(f"threshold set exceeds cap {cap}")
            for i in range(pos, len(coords)):
                stack.append((j.bump(coords[i]), i))
    return IndexSet(out), truncated


def eps_dimension(
    a: WeightModel,
    b: WeightModel,
    eps: float,
    dims: DimensionModel,
    certificate=None,
    cap: int = DEFAULT_CAP,
    max_coordinate: int | None = None,
    on_cap: str = "raise",
) -> EpsDimResult:
    """Total dimension of the threshold set's subspaces."""
    index_set, truncated = enumerate_threshold_set(
        a, b, eps, certificate=certificate, cap=cap, max_coordinate=max_coordinate, on_cap=on_cap
    )
    n = sum(dims.subspace_dim(j) for j in index_set)
    return EpsDimResult(n=n, eps=eps, index_set=index_set, truncated=truncated)


def eps_dimension_restricted(
    a: WeightModel,
    b: WeightModel,
    eps: float,
    dims: DimensionModel,
    d: int,
    certificate=None,
    cap: int = DEFAULT_CAP,
    on_cap: str = "raise",
) -> EpsDimResult:
    """Same computation restricted to indices supported on coordinates <= d."""
    if d < 0:
        raise ConfigInvalid("restriction dimension must be nonnegative")
    return eps_dimension(
        a, b, eps, dims, certificate=certificate, cap=cap, max_coordinate=d, on_cap=on_cap
    )


def stabilization_dim(
    a: WeightModel,
    b: WeightModel,
    eps: float,
    dims: DimensionModel | None = None,
    certificate=None,
    cap: int = DEFAULT_CAP,
) -> int:
    """Smallest d from which on the d-restricted count equals the full one.

    Equals the largest coordinate active anywhere in the threshold set.
    """
    index_set, _ = enumerate_threshold_set(a, b, eps, certificate=certificate, cap=cap)
    return index_set.max_coord


# ---------------------------------------------------------------------------
# closed-form counting for common-smoothness spline weights


def spline_eps_dimension(
    gamma: GammaModel,
    s: float,
    lam: float,
    eps: float,
    omega_cap: int = 1_000_000,
) -> EpsDimResult:
    """Count the dyadic-weight eps-dimension support by support.

    For every support with positive set weight, the largest admissible
    excess level total m is found by the same floating-point comparison the
    enumerator makes, and the indices are counted in closed form: there are
    comb(m + |support| - 1, |support| - 1) of them for each m, each carrying
    subspace dimension 2**m.  The coarser bound 1 + 2 * sum (2|support|)**m
    is reported alongside.
    """
    if eps <= 0:
        raise ConfigInvalid("eps must be positive")
    if not isinstance(s, (int, float)) or s <= 0:
        raise ConfigInvalid("common smoothness must be a positive number")
    if not isinstance(lam, (int, float)) or lam <= 0:
        raise ConfigInvalid("the scale constant must be a positive number")
    model = SplineWeights(gamma, float(s), float(lam))
    eps2 = eps * eps

    def excess_cap(omega: SupportSet) -> int:
        """Largest m >= 0 whose ratio clears the threshold, -1 if none."""
        gv = gamma.value(omega)
        if gv == 0.0:
            return -1
        lam_prod = model.lam_product(omega)
        m = -1
        while True:
            aw = spline_weight_value(gv, lam_prod, 2.0 * float(s) * (m + 1 + len(omega)))
            if 1.0 / aw >= eps2:
                m += 1
            else:
                return m
            if m > 10_000_000:
                raise EnumerationCap("excess-level scan exceeded the hard guard")

    n = 1  # the zero index always contributes its one-dimensional subspace
    bound_acc = 0
    processed = 0

    for omega in _viable_supports(model, eps2, omega_cap):
        processed += 1
        if processed > omega_cap:
            raise EnumerationCap(f"more than {omega_cap} supports enumerated")
        m_omega = excess_cap(omega)
        if m_omega < 0:
            continue
        size = len(omega)
        n += sum(math.comb(m + size - 1, size - 1) * 2**m for m in range(m_omega + 1))
        bound_acc += (2 * size) ** m_omega

    return EpsDimResult(n=n, eps=eps, index_set=None, truncated=False,
                        coarse_bound=1 + 2 * bound_acc)


def _viable_supports(model: SplineWeights, eps2: float, omega_cap: int):
    """Nonempty supports whose level-(1,...,1) ratio could clear eps2.

    For enumerable gamma supports this is the stored list; for product
    gammas a depth-first scan over supports with the same boost pruning as
    the index enumerator.
    """
    gamma = model.gamma
    if gamma.is_finite_support or not isinstance(gamma, ProductGamma):
        for omega in gamma.iter_support():
            if len(omega) > 0:
                yield omega
        return

    mult = model.multiplier_seq()
    boost = _BoostTable(mult)

    def c0(omega: SupportSet) -> float:
        aw = spline_weight_value(
            gamma.value(omega),
            model.lam_product(omega),
            2.0 * model.s.const * len(omega),
        )
        return 0.0 if math.isinf(aw) else 1.0 / aw

    stack: list[tuple[SupportSet, float]] = [(SupportSet(), 1.0)]
    emitted = 0
    while stack:
        omega, comega = stack.pop()
        if len(omega) > 0:
            emitted += 1
            if emitted > omega_cap:
                raise EnumerationCap(f"more than {omega_cap} supports enumerated")
            yield omega
        k = omega.max_coord + 1
        while True:
            if mult.value(k) > 0.0:
                oo = omega.add(k)
                cc = c0(oo)
                if cc * boost.after(k) >= eps2:
                    stack.append((oo, cc))
            msup = mult.tail_sup(k)
            if comega * msup * boost.after(k) < eps2:
                break
            if (
                k >= mult.nonincreasing_from
                and k > boost.k_last
                and not mult.decays_to_zero
            ):
                raise NotCompact("set weights do not decay; the count is unbounded")
            k += 1
            if k > 10_000_000:
                raise EnumerationCap("support scan exceeded the hard guard")
