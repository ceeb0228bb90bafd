"""Weight models over multi-indices and the redundant-splitting transform.

A weight model evaluates a nonnegative (possibly infinite) penalty ``a_j``
for every multi-index.  Zero encodes a dropped subspace; infinity encodes a
component that no admissible function may carry.  The variants:

* ``ProductWeights``      levels live in {0,1}; a_j is the inverse of the
                          product of per-coordinate set weights;
* ``SplineWeights``       a_j = gamma(support)^-1 * prod lam_k * 2**(2 s_k j_k),
                          the dyadic mixed-smoothness scale;
* ``AnisotropicWeights``  the same with the product replaced by a sum;
* ``TableWeights``        explicit finite table;
* ``UnitWeights``         a_j = 1 everywhere (the plain L2 target);
* ``ScaledWeights``       a constant multiple of another model;
* ``CustomWeights``       an opaque evaluator.

Product and spline models ship closed-form tail oracles (geometric series
per coordinate, products across coordinates), so the infinite sums behind
the norm-definiteness test and the orthogonalizing transform come with
convergence evidence instead of hope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import (
    ConfigInvalid,
    InclusionViolated,
    NormDegenerate,
    OracleUnavailable,
    TailUnavailable,
)
from .gammas import GammaModel, ProductGamma, gamma_from_json
from .indexing import IndexVector, SupportSet
from .sequences import (
    ConstantSeq,
    CoordSeq,
    GeometricSeq,
    ListTailSeq,
    ProductOfSeqs,
    seq_from_json,
)

__all__ = [
    "CoordParam",
    "WeightModel",
    "ProductWeights",
    "SplineWeights",
    "AnisotropicWeights",
    "TableWeights",
    "UnitWeights",
    "ScaledWeights",
    "CustomWeights",
    "TailOracle",
    "ConditionBound",
    "check_embedding",
    "redundant_norm_defined",
    "orthogonalized_weight",
    "redundant_condition_bound",
    "optimal_split_value",
    "ratio",
    "weights_from_json",
]


def exp2(x: float) -> float:
    """Base-2 exponential; one shared definition keeps comparisons bitwise stable."""
    return 2.0**x


class CoordParam:
    """A positive per-coordinate parameter: constant, listed, or affine."""

    def __init__(self, const=None, head=(), affine=None):
        self.head = tuple(float(v) for v in head)
        self.affine = affine
        if affine is not None:
            a, b = affine
            self.affine = (float(a), float(b))
            self.const = None
        else:
            if const is None:
                const = self.head[-1] if self.head else 1.0
            self.const = float(const)

    @classmethod
    def make(cls, spec) -> "CoordParam":
        """Accept a float, a list (tail = last entry), or an affine dict."""
        if isinstance(spec, CoordParam):
            return spec
        if isinstance(spec, (int, float)):
            return cls(const=float(spec))
        if isinstance(spec, (list, tuple)):
            if not spec:
                raise ConfigInvalid("parameter list must be nonempty")
            return cls(head=spec)
        if isinstance(spec, dict) and spec.get("kind") == "affine":
            return cls(affine=(spec["a"], spec["b"]))
        raise ConfigInvalid(f"bad per-coordinate parameter {spec!r}")

    @property
    def is_constant(self) -> bool:
        return self.affine is None and not self.head

    def value(self, k: int) -> float:
        if self.affine is not None:
            a, b = self.affine
            return a + b * k
        if 1 <= k <= len(self.head):
            return self.head[k - 1]
        return self.const

    def values_positive(self) -> bool:
        if self.affine is not None:
            a, b = self.affine
            return a + b > 0 and b >= 0
        return all(v > 0 for v in self.head) and self.const > 0

    def inv_seq(self) -> CoordSeq:
        """The sequence 1/value(k), for use in tail-sum bounds."""
        if self.affine is not None:
            a, b = self.affine
            if b == 0:
                return ConstantSeq(1.0 / a)
            # 1/(a+bk) is dominated by 1/(a+b); keep a safe constant bound
            return ConstantSeq(1.0 / (a + b))
        if self.head:
            return ListTailSeq([1.0 / v for v in self.head], 1.0 / self.const)
        return ConstantSeq(1.0 / self.const)

    def dyadic_decay_seq(self) -> CoordSeq:
        """The sequence 2**(-2 * value(k)), exact per kind."""
        if self.affine is not None:
            a, b = self.affine
            if b == 0:
                return ConstantSeq(exp2(-2.0 * a))
            return GeometricSeq(exp2(-2.0 * a), exp2(-2.0 * b))
        if self.head:
            return ListTailSeq(
                [exp2(-2.0 * v) for v in self.head], exp2(-2.0 * self.const)
            )
        return ConstantSeq(exp2(-2.0 * self.const))


def _prod(values: Iterable[float]) -> float:
    out = 1.0
    for v in values:
        out *= v
    return out


class TailOracle:
    """Sums of inverse weights over upward-closed slices of the index set."""

    def total(self) -> float:
        """Sum of 1/a_j over the whole support (``inf`` when divergent)."""
        raise NotImplementedError

    def tail(self, j: IndexVector) -> float:
        """Sum of 1/a_i over all supported i >= j."""
        raise NotImplementedError


class WeightModel:
    """Base class: a deterministic evaluator of index weights."""

    #: per-coordinate level cap (None = unbounded levels)
    max_level: int | None = None

    def weight(self, j: IndexVector) -> float:
        raise NotImplementedError

    def tail_oracle(self) -> TailOracle:
        raise OracleUnavailable(f"{type(self).__name__} has no tail-sum oracle")


class UnitWeights(WeightModel):
    """a_j = 1 for every index; the support is all of the index universe."""

    def weight(self, j: IndexVector) -> float:
        return 1.0

    def tail_oracle(self) -> TailOracle:
        return _DivergentOracle()


class _DivergentOracle(TailOracle):
    def total(self) -> float:
        return math.inf

    def tail(self, j) -> float:
        return math.inf


class ScaledWeights(WeightModel):
    """A positive constant multiple of another model."""

    def __init__(self, base: WeightModel, factor: float):
        if factor <= 0:
            raise ConfigInvalid("scale factor must be positive")
        self.base = base
        self.factor = float(factor)
        self.max_level = base.max_level

    def weight(self, j: IndexVector) -> float:
        return self.factor * self.base.weight(j)

    def tail_oracle(self) -> TailOracle:
        return _ScaledOracle(self.base.tail_oracle(), self.factor)


class _ScaledOracle(TailOracle):
    def __init__(self, base: TailOracle, factor: float):
        self.base = base
        self.factor = factor

    def total(self):
        return self.base.total() / self.factor

    def tail(self, j):
        return self.base.tail(j) / self.factor


class ProductWeights(WeightModel):
    """Support-only weights over {0,1} levels.

    The weight of an index with support omega is the inverse of the product
    of the per-coordinate values on omega; indices with any level >= 2 lie
    outside the universe and evaluate to 0.  A vanishing coordinate value
    sends the weight to infinity (the component is suppressed entirely).
    """

    max_level = 1

    def __init__(self, gamma_seq: CoordSeq):
        self.gamma_seq = gamma_seq

    def __repr__(self):
        return f"ProductWeights({self.gamma_seq!r})"

    def weight(self, j: IndexVector) -> float:
        gw = 1.0
        for k, jk in j.entries:
            if jk > 1:
                return 0.0
            gw *= self.gamma_seq.value(k)
        return math.inf if gw == 0.0 else 1.0 / gw

    def tail_oracle(self) -> TailOracle:
        return _ProductOracle(self.gamma_seq)


class _ProductOracle(TailOracle):
    def __init__(self, seq: CoordSeq):
        self.seq = seq
        self._log_total = None

    def _log_total_value(self) -> float:
        if self._log_total is None:
            self._log_total = self.seq.log1p_sum()
        return self._log_total

    def total(self) -> float:
        lt = self._log_total_value()
        return math.inf if lt == math.inf else math.exp(lt)

    def tail(self, j: IndexVector) -> float:
        gw = 1.0
        correction = 0.0
        for k, jk in j.entries:
            if jk > 1:
                return 0.0
            v = self.seq.value(k)
            if v == 0.0:
                return 0.0
            gw *= v
            correction += math.log1p(v)
        lt = self._log_total_value()
        if lt == math.inf:
            return math.inf
        return gw * math.exp(lt - correction)


def spline_weight_value(gamma_val: float, lam_prod: float, two_s_dot: float) -> float:
    """Canonical spline weight: lam_prod * 2**two_s_dot / gamma_val.

    Shared between pointwise evaluation and the closed-form dimension
    counter so that both sides make bit-identical boundary decisions.
    """
    if gamma_val == 0.0:
        return math.inf
    return lam_prod * exp2(two_s_dot) / gamma_val


class SplineWeights(WeightModel):
    """Dyadic mixed-smoothness weights with set-dependent scaling."""

    def __init__(self, gamma: GammaModel, s, lam=1.0):
        self.gamma = gamma
        self.s = CoordParam.make(s)
        self.lam = CoordParam.make(lam)
        if not self.s.values_positive():
            raise ConfigInvalid("smoothness must be positive in every coordinate")
        if not self.lam.values_positive():
            raise ConfigInvalid("scale constants must be positive")

    def __repr__(self):
        return f"SplineWeights({self.gamma!r})"

    def lam_product(self, omega: SupportSet) -> float:
        return _prod(self.lam.value(k) for k in omega)

    def two_s_dot(self, j: IndexVector) -> float:
        if self.s.is_constant:
            return 2.0 * self.s.const * j.total_level
        return math.fsum(2.0 * self.s.value(k) * jk for k, jk in j.entries)

    def weight(self, j: IndexVector) -> float:
        if j.is_zero():
            return 1.0
        gv = self.gamma.value(j.support)
        return spline_weight_value(gv, self.lam_product(j.support), self.two_s_dot(j))

    def level_decay(self, k: int) -> float:
        """2**(-2 s_k): the inverse-weight shrink factor per extra level."""
        return exp2(-2.0 * self.s.value(k))

    def coord_entry_factor(self, k: int) -> float:
        """Inverse-weight multiplier when coordinate k enters at level 1."""
        gk = _product_coord_value(self.gamma, k)
        return gk * self.level_decay(k) / self.lam.value(k)

    def geometric_tail(self, k: int, level: int) -> float:
        """Sum over levels >= level of lam_k^-1 * 2**(-2 s_k l)."""
        rho = self.level_decay(k)
        return rho**level / ((1.0 - rho) * self.lam.value(k))

    def entry_tail(self, k: int) -> float:
        """geometric_tail at level 1 (a fresh coordinate, all its levels)."""
        return self.geometric_tail(k, 1)

    def multiplier_seq(self) -> CoordSeq:
        """Certified upper-bound sequence for coord_entry_factor (product gamma)."""
        if not isinstance(self.gamma, ProductGamma):
            raise TailUnavailable("multiplier sequence needs product gamma")
        return ProductOfSeqs(
            [self.gamma.seq, self.lam.inv_seq(), self.s.dyadic_decay_seq()]
        )

    def tail_oracle(self) -> TailOracle:
        return _SplineOracle(self)


def _product_coord_value(gamma: GammaModel, k: int) -> float:
    if isinstance(gamma, ProductGamma):
        return gamma.seq.value(k)
    raise TailUnavailable("per-coordinate gamma value needs a product model")


class _SplineOracle(TailOracle):
    """Closed-form inverse-weight sums for spline models.

    For enumerable gamma supports the sums are finite sums of per-set
    geometric products.  For product gamma over infinitely many coordinates
    the total is the convergent product of (1 + t_k) with
    t_k = gamma_k * lam_k^-1 * rho_k / (1 - rho_k), evaluated with a
    certified remainder.
    """

    def __init__(self, model: SplineWeights):
        self.model = model
        self._log_total = None
        self._enumerable = model.gamma.is_finite_support or not isinstance(
            model.gamma, ProductGamma
        )

    def _t(self, k: int) -> float:
        m = self.model
        rho = m.level_decay(k)
        return _product_coord_value(m.gamma, k) * rho / ((1.0 - rho) * m.lam.value(k))

    def _t_tail_bound(self, k0: int) -> float:
        m = self.model
        base = m.multiplier_seq()
        rho_sup = m.s.dyadic_decay_seq().tail_sup(k0)
        return base.tail_sum(k0) / (1.0 - rho_sup)

    def _log_total_product(self) -> float:
        if self._log_total is not None:
            return self._log_total
        m = self.model
        if m.multiplier_seq().sum() == math.inf:
            self._log_total = math.inf
            return self._log_total
        if m.s.affine is None and m.lam.affine is None:
            # beyond the listed heads both parameters are constant, so the
            # entry terms are an exactly scaled copy of the gamma sequence
            rho = exp2(-2.0 * m.s.const)
            u_tail = rho / ((1.0 - rho) * m.lam.const)
            base = m.gamma.seq.scaled(u_tail)
            total = base.log1p_sum()
            if total == math.inf:
                self._log_total = math.inf
                return self._log_total
            head_len = max(len(m.s.head), len(m.lam.head))
            for k in range(1, head_len + 1):
                total += math.log1p(self._t(k)) - math.log1p(base.value(k))
            self._log_total = total
            return self._log_total
        # affine smoothness: the terms decay geometrically, sum directly
        head = 0.0
        k = 1
        while True:
            head += math.log1p(self._t(k))
            rem = self._t_tail_bound(k)
            if rem <= 1e-16 * (abs(head) + 1.0):
                self._log_total = head + 0.5 * rem
                return self._log_total
            if rem == math.inf:
                self._log_total = math.inf
                return self._log_total
            k += 1
            if k > 5_000_000:
                raise TailUnavailable("spline tail summation did not converge")

    def total(self) -> float:
        m = self.model
        if self._enumerable:
            pieces = []
            for omega in m.gamma.iter_support():
                term = m.gamma.value(omega)
                for k in omega:
                    term *= m.entry_tail(k)
                pieces.append(term)
            return math.fsum(pieces)
        lt = self._log_total_product()
        return math.inf if lt == math.inf else math.exp(lt)

    def tail(self, j: IndexVector) -> float:
        m = self.model
        sigma = j.support
        if self._enumerable:
            pieces = []
            for omega in m.gamma.iter_support():
                if not omega.issuperset(sigma):
                    continue
                term = m.gamma.value(omega)
                for k, jk in j.entries:
                    term *= m.geometric_tail(k, jk)
                for k in omega.minus(sigma):
                    term *= m.entry_tail(k)
                pieces.append(term)
            return math.fsum(pieces)
        lt = self._log_total_product()
        if lt == math.inf:
            return math.inf
        head = 1.0
        correction = 0.0
        for k, jk in j.entries:
            gk = _product_coord_value(m.gamma, k)
            if gk == 0.0:
                return 0.0
            head *= gk * m.geometric_tail(k, jk)
            correction += math.log1p(self._t(k))
        return head * math.exp(lt - correction)


class AnisotropicWeights(WeightModel):
    """Sum-form dyadic weights: gamma(support)^-1 * sum_k 2**(2 s_k j_k)."""

    def __init__(self, gamma: GammaModel, s):
        self.gamma = gamma
        self.s = CoordParam.make(s)
        if not self.s.values_positive():
            raise ConfigInvalid("smoothness must be positive in every coordinate")

    def weight(self, j: IndexVector) -> float:
        if j.is_zero():
            return 1.0
        gv = self.gamma.value(j.support)
        if gv == 0.0:
            return math.inf
        acc = math.fsum(exp2(2.0 * self.s.value(k) * jk) for k, jk in j.entries)
        return acc / gv


class TableWeights(WeightModel):
    """Explicit finite table; absent entries evaluate to 0 (dropped)."""

    def __init__(self, entries: dict[IndexVector, float], assert_monotone: bool = False):
        table = {}
        for j, v in entries.items():
            v = float(v)
            if v < 0:
                raise ConfigInvalid("weights must be nonnegative")
            if v > 0:
                table[j] = v
        self.entries = table
        if assert_monotone:
            from .indexing import IndexSet

            if not IndexSet(table).is_monotone:
                raise ConfigInvalid("table support is not downward closed")

    def __repr__(self):
        return f"TableWeights({len(self.entries)} entries)"

    def weight(self, j: IndexVector) -> float:
        return self.entries.get(j, 0.0)

    def support(self):
        return sorted(self.entries, key=IndexVector.canonical_key)

    def tail_oracle(self) -> TailOracle:
        return _TableOracle(self)


class _TableOracle(TailOracle):
    def __init__(self, model: TableWeights):
        self.model = model

    def total(self) -> float:
        return math.fsum(
            1.0 / self.model.entries[j] for j in self.model.support()
        )

    def tail(self, j: IndexVector) -> float:
        return math.fsum(
            1.0 / self.model.entries[i] for i in self.model.support() if j <= i
        )


class CustomWeights(WeightModel):
    """Opaque pure evaluator; tail sums require a caller-supplied oracle."""

    def __init__(self, fn: Callable[[IndexVector], float], oracle: TailOracle | None = None,
                 max_level: int | None = None):
        self.fn = fn
        self.oracle = oracle
        self.max_level = max_level

    def weight(self, j: IndexVector) -> float:
        return float(self.fn(j))

    def tail_oracle(self) -> TailOracle:
        if self.oracle is None:
            raise OracleUnavailable("custom weights need an explicit tail oracle")
        return self.oracle


# ---------------------------------------------------------------------------
# operations


def ratio(a: WeightModel, b: WeightModel, j: IndexVector) -> float:
    """The comparison ratio b_j / a_j, with dropped components mapped to 0."""
    aw = a.weight(j)
    if aw == 0.0 or math.isinf(aw):
        return 0.0
    return b.weight(j) / aw


def check_embedding(a: WeightModel, b: WeightModel, search) -> float | None:
    """Smallest C with b_j <= C**2 * a_j across the finite search set.

    Raises ``InclusionViolated`` when some searched index has a_j = 0 but
    b_j > 0, since no finite constant can absorb it.  Returns None when the
    search set contributes no comparable index.
    """
    sup = None
    for j in search:
        aw = a.weight(j)
        bw = b.weight(j)
        if aw == 0.0:
            if bw > 0.0:
                raise InclusionViolated(f"index {j!r} has zero a-weight but b-weight {bw}")
            continue
        if math.isinf(aw):
            continue
        q = bw / aw
        sup = q if sup is None else max(sup, q)
    return None if sup is None else math.sqrt(sup)


def redundant_norm_defined(model: WeightModel, oracle: TailOracle | None = None) -> bool:
    """True iff the inverse weights are summable over the support.

    This is exactly the condition under which the redundant-splitting
    seminorm separates points; when it fails, the constant function 1 has
    seminorm 0.
    """
    oracle = oracle or model.tail_oracle()
    return oracle.total() < math.inf


def orthogonalized_weight(
    model: WeightModel, j: IndexVector, oracle: TailOracle | None = None
) -> float:
    """Inverse tail sum of inverse weights above ``j``.

    Converts redundant-splitting weights into the equivalent weights for the
    orthogonal splitting.  Always bounded by the original weight at ``j``.
    """
    oracle = oracle or model.tail_oracle()
    if oracle.total() == math.inf:
        raise NormDegenerate(
            "inverse weights are not summable; the redundant seminorm vanishes on 1",
            unit_seminorm=0.0,
        )
    t = oracle.tail(j)
    return math.inf if t == 0.0 else 1.0 / t


@dataclass(frozen=True)
class ConditionBound:
    """A bound C**2 on the redundant/orthogonal norm ratio.

    ``certified`` distinguishes an analytically complete supremum from a
    finite-search lower bound.
    """

    c_squared: float
    certified: bool


def redundant_condition_bound(
    model: WeightModel,
    search=None,
    oracle: TailOracle | None = None,
) -> ConditionBound | None:
    """Smallest C**2 with tail-inverse sums dominated by each inverse weight.

    Returns a certified bound for product and spline models (closed forms)
    and for finite tables (exhaustive), a finite-search lower bound when only
    a search set is available, or None when the certified supremum diverges.
    Raises ``NormDegenerate`` when the inverse weights are not summable.
    """
    oracle = oracle or model.tail_oracle()
    total = oracle.total()
    if total == math.inf:
        raise NormDegenerate(
            "inverse weights are not summable; no finite condition bound exists",
            unit_seminorm=0.0,
        )

    if isinstance(model, ProductWeights):
        # ratio a_j / ahat_j = prod over k outside the support of (1 + gamma_k),
        # maximized at the zero index where it equals the full total.
        return ConditionBound(total, certified=True)

    if isinstance(model, ScaledWeights):
        inner = redundant_condition_bound(model.base)
        return inner

    if isinstance(model, TableWeights):
        best = 0.0
        for j in model.support():
            best = max(best, model.entries[j] * oracle.tail(j))
        return ConditionBound(best, certified=True)

    if isinstance(model, SplineWeights):
        return _spline_condition_bound(model, oracle)

    if search is not None:
        best = 0.0
        for j in search:
            aw = model.weight(j)
            if aw == 0.0 or math.isinf(aw):
                continue
            best = max(best, aw * oracle.tail(j))
        return ConditionBound(best, certified=False)

    raise TailUnavailable("no closed form and no search set supplied")


def _spline_condition_bound(model: SplineWeights, oracle: TailOracle) -> ConditionBound | None:
    # a_j * tail(j) depends on j only through its support sigma:
    #   prod_{k in sigma} 1/(1 - rho_k) * sum_{omega >= sigma} ...
    if model.gamma.is_finite_support or not isinstance(model.gamma, ProductGamma):
        try:
            supports = list(model.gamma.iter_support())
        except TailUnavailable:
            return None
        best = 0.0
        for sigma in supports:
            gv = model.gamma.value(sigma)
            if gv == 0.0:
                continue
            inner = []
            for omega in supports:
                if not omega.issuperset(sigma):
                    continue
                term = model.gamma.value(omega) / gv
                for k in omega.minus(sigma):
                    term *= model.entry_tail(k)
                inner.append(term)
            ratio_val = math.fsum(inner)
            for k in sigma:
                ratio_val /= 1.0 - model.level_decay(k)
            best = max(best, ratio_val)
        return ConditionBound(best, certified=True)

    # product gamma over infinitely many coordinates:
    #   sup over sigma = prod_k max(1/(1 - rho_k), 1 + t_k)
    rho_seq = model.s.dyadic_decay_seq()
    if rho_seq.sum() == math.inf:
        return None  # the per-level slack alone is unbounded across coordinates
    mult = model.multiplier_seq()
    if mult.sum() == math.inf:
        return None
    log_acc = 0.0
    k = 1
    while True:
        rho = model.level_decay(k)
        t = model.coord_entry_factor(k) / (1.0 - rho)
        log_acc += max(-math.log1p(-rho), math.log1p(t))
        rem = rho_seq.tail_sum(k) / (1.0 - rho_seq.tail_sup(k)) + mult.tail_sum(k) / (
            1.0 - rho_seq.tail_sup(k)
        )
        if rem <= 1e-16 * (abs(log_acc) + 1.0):
            return ConditionBound(math.exp(log_acc + 0.5 * rem), certified=True)
        k += 1
        if k > 5_000_000:
            raise TailUnavailable("condition-bound summation did not converge")


def optimal_split_value(a_list, u_norm_sq: float, divergent: bool = False) -> float:
    """Minimal weighted energy of a split of one vector across spaces.

    For positive weights a_1..a_n the minimum of sum a_i * ||u_i||**2 over
    all decompositions u = sum u_i equals (sum 1/a_i)**-1 * ||u||**2; a
    divergent infinite family is flagged by the caller and yields 0.
    """
    if divergent:
        return 0.0
    a_list = list(a_list)
    if not a_list:
        raise ConfigInvalid("need at least one weight")
    if any(a <= 0 for a in a_list):
        raise ConfigInvalid("weights must be positive")
    return u_norm_sq / math.fsum(1.0 / a for a in a_list)


# ---------------------------------------------------------------------------
# JSON construction


def weights_from_json(obj) -> WeightModel:
    """Build a weight model from JSON.

    Types: ``unit``; ``product`` (gamma sequence spec); ``spline`` (gamma
    model, s, lam); ``aniso`` (gamma model, s); ``table`` (entries as
    [index, value] pairs); ``scaled`` (base, factor).
    """
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigInvalid(f"weight spec must be an object with 'type': {obj!r}")
    t = obj["type"]
    if t == "unit":
        _require(obj, {"type"})
        return UnitWeights()
    if t == "product":
        _require(obj, {"type", "gamma"})
        return ProductWeights(seq_from_json(obj["gamma"]))
    if t == "spline":
        _require(obj, {"type", "gamma", "s", "lam"})
        return SplineWeights(
            gamma_from_json(obj["gamma"]), obj.get("s", 1.0), obj.get("lam", 1.0)
        )
    if t == "aniso":
        _require(obj, {"type", "gamma", "s"})
        return AnisotropicWeights(gamma_from_json(obj["gamma"]), obj.get("s", 1.0))
    if t == "table":
        _require(obj, {"type", "entries", "assert_monotone"})
        entries = {}
        for pair in obj["entries"]:
            if not (isinstance(pair, list) and len(pair) == 2):
                raise ConfigInvalid(f"table entry must be [index, value]: {pair!r}")
            entries[IndexVector.from_json_obj(pair[0])] = float(pair[1])
        return TableWeights(entries, assert_monotone=bool(obj.get("assert_monotone", False)))
    if t == "scaled":
        _require(obj, {"type", "base", "factor"})
        return ScaledWeights(weights_from_json(obj["base"]), float(obj["factor"]))
    raise ConfigInvalid(f"unknown weight type {t!r}")


def _require(obj: dict, allowed: set):
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigInvalid(f"unknown keys {sorted(unknown)} in weight spec")
