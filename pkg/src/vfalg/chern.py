"""Chern classes for virtual sums of line-bundle monomials.

A BundleSymbol is a formal integer combination of line bundles on a model:
each monomial is a tensor product of powers of the model's root lines, and
a separate integer counts trivial summands.  Genuine symbols admit ordinary
Chern classes (elementary symmetric polynomials in root first Chern
classes).  Arbitrary symbols admit the total Laurent class

    C_z(theta) = prod_m F(z, c1(m))^{mult(m)} * z^{trivial_rank},

computed with formal-group arithmetic; negative multiplicities invert in
the z-direction, producing finitely many terms per z power.  The z slot
accepts any substituted argument series (such as iota(z) or F(z, w)), which
is how tensor-twist identities are evaluated.
"""
from __future__ import annotations

from math import comb

from .errors import ContractError, InputError
from .fgl import FormalGroupLaw
from .series import EXACT, MultiSeries, SeriesVariable, TruncationPolicy
from .spaces import HClass, SpaceModel

ZFIELD = SeriesVariable("z", -2, laurent=True)


def _canon_exps(exps) -> tuple:
    if isinstance(exps, dict):
        items = exps.items()
    else:
        items = exps
    out = {}
    for name, e in items:
        if not isinstance(e, int):
            raise InputError(f"exponent for {name!r} must be an integer")
        if e:
            out[name] = out.get(name, 0) + e
    return tuple(sorted((n, e) for n, e in out.items() if e))


class BundleSymbol:
    """Virtual combination of line monomials plus a trivial rank."""

    __slots__ = ("monomials", "trivial_rank")

    def __init__(self, monomials=(), trivial_rank: int = 0):
        merged = {}
        for mult, exps in monomials:
            exps = _canon_exps(exps)
            if not exps:
                trivial_rank += mult
                continue
            merged[exps] = merged.get(exps, 0) + mult
        self.monomials = tuple(
            (m, e) for e, m in sorted(merged.items()) if m
        )
        self.trivial_rank = trivial_rank

    @classmethod
    def line(cls, **exps) -> BundleSymbol:
        return cls(((1, exps),))

    @classmethod
    def trivial(cls, rank: int) -> BundleSymbol:
        return cls((), rank)

    @property
    def rank(self) -> int:
        return self.trivial_rank + sum(m for m, _ in self.monomials)

    @property
    def is_zero(self) -> bool:
        return not self.monomials and not self.trivial_rank

    @property
    def is_genuine(self) -> bool:
        return self.trivial_rank >= 0 and all(m >= 0 for m, _ in self.monomials)

    def __add__(self, other: BundleSymbol) -> BundleSymbol:
        return BundleSymbol(
            self.monomials + other.monomials, self.trivial_rank + other.trivial_rank
        )

    def __neg__(self) -> BundleSymbol:
        return BundleSymbol(
            tuple((-m, e) for m, e in self.monomials), -self.trivial_rank
        )

    def __sub__(self, other: BundleSymbol) -> BundleSymbol:
        return self + (-other)

    def dual(self) -> BundleSymbol:
        """Replace every line by its inverse; trivial summands are self-dual."""
        return BundleSymbol(
            tuple((m, tuple((n, -e) for n, e in exps)) for m, exps in self.monomials),
            self.trivial_rank,
        )

    def tensor_line(self, exps) -> BundleSymbol:
        """Tensor the whole symbol with one line monomial."""
        shift = dict(_canon_exps(exps))
        if not shift:
            return self
        out = []
        for m, e in self.monomials:
            d = dict(e)
            for n, k in shift.items():
                d[n] = d.get(n, 0) + k
            out.append((m, d))
        if self.trivial_rank:
            out.append((self.trivial_rank, shift))
        return BundleSymbol(tuple(out), 0)

    def rename_roots(self, mapping: dict) -> BundleSymbol:
        return BundleSymbol(
            tuple(
                (m, tuple((mapping.get(n, n), e) for n, e in exps))
                for m, exps in self.monomials
            ),
            self.trivial_rank,
        )

    def __eq__(self, other):
        return (
            isinstance(other, BundleSymbol)
            and self.monomials == other.monomials
            and self.trivial_rank == other.trivial_rank
        )

    def __hash__(self):
        return hash((self.monomials, self.trivial_rank))

    def __str__(self):
        parts = []
        for m, exps in self.monomials:
            body = "*".join(f"{n}^{e}" if e != 1 else n for n, e in exps)
            parts.append(f"{m:+d}[{body}]")
        if self.trivial_rank or not parts:
            parts.append(f"{self.trivial_rank:+d}[1]")
        return " ".join(parts)

    def __repr__(self):
        return f"<symbol {self}>"


def _exactify_nilpotent(s: MultiSeries) -> MultiSeries:
    """Upgrade to an exact window when nilpotence already kills everything
    the window distrusts: all variables nilpotent, per-variable cuts at or
    above each variable's last surviving power, total cut at or above the
    sum of those."""
    need = 0
    for v in s.vars:
        if v.nilpotent_order is None:
            return s
        need += v.nilpotent_order - 1
    w = s.window
    if w.tcut < need:
        return s
    if any(w.cut(v.name) < v.nilpotent_order - 1 for v in s.vars):
        return s
    return MultiSeries(s.ring, s.vars, dict(s.terms), EXACT, _normalized=True)


def root_c1(exps, law: FormalGroupLaw, model: SpaceModel,
            work: TruncationPolicy | None = None) -> MultiSeries:
    """First Chern class of a line monomial: the F-sum of [e_i] of each root.

    `work` must reach the nilpotence depth of the roots involved, or the
    substitution below refuses; the model's own depth is the default.
    """
    need = max((v.nilpotent_order - 1 for v in model.roots
                if v.nilpotent_order is not None), default=0)
    if work is None or work.order < need:
        work = TruncationPolicy(max(need, (work or law.policy).order))
    acc = None
    for name, e in _canon_exps(exps):
        xm = model.coh_root(name)
        if e == 1:
            term = xm
        else:
            term = law.n_series(e, work).substitute("z", xm)
        acc = term if acc is None else law.compose(acc, term, work)
    if acc is None:
        return MultiSeries.zero(model.ring, model.roots)
    return _exactify_nilpotent(acc)


def chern_class(symbol: BundleSymbol, i: int, law: FormalGroupLaw, model: SpaceModel) -> MultiSeries:
    """i-th elementary symmetric polynomial in the symbol's root classes."""
    if not symbol.is_genuine:
        raise ContractError("chern_class needs a genuine symbol; use total_chern_series")
    if i < 0:
        raise InputError("chern index must be nonnegative")
    one = model.coh_one()
    if i == 0:
        return one
    roots = []
    for mult, exps in symbol.monomials:
        c1 = root_c1(exps, law, model)
        roots.extend([c1] * mult)
    return elementary_symmetric(roots, i, one)


def _as_zarg(zarg, model: SpaceModel):
    if zarg is None:
        zarg = ZFIELD
    if isinstance(zarg, SeriesVariable):
        return MultiSeries.monomial(model.ring, (zarg,), zarg.name)
    return zarg


def working_policy(symbol: BundleSymbol, model: SpaceModel, policy: TruncationPolicy):
    """Widen the working order so window erosion from unit inversion cannot
    eat into the requested trust region; nilpotence keeps the extra terms
    finite."""
    neg = sum(-m for m, _ in symbol.monomials if m < 0)
    neg += max(0, -symbol.trivial_rank)
    if not neg:
        return policy
    budget = sum((v.nilpotent_order or 1) - 1 for v in model.roots)
    budget += sum(b - 1 for b in model.ring.truncations.values())
    return TruncationPolicy(policy.order + 2 * neg * (budget + 2))


def _product_series(symbol, law, model, zarg, pivot, work):
    acc = MultiSeries.const(model.ring, 1, zarg.vars)
    for mult, exps in symbol.monomials:
        f = law.compose(zarg, root_c1(exps, law, model, work), work)
        if mult < 0:
            f = f.invert_unit(pivot)
        for _ in range(abs(mult)):
            acc = (acc * f).truncate(work)
    if symbol.trivial_rank:
        zt = zarg if symbol.trivial_rank > 0 else zarg.invert_unit(pivot)
        for _ in range(abs(symbol.trivial_rank)):
            acc = (acc * zt).truncate(work)
    return acc


def total_chern_series(
    symbol: BundleSymbol,
    law: FormalGroupLaw,
    model: SpaceModel,
    zarg: MultiSeries | None = None,
    pivot: str = "z",
    policy: TruncationPolicy | None = None,
) -> MultiSeries:
    """The Laurent total class with the given argument in the z slot."""
    policy = policy or law.policy
    zarg = _as_zarg(zarg, model)
    work = working_policy(symbol, model, policy)
    return _product_series(symbol, law, model, zarg, pivot, work).truncate(policy)


def cap_total_chern(
    h: HClass,
    symbol: BundleSymbol,
    law: FormalGroupLaw,
    zarg: MultiSeries | None = None,
    pivot: str = "z",
    policy: TruncationPolicy | None = None,
) -> HClass:
    """h capped with the full total class.

    The product is assembled before capping: capping factor by factor would
    break on multi-root blocks, where a single factor is not symmetric in
    the block's roots even though the full class is.
    """
    policy = policy or law.policy
    zarg = _as_zarg(zarg, h.model)
    work = working_policy(symbol, h.model, policy)
    C = _product_series(symbol, law, h.model, zarg, pivot, work)
    return h.cap(C).map_values(lambda v: v.truncate(policy))


def k_lambda_chern(n: int, i: int) -> dict:
    """{p: coefficient} expressing the i-th K Chern class of a rank-n bundle
    as an integer combination of exterior powers."""
    if not 0 <= i <= n:
        raise InputError(f"index {i} out of range for rank {n}")
    out = {}
    for p in range(i + 1):
        c = (-1) ** (i + p) * comb(n - p, n - i)
        if c:
            out[p] = c
    return out


def elementary_symmetric(values, p: int, one: MultiSeries) -> MultiSeries:
    """e_p of a list of series, by the stepwise product recurrence."""
    if p == 0:
        return one
    zero = one * 0
    coeffs = [one] + [zero] * p
    for v in values:
        for k in range(p, 0, -1):
            coeffs[k] = coeffs[k] + coeffs[k - 1] * v
    return coeffs[p]


def evaluate_k_class(combo: dict, model: SpaceModel) -> MultiSeries:
    """Evaluate a {p: c} exterior-power combination on the split bundle whose
    lines are the model's roots, using [L_j] = 1 + x_j."""
    one = model.coh_one()
    lines = [one + model.coh_root(v.name) for v in model.roots]
    acc = MultiSeries.zero(model.ring, model.roots)
    for p, c in sorted(combo.items()):
        acc = acc + elementary_symmetric(lines, p, one) * c
    return acc
