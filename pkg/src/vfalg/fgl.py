"""Formal group laws over graded coefficient rings.

A law is a series F(z, w) = z + w + sum_{i,j>=1} F_ij z^i w^j validated for
commutativity, unitality and associativity up to a working order.  The
module computes the formal inverse iota (F(z, iota(z)) = 0), integer
multiples [n](x), meromorphic expansions of F^n in either variable-order
regime, and coefficient tables F^n_ij used by the homology pushforwards.
"""
from __future__ import annotations

from .coeffs import INHOMOGENEOUS, CoefficientRing
from .errors import InputError, ValidationError
from .series import (
    INF,
    MultiSeries,
    SeriesVariable,
    TruncationPolicy,
    Window,
    int_binom,
)

ZVAR = SeriesVariable("z", -2, laurent=True)
WVAR = SeriesVariable("w", -2, laurent=True)
VVAR = SeriesVariable("v", -2, laurent=True)
LAW_VARS = (ZVAR, WVAR)


def compose2(F: MultiSeries, A: MultiSeries, B: MultiSeries, policy: TruncationPolicy) -> MultiSeries:
    """Evaluate sum_{i,j} F_ij A^i B^j, truncating by the policy."""
    names = [v.name for v in F.vars]
    iz, iw = names.index("z"), names.index("w")
    table = {}
    for exps, c in F.terms.items():
        table[(exps[iz], exps[iw])] = c
    imax = max((i for i, _ in table), default=0)
    jmax = max((j for _, j in table), default=0)
    apow = [MultiSeries.const(A.ring, 1, A.vars)]
    for _ in range(imax):
        apow.append((apow[-1] * A).truncate(policy))
    bpow = [MultiSeries.const(B.ring, 1, B.vars)]
    for _ in range(jmax):
        bpow.append((bpow[-1] * B).truncate(policy))
    acc = None
    for (i, j) in sorted(table):
        piece = apow[i] * bpow[j] * table[(i, j)]
        acc = piece if acc is None else acc + piece
    if acc is None:
        acc = MultiSeries.zero(F.ring, A.vars)
    acc = acc.truncate(policy)
    # coefficients of F beyond its own trust are unknown, and for arguments
    # without constant term they feed total degrees at or above that bound
    fcut = F.window.tcut
    if fcut < acc.window.tcut:
        w = acc.window
        acc = MultiSeries(acc.ring, acc.vars, dict(acc.terms),
                          Window(w.cuts, w.floors, fcut, min(w.tfloor, fcut)))
    return acc


class FormalGroupLaw:
    """Validated formal group law; construct via fgl_make."""

    def __init__(self, series: MultiSeries, order: int, name: str | None = None):
        self.series = series
        self.ring = series.ring
        self.order = order
        self.name = name or "custom"
        self.policy = TruncationPolicy(order)
        self._inverse = {}
        self._g = None
        self._nser = {}
        self._pexp = {}
        self._ptable = None

    def __repr__(self):
        return f"FormalGroupLaw({self.name}, order={self.order})"

    def coefficient(self, i: int, j: int):
        return self.series.coefficient(z=i, w=j)

    def compose(self, A: MultiSeries, B: MultiSeries, policy: TruncationPolicy | None = None) -> MultiSeries:
        """F(A, B) for series arguments without constant terms."""
        return compose2(self.series, A, B, policy or self.policy)

    # -- inverse series -------------------------------------------------

    def inverse(self, policy: TruncationPolicy | None = None) -> MultiSeries:
        """iota with F(z, iota(z)) = 0; iota = -z + higher order.

        A deeper policy than the law's own extends the solve; coefficients
        the law's trust cannot pin down stay outside the result's window.
        """
        policy = policy or self.policy
        cached = self._inverse.get(policy.order)
        if cached is not None:
            return cached
        ring = self.ring
        z = MultiSeries.monomial(ring, (ZVAR,), "z")
        iota = -z
        for k in range(2, policy.order + 1):
            r = self.compose(z, iota, policy)
            c = r.coefficient(z=k)
            if c:
                # F(z, iota + d z^k) = F(z, iota) + d z^k + O(z^{k+1})
                iota = iota - MultiSeries.monomial(ring, (ZVAR,), "z", k, c)
        check = self.compose(z, iota, policy)
        ok, witness = check.is_zero_within()
        if not ok:
            raise ValidationError(f"inverse series solve failed at {witness[0]}")
        out = iota.truncate(policy)
        fcut = self.series.window.tcut
        if fcut < out.window.tcut:
            w = out.window
            out = MultiSeries(ring, out.vars, dict(out.terms),
                              Window(w.cuts, w.floors, fcut, min(w.tfloor, fcut)))
        self._inverse[policy.order] = out
        return out

    # -- integer multiples ----------------------------------------------

    def n_series(self, n: int, policy: TruncationPolicy | None = None) -> MultiSeries:
        """[n](x): n-fold formal sum of x with itself, in the variable z."""
        policy = policy or self.policy
        key = (n, policy.order)
        if key in self._nser:
            return self._nser[key]
        ring = self.ring
        z = MultiSeries.monomial(ring, (ZVAR,), "z")
        if n == 0:
            out = MultiSeries.zero(ring, (ZVAR,))
        elif n == 1:
            out = z
        elif n > 1:
            out = self.compose(z, self.n_series(n - 1, policy), policy)
        else:
            out = self.inverse(policy).substitute("z", self.n_series(-n, policy))
        out = out.truncate(policy)
        self._nser[key] = out
        return out

    # -- meromorphic expansions ------------------------------------------

    def g_series(self) -> MultiSeries:
        """G with F(z, w) = z + w + z w G(z, w)."""
        if self._g is not None:
            return self._g
        names = [v.name for v in self.series.vars]
        iz, iw = names.index("z"), names.index("w")
        terms = {}
        for exps, c in self.series.terms.items():
            i, j = exps[iz], exps[iw]
            if (i, j) in ((1, 0), (0, 1)):
                continue
            if i < 1 or j < 1:
                raise ValidationError(f"law has a stray term at z^{i} w^{j}")
            key = list(exps)
            key[iz] -= 1
            key[iw] -= 1
            terms[tuple(key)] = c
        w = self.series.window
        win = Window(
            {n: _shift_cut(w.cut(n), -1) for n in ("z", "w") if w.cut(n) < INF},
            {},
            w.tcut - 2 if w.tcut < INF else INF,
            0,
        )
        self._g = MultiSeries(self.ring, self.series.vars, terms, win)
        return self._g

    def power_expand(self, n: int, principal: str = "z", secondary: str = "w",
                     policy: TruncationPolicy | None = None) -> MultiSeries:
        """Expansion of F(z, w)^n treating `principal` as the large variable.

        For n >= 0 this is the plain power.  For n < 0 the result lies in
        R((principal))[[secondary]]: per fixed secondary exponent only
        finitely many principal exponents occur, and the window records
        that the principal variable is unbounded below overall.
        """
        if principal == secondary or {principal, secondary} != {"z", "w"}:
            raise InputError("expansion needs the two law variables in some order")
        policy = policy or self.policy
        key = (n, principal, policy.order, tuple(sorted(policy.var_orders.items())))
        if key in self._pexp:
            return self._pexp[key]
        if n >= 0:
            out = self.series ** n
            out = out.truncate(policy)
        else:
            G = self.g_series()
            pmono = MultiSeries.monomial(self.ring, self.series.vars, principal)
            S = pmono * G + 1
            K = min(policy.cut_for(secondary), policy.order - n)
            inner = TruncationPolicy(
                policy.order - n,
                {principal: policy.cut_for(principal) - n + K, secondary: K},
            )
            P = MultiSeries.const(self.ring, 1, self.series.vars)
            acc = MultiSeries.zero(self.ring, self.series.vars)
            for k in range(K + 1):
                b = int_binom(n, k)
                term = (P * b).shift_var(principal, n - k).shift_var(secondary, k)
                acc = acc + term
                if k < K:
                    P = (P * S).truncate(inner)
            w = acc.window
            win = Window(
                {
                    principal: min(w.cut(principal), policy.cut_for(principal)),
                    secondary: min(w.cut(secondary), K),
                },
                {principal: None, secondary: 0},
                min(w.tcut, policy.order),
                n,
            )
            out = MultiSeries(self.ring, acc.vars, dict(acc.terms), win)
        self._pexp[key] = out
        return out

    def power_coeffs(self, n: int, policy: TruncationPolicy | None = None) -> dict:
        """{(i, j): coefficient of z^i w^j in the z-regime expansion of F^n}."""
        exp = self.power_expand(n, "z", "w", policy)
        names = [v.name for v in exp.vars]
        iz, iw = names.index("z"), names.index("w")
        return {(e[iz], e[iw]): c for e, c in exp.terms.items()}

    def positive_power_table(self, nmax: int) -> dict:
        """{(i, j): {n: F^n_ij}} for 0 <= n <= nmax; drives mu pushforwards."""
        if self._ptable is not None and self._ptable[0] >= nmax:
            return self._ptable[1]
        table = {}
        power = MultiSeries.const(self.ring, 1, self.series.vars)
        names = [v.name for v in self.series.vars]
        iz, iw = names.index("z"), names.index("w")
        for n in range(nmax + 1):
            if n:
                power = power * self.series
            for exps, c in power.terms.items():
                table.setdefault((exps[iz], exps[iw]), {})[n] = c
        self._ptable = (nmax, table)
        return table


def _shift_cut(cut, delta):
    return INF if cut >= INF else cut + delta


def fgl_make(series: MultiSeries, order: int = 12, name: str | None = None) -> FormalGroupLaw:
    """Validate a candidate law up to `order` and wrap it.

    Checks, each with a witness on failure: unit rows F(z,0)=z and F(0,w)=w,
    commutativity, homogeneity of total degree -2 when the ring is graded,
    and associativity F(F(z,w),v) = F(z,F(w,v)) compared coefficientwise up
    to total order `order`.
    """
    names = sorted(v.name for v in series.vars)
    if names != ["w", "z"]:
        raise InputError("a law must be a series in exactly the variables z and w")
    for v in series.vars:
        if not (v.laurent and v.is_field):
            raise InputError("law variables must be Laurent field variables")
    w = series.window
    if w.tcut < order or w.cut("z") < order or w.cut("w") < order:
        raise ValidationError(f"series is not trusted up to the requested order {order}")
    policy = TruncationPolicy(order)
    F = series.truncate(policy)
    ring = F.ring

    zmono = MultiSeries.monomial(ring, LAW_VARS, "z")
    wmono = MultiSeries.monomial(ring, LAW_VARS, "w")
    parts = F.group_by("w")
    ok, witness = parts.get(0, MultiSeries.zero(ring, (ZVAR,))).equal_within(
        MultiSeries.monomial(ring, (ZVAR,), "z")
    )
    if not ok:
        raise ValidationError(f"unit row F(z,0) != z at z^{witness[0][0]}: {witness[1]} != {witness[2]}")
    parts = F.group_by("z")
    ok, witness = parts.get(0, MultiSeries.zero(ring, (WVAR,))).equal_within(
        MultiSeries.monomial(ring, (WVAR,), "w")
    )
    if not ok:
        raise ValidationError(f"unit row F(0,w) != w at w^{witness[0][0]}: {witness[1]} != {witness[2]}")

    swapped = F.rename_vars({"z": "w", "w": "z"})
    ok, witness = F.equal_within(swapped)
    if not ok:
        exps, lhs, rhs = witness
        ez, ew = _zw_exps(F, exps)
        raise ValidationError(
            f"commutativity fails at z^{ez} w^{ew}: {lhs} != {rhs}"
        )

    if ring.grading_enabled:
        for exps, c in F.terms.items():
            d = c.degree()
            ez, ew = _zw_exps(F, exps)
            if d == INHOMOGENEOUS or d != 2 * ez + 2 * ew - 2:
                raise ValidationError(
                    f"coefficient at z^{ez} w^{ew} has degree {d}, expected {2 * ez + 2 * ew - 2}"
                )

    three = (ZVAR, WVAR, VVAR)
    vmono = MultiSeries.monomial(ring, three, "v")
    lhs = compose2(F, F.with_vars(three), vmono, policy)
    inner = F.rename_vars({"z": "w", "w": "v"}).with_vars(three)
    rhs = compose2(F, zmono.with_vars(three), inner, policy)
    ok, witness = lhs.equal_within(rhs)
    if not ok:
        exps, lv, rv = witness
        named = dict(zip([v.name for v in lhs.vars], exps))
        raise ValidationError(
            "associativity fails at z^{z} w^{w} v^{v}: {l} != {r}".format(
                z=named.get("z", 0), w=named.get("w", 0), v=named.get("v", 0), l=lv, r=rv
            )
        )
    # keep the caller's window: an exact polynomial law stays exact, so the
    # coefficient tables F^n_ij remain valid past the validation order
    return FormalGroupLaw(series, order, name)


def _zw_exps(F, exps):
    names = [v.name for v in F.vars]
    return exps[names.index("z")], exps[names.index("w")]


def additive_law(order: int = 12, ring: CoefficientRing | None = None) -> FormalGroupLaw:
    """F(z, w) = z + w."""
    ring = ring or CoefficientRing("Z")
    F = MultiSeries.from_terms(ring, LAW_VARS, {(1, 0): 1, (0, 1): 1})
    return fgl_make(F, order, "additive")


def multiplicative_law(order: int = 12, ring: CoefficientRing | None = None) -> FormalGroupLaw:
    """F(z, w) = z + w + z w, trivially graded by default."""
    ring = ring or CoefficientRing("Z", grading_enabled=False)
    F = MultiSeries.from_terms(ring, LAW_VARS, {(1, 0): 1, (0, 1): 1, (1, 1): 1})
    return fgl_make(F, order, "multiplicative")


def law_from_table(ring: CoefficientRing, coefficients: dict, order: int = 12,
                   name: str | None = None) -> FormalGroupLaw:
    """Build z + w + sum coefficients[(i, j)] z^i w^j and validate it."""
    terms = {(1, 0): ring.one, (0, 1): ring.one}
    for (i, j), c in coefficients.items():
        if i < 1 or j < 1:
            raise InputError(f"law table entries need i, j >= 1, got ({i}, {j})")
        c = ring.element(c)
        if c:
            terms[(i, j)] = terms.get((i, j), ring.zero) + c
    F = MultiSeries.from_terms(ring, LAW_VARS, terms)
    return fgl_make(F, order, name)
