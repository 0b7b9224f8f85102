"""Brute-force cover-level evaluator of the state-to-field composite.

Used as an independent oracle: everything is recomputed from scratch per
call with sympy polynomials — no caching, no shared tables, no imports from
the package under test.  States are cover basis classes t_lam on BU(n),
written as descending exponent tuples; the field is returned as a plain
dict {(key, z_exponent): int}.

The composite evaluated is: cap the box product with the total class of the
pairing symbol, apply the shift series to the first factor, push forward
along the sum map.  All pushforwards are computed by pairing against
monomial symmetric polynomials, which are dual to the cover basis.
"""

import itertools

import sympy as sp


def law_series(name, z, w):
    if name == "additive":
        return z + w
    if name == "multiplicative":
        return z + w + z * w
    raise ValueError(f"oracle does not know the law {name!r}")


def inverse_series(name, y, cutoff):
    if name == "additive":
        return -y
    if name == "multiplicative":
        # solve y + i + y*i = 0 termwise: i = -y/(1+y)
        return sum((-1) ** k * y**k for k in range(1, cutoff + 1))
    raise ValueError(f"oracle does not know the law {name!r}")


def _nil_truncate(expr, roots, cutoff):
    """Drop monomials with any root exponent above the nilpotence cutoff."""
    expr = sp.expand(expr)
    if not roots:
        return expr
    poly = sp.Poly(expr, *roots)
    kept = 0
    for exps, coef in poly.terms():
        if all(e <= cutoff for e in exps):
            kept += coef * sp.prod(r**e for r, e in zip(roots, exps))
    return sp.expand(kept)

def _poly_dict(expr, gens):
    """{exponent tuple: integer} for a polynomial with integer coefficients."""
    expr = sp.expand(expr)
    if expr == 0:
        return {}
    poly = sp.Poly(expr, *gens)
    return {exps: int(c) for exps, c in poly.terms()}


def _partitions(total, parts):
    """Descending exponent tuples of the given length summing to total."""
    if parts == 0:
        return [()] if total == 0 else []
    out = []

    def rec(rest, bound, acc):
        if len(acc) == parts:
            if rest == 0:
                out.append(tuple(acc))
            return
        for v in range(min(rest, bound), -1, -1):
            rec(rest - v, v, acc + [v])

    rec(total, total, [])
    return out


def _monomial_symmetric(mu, xs):
    """m_mu: the sum of all distinct permutations of the exponent tuple."""
    return sum(
        sp.prod(x**e for x, e in zip(xs, perm))
        for perm in set(itertools.permutations(mu))
    )


def _scaling_push(k, rho, xs, law, u, cutoff):
    """Coefficients of the scaling pushforward of t_k boxtimes t_rho.

    <push(t_k x t_rho), m_mu> = coefficient of u^k * x^rho in m_mu evaluated
    at the law-twisted roots, since the scaling map pulls each root x_i back
    to F(u, x_i).  Every total |mu| <= |rho| + k can contribute when the law
    has cross terms, so all of them are scanned.
    """
    n = len(xs)
    twisted = [law_series(law, u, x) for x in xs]
    out = {}
    for mu in (m for t in range(sum(rho) + k + 1) for m in _partitions(t, n)):
        if mu and mu[0] > cutoff:
            continue
        evaluated = sp.expand(_monomial_symmetric(mu, xs).subs(
            list(zip(xs, twisted)), simultaneous=True))
        coeff = _poly_dict(evaluated, [u] + list(xs)).get((k,) + tuple(rho), 0)
        if coeff:
            out[mu] = coeff
    return out


def brute_force_field(law, order, degree, alpha, lam, beta, mu):
    """The field of the pair (t_lam on BU(alpha), t_mu on BU(beta)).

    Returns {(key, z_exp): int} with keys descending tuples of length
    alpha + beta and total index at most degree // 2, z_exp <= order.
    """
    cutoff = degree // 2
    xs = sp.symbols([f"ox{i}" for i in range(1, alpha + 1)])
    ys = sp.symbols([f"oy{j}" for j in range(1, beta + 1)])
    u, z = sp.symbols("ou oz")
    roots = list(xs) + list(ys)

    # total class of the pairing symbol: one line for every (left, right) pair
    C = sp.Integer(1)
    for x in xs:
        for y in ys:
            c1 = _nil_truncate(
                law_series(law, x, inverse_series(law, y, cutoff)), roots, cutoff)
            C = _nil_truncate(C * law_series(law, z, c1), roots, cutoff)

    capped = {}
    for exps, coef in _poly_dict(C, list(xs) + list(ys) + [z]).items():
        xe, ye, zd = exps[:alpha], exps[alpha:alpha + beta], exps[-1]
        rho = tuple(a - b for a, b in zip(lam, xe))
        sig = tuple(a - b for a, b in zip(mu, ye))
        if min(rho, default=0) < 0 or min(sig, default=0) < 0:
            continue
        key = (rho, sig, zd)
        capped[key] = capped.get(key, 0) + coef

    out = {}
    for (rho, sig, zd), coef in capped.items():
        rho = tuple(sorted(rho, reverse=True))
        for k in range(0, order - zd + 1):
            for nu, c2 in _scaling_push(k, rho, xs, law, u, cutoff).items():
                key = tuple(sorted(nu + tuple(sig), reverse=True))
                if sum(key) > cutoff:
                    continue
                spot = (key, zd + k)
                out[spot] = out.get(spot, 0) + coef * c2
    return {k: v for k, v in out.items() if v}
