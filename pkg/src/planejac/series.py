"""Truncated bivariate power series: formal local inversion of plane maps
with invertible linear part, origin translation, axis restriction, and the
heuristic polynomial-tail detector.

All coefficients are exact Gaussian rationals; truncation is by total degree,
so every identity below means "equal through total degree N".
"""

from __future__ import annotations

from .gaussian import GR_ONE, GR_ZERO, GaussianRational
from .poly import Poly, PolyMap, jacobian


class TruncSeries2:
    """Bivariate series truncated at total degree `order` (inclusive)."""

    __slots__ = ("order", "terms", "vars")

    def __init__(self, order, terms=None, vars=("u", "v")):
        if order < 1:
            raise ValueError("truncation order must be positive")
        self.order = int(order)
        self.vars = tuple(vars)
        self.terms = {}
        if terms:
            for (eu, ev), c in terms.items():
                if eu < 0 or ev < 0:
                    raise ValueError("series exponents must be nonnegative")
                if eu + ev > self.order:
                    continue
                c = GaussianRational.coerce(c)
                if c:
                    self.terms[(eu, ev)] = c

    # ------------------------------------------------------------ arithmetic

    def _meet(self, other):
        if isinstance(other, TruncSeries2):
            return min(self.order, other.order)
        return self.order

    def __add__(self, other):
        other = self._coerce(other)
        n = self._meet(other)
        terms = {e: c for e, c in self.terms.items() if sum(e) <= n}
        for e, c in other.terms.items():
            if sum(e) > n:
                continue
            s = terms.get(e, GR_ZERO) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return TruncSeries2(n, terms, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries2(self.order, {e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        n = self._meet(other)
        terms = {}
        for (a1, b1), c1 in self.terms.items():
            if a1 + b1 > n:
                continue
            for (a2, b2), c2 in other.terms.items():
                e = (a1 + a2, b1 + b2)
                if e[0] + e[1] > n:
                    continue
                c = c1 * c2
                s = terms.get(e)
                if s is None:
                    terms[e] = c
                else:
                    s = s + c
                    if s:
                        terms[e] = s
                    else:
                        del terms[e]
        return TruncSeries2(n, terms, self.vars)

    __rmul__ = __mul__

    def _coerce(self, x):
        if isinstance(x, TruncSeries2):
            return x
        return TruncSeries2(self.order, {(0, 0): GaussianRational.coerce(x)}, self.vars)

    def __pow__(self, k):
        r = TruncSeries2(self.order, {(0, 0): GR_ONE}, self.vars)
        b = self
        k = int(k)
        while k:
            if k & 1:
                r = r * b
            k >>= 1
            if k:
                b = b * b
        return r

    def __eq__(self, other):
        if not isinstance(other, TruncSeries2):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def constant(self):
        return self.terms.get((0, 0), GR_ZERO)

    def truncated(self, n):
        return TruncSeries2(min(n, self.order), dict(self.terms), self.vars)

    def max_nonzero_degree(self):
        return max((sum(e) for e in self.terms), default=None)

    def to_poly(self):
        return Poly(self.vars, {e: c for e, c in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def __str__(self):
        body = str(self.to_poly())
        return f"{body} + O(deg {self.order + 1})"

    __repr__ = __str__

    def to_json(self):
        return {
            "order": self.order,
            "terms": [
                {"eu": e[0], "ev": e[1], "re_num": c.a, "im_num": c.b, "den": c.d}
                for e, c in sorted(self.terms.items())
            ],
        }


class TruncSeries1:
    """Univariate series truncated at degree `order`."""

    __slots__ = ("order", "coeffs", "var")

    def __init__(self, order, coeffs=None, var="u"):
        self.order = int(order)
        self.var = var
        self.coeffs = {}
        if coeffs:
            for d, c in coeffs.items():
                c = GaussianRational.coerce(c)
                if c and d <= self.order:
                    self.coeffs[int(d)] = c

    def coefficient(self, d):
        return self.coeffs.get(d, GR_ZERO)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries1):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __str__(self):
        if not self.coeffs:
            body = "0"
        else:
            p = Poly((self.var,), {(d,): c for d, c in self.coeffs.items()})
            body = str(p)
        return f"{body} + O({self.var}^{self.order + 1})"

    __repr__ = __str__


class SeriesMap:
    """A pair of equal-order truncated series (the shape of a local inverse)."""

    __slots__ = ("g1", "g2")

    def __init__(self, g1, g2):
        if g1.order != g2.order:
            raise ValueError("component orders differ")
        self.g1 = g1
        self.g2 = g2

    @property
    def order(self):
        return self.g1.order

    def __eq__(self, other):
        if not isinstance(other, SeriesMap):
            return NotImplemented
        return self.g1 == other.g1 and self.g2 == other.g2

    def __repr__(self):
        return f"SeriesMap({self.g1}, {self.g2})"


def truncate(f, order, vars=("u", "v")):
    """Poly -> TruncSeries2, dropping terms of total degree > order."""
    if f.is_laurent():
        raise ValueError("cannot truncate a Laurent polynomial into a series")
    terms = {}
    src_vars = f.vars
    for exps, c in f.terms.items():
        used = [(w, e) for w, e in zip(src_vars, exps) if e != 0]
        if any(w not in vars and e != 0 for w, e in zip(src_vars, exps)):
            # rename positionally: a source-variable polynomial becomes a
            # series in the target variables
            pass
        eu = ev = 0
        for w, e in zip(src_vars, exps):
            if e == 0:
                continue
            if w == vars[0]:
                eu = e
            elif w == vars[1]:
                ev = e
            else:
                raise ValueError(f"unexpected variable {w} in series truncation")
        if eu + ev <= order:
            terms[(eu, ev)] = c
    return TruncSeries2(order, terms, vars)


def _poly_into_series(f, s1, s2, order):
    """f(x, y) with the two series substituted, truncated at `order`."""
    result = TruncSeries2(order, {}, s1.vars)
    pow1 = {0: TruncSeries2(order, {(0, 0): GR_ONE}, s1.vars)}
    pow2 = {0: TruncSeries2(order, {(0, 0): GR_ONE}, s1.vars)}

    def pw(cache, base, e):
        if e not in cache:
            cache[e] = pw(cache, base, e - 1) * base
        return cache[e]

    ix = f.vars.index("x") if "x" in f.vars else None
    iy = f.vars.index("y") if "y" in f.vars else None
    for exps, c in f.terms.items():
        ex = exps[ix] if ix is not None else 0
        ey = exps[iy] if iy is not None else 0
        term = pw(pow1, s1, ex) * pw(pow2, s2, ey)
        result = result + TruncSeries2(order, {e: k * c for e, k in term.terms.items()}, s1.vars)
    return result


def compose_truncated(G, F, order=None):
    """F o G truncated: substitute the series pair G into the polynomial map F.

    Raises when G has a nonzero constant term (the composition would not be a
    series at the origin in any controlled sense here).
    """
    n = order if order is not None else G.order
    if G.g1.constant() or G.g2.constant():
        raise ValueError("inner series must fix the origin (constant-term mismatch)")
    g1 = G.g1.truncated(n)
    g2 = G.g2.truncated(n)
    return SeriesMap(
        _poly_into_series(F.p, g1, g2, n),
        _poly_into_series(F.q, g1, g2, n),
    )


def local_inverse(F, order):
    """The truncated formal inverse series G with F o G = id = G o F through
    total degree `order`.

    Requires F(0,0) = (0,0) and an invertible linear part.  Splits F = L + H
    and iterates G <- L^{-1} o (Id - H o G), which fixes one further degree
    per pass.
    """
    p00 = F.p.evaluate({"x": 0, "y": 0})
    q00 = F.q.evaluate({"x": 0, "y": 0})
    if p00 or q00:
        raise ValueError("map must fix the origin; translate first")
    # linear part L = [[a, b], [c, d]] acting on (x, y)
    a = F.p.terms.get(_exps(F.p, 1, 0), GR_ZERO)
    b = F.p.terms.get(_exps(F.p, 0, 1), GR_ZERO)
    c = F.q.terms.get(_exps(F.q, 1, 0), GR_ZERO)
    d = F.q.terms.get(_exps(F.q, 0, 1), GR_ZERO)
    det = a * d - b * c
    if not det:
        raise ValueError("linear part is singular; no formal inverse")
    # L^{-1} applied to (u, v)
    inv = (
        (d / det, -b / det),
        (-c / det, a / det),
    )
    hp = F.p - _linear_poly(F.p.vars, a, b)
    hq = F.q - _linear_poly(F.q.vars, c, d)

    u_lin = TruncSeries2(order, {(1, 0): inv[0][0], (0, 1): inv[0][1]})
    v_lin = TruncSeries2(order, {(1, 0): inv[1][0], (0, 1): inv[1][1]})
    ident_u = TruncSeries2(order, {(1, 0): GR_ONE})
    ident_v = TruncSeries2(order, {(0, 1): GR_ONE})

    g1, g2 = u_lin, v_lin
    for _ in range(order):
        h1 = _poly_into_series(hp, g1, g2, order)
        h2 = _poly_into_series(hq, g1, g2, order)
        r1 = ident_u - h1
        r2 = ident_v - h2
        n1 = r1 * inv[0][0] + r2 * inv[0][1]
        n2 = r1 * inv[1][0] + r2 * inv[1][1]
        if n1 == g1 and n2 == g2:
            break
        g1, g2 = n1, n2
    return SeriesMap(g1, g2)


def _exps(f, ex, ey):
    return tuple(
        ex if w == "x" else ey if w == "y" else 0 for w in f.vars
    )


def _linear_poly(vars, a, b):
    return Poly(vars, {_exps_for(vars, 1, 0): a, _exps_for(vars, 0, 1): b})


def _exps_for(vars, ex, ey):
    return tuple(ex if w == "x" else ey if w == "y" else 0 for w in vars)


def translate_map(F, a, b):
    """F(x+a, y+b) - F(a, b); fixes the origin.  Gaussian-integer
    coefficients and a Jacobian identical to the original are asserted
    (translation cannot change either)."""
    xs = Poly.var("x", ("x", "y")) + Poly.const(a, ("x", "y"))
    ys = Poly.var("y", ("x", "y")) + Poly.const(b, ("x", "y"))
    vals = {"x": xs, "y": ys}
    fa = F.p.evaluate({"x": a, "y": b})
    fb = F.q.evaluate({"x": a, "y": b})
    G = PolyMap(F.p.evaluate(vals) - Poly.const(fa, ("x", "y")),
                F.q.evaluate(vals) - Poly.const(fb, ("x", "y")))
    if F.is_integral():
        ga = GaussianRational.coerce(a)
        gb = GaussianRational.coerce(b)
        if ga.is_gaussian_integer() and gb.is_gaussian_integer():
            assert G.is_integral()
    jf = jacobian(F)
    if jf.is_constant():
        assert jacobian(G) == jf
    return G


def restrict_to_axis(G, axis="u"):
    """Set the other variable to 0 in both components; returns a pair of
    univariate truncated series in `axis`."""
    if axis not in ("u", "v"):
        raise ValueError("axis must be 'u' or 'v'")
    keep = 0 if axis == "u" else 1
    out = []
    for s in (G.g1, G.g2):
        coeffs = {}
        for (eu, ev), c in s.terms.items():
            e = (eu, ev)
            if e[1 - keep] == 0:
                coeffs[e[keep]] = c
        out.append(TruncSeries1(s.order, coeffs, var=axis))
    return out[0], out[1]


def detect_polynomial_tail(series, window):
    """Heuristic verdict on whether a truncated univariate series looks like
    a polynomial: inspects the last `window` coefficient slots.

    'poly-like'  - every coefficient of degree in (N-window, N] vanishes;
    'not-poly'   - some Gaussian-integer coefficient of modulus >= 1 sits in
                   that window (integer series cannot taper below 1);
    'inconclusive' otherwise.  This is evidence from a finite truncation,
    never a proof; the verdict records the window it used.
    """
    n = series.order
    if window > n:
        raise ValueError("window exceeds series order")
    lo = n - window
    tail = {d: c for d, c in series.coeffs.items() if lo < d <= n}
    if not tail:
        return {"verdict": "poly-like", "window": window, "order": n}
    for d, c in sorted(tail.items()):
        if c.is_gaussian_integer() and c.num.norm() >= 1:
            return {
                "verdict": "not-poly",
                "window": window,
                "order": n,
                "witness_degree": d,
            }
    return {"verdict": "inconclusive", "window": window, "order": n}
