"""Exceptional value sets of dominant plane polynomial maps: resultant-based
non-proper candidates, numeric certification by sampling, critical-value
curves, topological degree, and line-curve intersection counts.

A curve in the value plane is carried as ONE square-free defining polynomial
in (u, v) plus provenance tags; comparisons against known answers use
divisibility both ways rather than factorization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .gaussian import GR_ZERO, GaussianRational
from .poly import (Poly, PolyMap, divides, jacobian, poly_gcd,
                   resultant_allow_constant, squarefree_part)
from .roots import RootFindingError, cluster_roots, find_roots, poly_roots

UV = ("u", "v")


class ExceptionalError(RuntimeError):
    pass


def _empty_curve(provenance=()):
    return PlaneCurveSet(Poly.const(1, UV), list(provenance))


@dataclass
class PlaneCurveSet:
    """A plane curve in the value plane: square-free normalized defining
    polynomial over (u, v), provenance tags, and total degree.  A constant
    defining polynomial encodes the empty set."""

    defining: Poly
    provenance: list = field(default_factory=list)
    component_polys: list = field(default_factory=list)  # [(tag, Poly)]

    def __post_init__(self):
        d = self.defining._with_vars(UV) if self.defining.vars != UV else self.defining
        if d.is_zero():
            raise ValueError("defining polynomial must be nonzero")
        if not d.is_constant():
            d = squarefree_part(d)
        else:
            d = Poly.const(1, UV)
        self.defining = d.monic()

    @property
    def degree(self):
        return self.defining.total_degree()

    def is_empty(self):
        return self.defining.is_constant()

    def contains(self, u0, v0, tol=1e-9):
        if self.is_empty():
            return False
        return abs(complex(self.defining.evaluate({"u": u0, "v": v0}))) <= tol

    def to_json(self):
        return {
            "defining": str(self.defining),
            "degree": self.degree,
            "provenance": sorted(set(self.provenance)),
        }


@dataclass
class DegreeReport:
    deg_geo: int
    samples: list  # [(target (u0, v0) as strings, count)]
    agreed: bool

    def to_json(self):
        return {
            "value": self.deg_geo,
            "agreed": self.agreed,
            "trials": len(self.samples),
            "samples": [
                {"target": [str(u), str(v)], "count": c} for (u, v), c in self.samples
            ],
        }


# --------------------------------------------------------------------------
# non-proper candidates (leading coefficients of the two resultants)

def _shifted_components(F):
    """P - u and Q - v over (x, y, u, v)."""
    vars4 = ("x", "y", "u", "v")
    p = F.p._with_vars(vars4) - Poly.var("u", vars4)
    q = F.q._with_vars(vars4) - Poly.var("v", vars4)
    return p, q


def _leading_coeff_in(f, var):
    cs = f.coeffs_in(var)
    return cs[max(cs)]


def nonproper_candidates(F):
    """Square-free product of the non-constant leading coefficients (in u, v)
    of Res_y(P-u, Q-v) viewed in x and Res_x(P-u, Q-v) viewed in y.  This cuts
    out a superset of the non-properness locus; certify_nonproper filters it.
    """
    if jacobian(F).is_zero():
        raise ExceptionalError("map is not dominant (Jacobian vanishes identically)")
    p, q = _shifted_components(F)
    components = []
    failures = []
    for elim, view, tag in (("y", "x", "res_y"), ("x", "y", "res_x")):
        r = resultant_allow_constant(p, q, elim)
        if r.is_constant() or r.degree_in(view) == 0:
            failures.append(elim)
            continue
        lead = _leading_coeff_in(r, view)
        if lead.is_constant():
            continue
        components.append((f"nonproper-candidate:{tag}", squarefree_part(lead)))
    if len(failures) == 2:
        raise ExceptionalError(
            "both resultants degenerate (degree-0 elimination in x and y)"
        )
    if not components:
        return _empty_curve()
    product = Poly.const(1, UV)
    for _, c in components:
        product = product * c._with_vars(UV)
    curve = PlaneCurveSet(product, ["nonproper-candidate"],
                          [(t, c.monic()._with_vars(UV)) for t, c in components])
    return curve


# --------------------------------------------------------------------------
# numeric preimage counting (shared by certification and degree)

def _complex_univariate(f, var, values):
    """Dense descending complex coefficient list of f viewed in `var`, with
    every other variable specialized at complex `values`."""
    cs = f.coeffs_in(var)
    if not cs:
        return []
    top = max(cs)
    out = []
    for d in range(top, -1, -1):
        c = cs.get(d)
        if c is None:
            out.append(0j)
        elif c.is_constant():
            out.append(complex(c.constant_value()))
        else:
            # cover every variable slot (unused ones get 0) so the evaluation
            # is fully numeric
            out.append(complex(c.evaluate({w: complex(values.get(w, 0)) for w in c.vars})))
    return out


def _strip_leading(cl, eps):
    nz = [i for i, c in enumerate(cl) if abs(c) > eps]
    return cl[nz[0]:] if nz else []


def _specialized_with_bounds(f, var, values):
    """Like _complex_univariate, but also returns a per-coefficient magnitude
    bound (sum of |term| at |values|): the roundoff in each specialized
    coefficient is a tiny multiple of its bound, never of the global scale."""
    cs = f.coeffs_in(var)
    if not cs:
        return [], []
    mags = {w: abs(complex(values.get(w, 0))) for w in f.vars}
    top = max(cs)
    cl, bounds = [], []
    for d in range(top, -1, -1):
        c = cs.get(d)
        if c is None:
            cl.append(0j)
            bounds.append(0.0)
            continue
        if c.is_constant():
            cl.append(complex(c.constant_value()))
            bounds.append(abs(cl[-1]))
            continue
        cl.append(complex(c.evaluate({w: complex(values.get(w, 0)) for w in c.vars})))
        b = 0.0
        for exps, k in c.terms.items():
            m = abs(complex(k))
            for w, e in zip(c.vars, exps):
                if e:
                    m *= mags[w] ** e
            b += m
        bounds.append(b)
    return cl, bounds


def _strip_leading_bounded(cl, bounds, rel=1e-9):
    i = 0
    while i < len(cl) and abs(cl[i]) <= rel * max(1.0, bounds[i]):
        i += 1
    return cl[i:]


def _term_magnitude_bound(f, x0, y0):
    """1 + sum of |coeff| * |x0|^ex * |y0|^ey over the terms of f."""
    ax, ay = abs(x0), abs(y0)
    total = 1.0
    for exps, c in f.terms.items():
        m = abs(complex(c))
        for w, e in zip(f.vars, exps):
            m *= (ax if w == "x" else ay) ** e
        total += m
    return total


# deterministic shears x -> x + lambda*y used to reach generic coordinates
_SHEAR_LAMBDAS = (
    GaussianRational(1), GaussianRational(0, 1), GaussianRational(-1),
    GaussianRational(2), GaussianRational(1, 1), GaussianRational(-1, 2),
)


def _preimage_count(F, u0, v0, tol=1e-7):
    """Number of distinct finite solutions of F = (u0, v0).

    Exact Gaussian-rational targets are counted exactly; complex targets
    (e.g. sampled points on a candidate curve) fall back to a numeric count.
    """
    try:
        ue = GaussianRational.coerce(u0)
        ve = GaussianRational.coerce(v0)
    except TypeError:
        return _preimage_count_numeric(F, complex(u0), complex(v0), tol)
    return _preimage_count_exact(F, ue, ve)


def _preimage_count_exact(F, u0, v0):
    """Exact count: shear to generic coordinates so both components have a
    constant leading coefficient in y, substitute the target exactly, and
    read off the squarefree degree of the univariate resultant.  Each shear
    can only undercount (when two solutions share an x); the maximum over
    agreeing shears is the fiber size."""
    xv = Poly.var("x", ("x", "y"))
    yv = Poly.var("y", ("x", "y"))
    counts = []
    for lam in _SHEAR_LAMBDAS:
        sub = {"x": xv + Poly.const(lam, ("x", "y")) * yv, "y": yv}
        p = F.p.evaluate(sub) - Poly.const(u0, ("x", "y"))
        q = F.q.evaluate(sub) - Poly.const(v0, ("x", "y"))
        dp, dq = p.degree_in("y"), q.degree_in("y")
        if dp <= 0 or dq <= 0:
            continue
        if not (p.coeffs_in("y")[dp].is_constant() and q.coeffs_in("y")[dq].is_constant()):
            continue
        r = resultant_allow_constant(p, q, "y")
        if r.is_zero():
            raise ExceptionalError("fiber is infinite at the target")
        counts.append(0 if r.is_constant() else squarefree_part(r).total_degree())
        if len(counts) >= 2 and counts[-1] == counts[-2]:
            break
    if not counts:
        raise ExceptionalError("no generic shear found for exact fiber count")
    return max(counts)


def _preimage_count_numeric(F, u0, v0, tol=1e-7):
    """Numeric count for complex targets.

    Candidate solutions come from the exact trivariate resultant
    Res_y(P-u, Q-v) specialized at the target (x-values) and from the two
    univariate slices at each x (y-values).  A candidate whose residuals
    already sit at the roundoff bound is accepted directly; otherwise it is
    polished by Newton iteration on the full 2x2 system.  Accepted solutions
    are deduplicated."""
    p, q = _shifted_components(F)
    r = resultant_allow_constant(p, q, "y")
    if r.is_constant():
        return 0
    cl, cb = _specialized_with_bounds(r, "x", {"u": u0, "v": v0})
    cl = _strip_leading_bounded(cl, cb)
    if len(cl) <= 1:
        if not cl:
            raise ExceptionalError("resultant vanished identically at the target")
        return 0
    xs = find_roots(cl)
    fx, fy = F.p.diff("x"), F.p.diff("y")
    gx, gy = F.q.diff("x"), F.q.diff("y")

    def _ev(f, x, y):
        return complex(f.evaluate({"x": x, "y": y}))

    def _polish(x, y):
        for _ in range(60):
            if max(abs(x), abs(y)) > 1e12:
                return x, y  # diverging; the residual check will reject it
            pv = _ev(F.p, x, y) - u0
            qv = _ev(F.q, x, y) - v0
            a, b = _ev(fx, x, y), _ev(fy, x, y)
            c, d = _ev(gx, x, y), _ev(gy, x, y)
            det = a * d - b * c
            if det == 0:
                break
            dx = (d * pv - b * qv) / det
            dy = (a * qv - c * pv) / det
            x, y = x - dx, y - dy
            if abs(dx) <= 1e-14 * (1 + abs(x)) and abs(dy) <= 1e-14 * (1 + abs(y)):
                break
        return x, y

    count = 0
    solutions = []
    for x0, _ in cluster_roots(xs, tol=1e-6):
        pcl = _slice_in_y(F.p, x0, u0)
        qcl = _slice_in_y(F.q, x0, v0)
        if (pcl is not None and len(pcl) == 1) or (qcl is not None and len(qcl) == 1):
            continue  # one equation is a nonzero constant on the slice
        if pcl is None and qcl is None:
            continue  # the whole vertical line maps to the target
        if pcl is None or qcl is None:
            # one equation holds identically on the line: the other alone
            # cuts the fiber there, and its roots are exact by construction
            single = qcl if pcl is None else pcl
            try:
                rs = find_roots(single)
            except RootFindingError:
                continue
            count += len(cluster_roots(rs, tol=1e-6))
            continue
        candidates = []
        for slice_cl in (pcl, qcl):
            try:
                candidates.extend(find_roots(slice_cl))
            except RootFindingError:
                pass
        for y0 in candidates:
            try:
                rp = abs(_ev(F.p, x0, y0) - u0)
                rq = abs(_ev(F.q, x0, y0) - v0)
                sp = abs(u0) + _term_magnitude_bound(F.p, x0, y0)
                sq = abs(v0) + _term_magnitude_bound(F.q, x0, y0)
                if rp <= 1e-9 * sp and rq <= 1e-9 * sq:
                    # already at the roundoff bound; Newton can only be
                    # destabilized by ill conditioning here
                    x1, y1 = x0, y0
                else:
                    x1, y1 = _polish(x0, y0)
                    rp = abs(_ev(F.p, x1, y1) - u0)
                    rq = abs(_ev(F.q, x1, y1) - v0)
            except (OverflowError, ZeroDivisionError):
                continue
            sp = abs(u0) + _term_magnitude_bound(F.p, x1, y1)
            sq = abs(v0) + _term_magnitude_bound(F.q, x1, y1)
            if rp > tol * sp or rq > tol * sq:
                continue
            if all(max(abs(x1 - xs_), abs(y1 - ys_)) >
                   1e-6 * (1 + max(abs(x1), abs(y1)))
                   for xs_, ys_ in solutions):
                solutions.append((x1, y1))
    return count + len(solutions)


def _slice_in_y(f, x0, target):
    """Coefficients of f(x0, y) - target in y, stripped by per-coefficient
    roundoff bounds.  None when the slice is identically the target."""
    cl, cb = _specialized_with_bounds(f, "y", {"x": x0})
    cl[-1] -= target
    cb[-1] += abs(target)
    cl = _strip_leading_bounded(cl, cb)
    return None if not cl else cl


def _random_rational(rng, lo=-9, hi=9):
    a = rng.randint(lo, hi)
    b = rng.randint(lo, hi)
    d = rng.randint(1, 4)
    return GaussianRational(a, b, d)


def topological_degree(F, trials=3, seed=0, tol=1e-9, max_retries=60):
    """deg_geo F: the common preimage count at `trials` random Gaussian-rational
    targets drawn with rejection against the candidate exceptional locus."""
    if trials < 3:
        raise ValueError("need at least 3 trials")
    if jacobian(F).is_zero():
        raise ExceptionalError("map is not dominant")
    avoid = nonproper_candidates(F).defining
    try:
        avoid = avoid * critical_values(F).defining
    except ExceptionalError:
        pass
    rng = random.Random(seed)
    samples = []
    attempts = 0
    while len(samples) < trials:
        if attempts > max_retries:
            raise ExceptionalError("could not find generic targets off the candidate locus")
        attempts += 1
        u0 = _random_rational(rng)
        v0 = _random_rational(rng)
        if not avoid.is_constant():
            if abs(complex(avoid.evaluate({"u": u0, "v": v0}))) < tol:
                continue
        samples.append(((u0, v0), _preimage_count(F, u0, v0)))
    counts = sorted({c for _, c in samples})
    agreed = len(counts) == 1
    if not agreed:
        raise ExceptionalError(
            f"preimage counts disagree across trials: {counts}; targets {samples}"
        )
    return DegreeReport(deg_geo=counts[0], samples=samples, agreed=True)


def certify_nonproper(F, curve, samples=5, seed=0, deg_geo=None, tol=1e-9):
    """Per-component verdicts: a candidate component is confirmed non-proper
    when the finite-preimage count drops strictly below deg_geo at every
    sampled point of the component."""
    if samples < 1:
        raise ValueError("need at least one sample")
    if deg_geo is None:
        deg_geo = topological_degree(F, trials=3, seed=seed + 1).deg_geo
    rng = random.Random(seed)
    comps = curve.component_polys or (
        [] if curve.is_empty() else [("candidate", curve.defining)]
    )
    verdicts = []
    for tag, comp in comps:
        pts = []
        attempts = 0
        while len(pts) < samples:
            if attempts > 40 * samples:
                raise ExceptionalError(
                    f"sampling failed to find smooth points on component {comp}"
                )
            attempts += 1
            u0 = _random_rational(rng)
            vs = poly_roots(comp, "v", {"u": u0})
            if vs is None:
                # defining(u0, .) vanishes identically: any v works
                pts.append((complex(u0), complex(_random_rational(rng))))
            elif len(vs) > 0:
                for v0 in vs[: samples - len(pts)]:
                    pts.append((complex(u0), complex(v0)))
            else:
                # no v over this u0 (e.g. a vertical line): solve for u instead
                v1 = _random_rational(rng)
                us = poly_roots(comp, "u", {"v": v1})
                if us is None:
                    pts.append((complex(_random_rational(rng)), complex(v1)))
                else:
                    for w in us[: samples - len(pts)]:
                        pts.append((complex(w), complex(v1)))
        counts = [_preimage_count(F, u0, v0) for u0, v0 in pts]
        verdicts.append({
            "tag": tag,
            "component": str(comp),
            "confirmed": all(c < deg_geo for c in counts),
            "samples": [
                {"point": [u0.real, u0.imag, v0.real, v0.imag], "count": c}
                for (u0, v0), c in zip(pts, counts)
            ],
        })
    return verdicts


# --------------------------------------------------------------------------
# critical values

def _content_in(f, keep):
    """gcd of the coefficients of f viewed in `keep`; a poly in the others."""
    cs = list(f.coeffs_in(keep).values())
    g = cs[0]
    for c in cs[1:]:
        g = poly_gcd(g, c)
    return g


def _exact_div_or_raise(f, g):
    from .poly import exact_div
    q = exact_div(f, g)
    if q is None:
        raise ExceptionalError("internal: content division failed")
    return q


def _axis_content(f, var):
    """gcd of the coefficients of f viewed in the OTHER plane variable; a
    polynomial in `var` whose roots r are exactly the full lines {var = r}
    inside {f = 0}."""
    other = "y" if var == "x" else "x"
    if (f.degree_in(other) or 0) == 0:
        return f
    cs = list(f.coeffs_in(other).values())
    g = cs[0]
    for c in cs[1:]:
        g = poly_gcd(g, c)
    return g


def _line_image_factors(F, d_poly, var):
    """Factors in (u, v) contributed by critical lines {var = r} for the
    numerically-found roots r of the univariate content d_poly.  Point images
    are dropped; a line image u - c or v - c requires an exact Gaussian-integer
    root (else reported as degenerate)."""
    factors = []
    if d_poly.is_constant():
        return factors
    roots = poly_roots(d_poly, var)
    if roots is None:
        raise ExceptionalError("degenerate content in critical-value elimination")
    other = "y" if var == "x" else "x"
    for r, _ in cluster_roots(roots, tol=1e-8):
        # image of the line var = r, parametrized by the other variable
        imgs = []
        for comp in (F.p, F.q):
            cs = comp.coeffs_in(other)
            top = [complex(cs[d].evaluate({var: r})) if d in cs else 0j
                   for d in range(max(cs), 0, -1)]
            imgs.append(all(abs(c) <= 1e-9 for c in top))
        if imgs[0] and imgs[1]:
            continue  # both coordinates constant along the line: point image
        for const_here, target in ((imgs[0], "u"), (imgs[1], "v")):
            if not const_here:
                continue
            comp = F.p if target == "u" else F.q
            rr = complex(r)
            cand = GaussianRational(round(rr.real), round(rr.imag))
            ev = d_poly.evaluate({var: cand})
            ev_nonzero = not ev.is_zero() if isinstance(ev, Poly) else bool(ev)
            if abs(complex(cand) - rr) > 1e-9 or ev_nonzero:
                raise ExceptionalError(
                    "critical line at a non-lattice root; elimination degenerates"
                )
            val = comp.evaluate({var: cand, other: GR_ZERO})
            # the image line is {target = comp(cand, 0)}
            factors.append(Poly(UV, {(1, 0) if target == "u" else (0, 1): GaussianRational(1)})
                           - Poly.const(val, UV))
    return factors


def _eliminate_order(F, pp, first):
    """Eliminate `first` then the other variable from {P-u, Q-v, pp}, where pp
    contains no full-line components.  Returns a (u,v) curve poly or None."""
    second = "x" if first == "y" else "y"
    p, q = _shifted_components(F)
    j4 = pp._with_vars(("x", "y", "u", "v"))
    t1 = resultant_allow_constant(p, j4, first)
    t2 = resultant_allow_constant(q, j4, first)
    if t1.is_constant() and t2.is_constant():
        return None
    # strip spurious univariate contents (pp has no line components, so any
    # content in the surviving source variable is an elimination artifact)
    c1 = _content_in(t1, "u") if not t1.is_constant() and t1.degree_in("u") > 0 else t1
    c2 = _content_in(t2, "v") if not t2.is_constant() and t2.degree_in("v") > 0 else t2
    if not c1.is_constant():
        t1 = _exact_div_or_raise(t1, c1._with_vars(t1.vars))
    if not c2.is_constant():
        t2 = _exact_div_or_raise(t2, c2._with_vars(t2.vars))
    if t1.degree_in(second) == 0 and t2.degree_in(second) == 0:
        # the two constraints no longer share a source variable: their common
        # zero set is a finite point set, and isolated image points are not
        # curve components
        return None
    e = resultant_allow_constant(t1, t2, second)
    if e.is_constant():
        return None
    return squarefree_part(e)._with_vars(UV)


def critical_values(F):
    """Image of the critical locus {JF = 0}.

    Full lines inside the locus are split off exactly (axis contents of the
    square-free Jacobian) and their images handled directly; the remaining
    primitive part goes through iterated-resultant elimination in both
    variable orders, reconciled by a gcd to kill order-specific spurious
    factors."""
    jf = jacobian(F)
    if jf.is_zero():
        raise ExceptionalError("Jacobian vanishes identically")
    jsf = squarefree_part(jf)
    if jsf.is_constant():
        return _empty_curve(["critical-value"])
    line_factors = []
    pp = jsf
    for var in ("x", "y"):
        cont = _axis_content(pp, var)
        if not cont.is_constant():
            line_factors.extend(_line_image_factors(F, cont, var))
            pp = _exact_div_or_raise(pp, cont._with_vars(pp.vars))
    curves = []
    if not pp.is_constant():
        for first in ("y", "x"):
            e = _eliminate_order(F, pp, first)
            if e is not None:
                curves.append(e)
    if curves:
        g = curves[0]
        for c in curves[1:]:
            g = poly_gcd(g, c)
        g = squarefree_part(g) if not g.is_constant() else Poly.const(1, UV)
    else:
        g = Poly.const(1, UV)
    for lf in line_factors:
        if not divides(lf, g):
            g = g * lf
    if g.is_constant():
        return _empty_curve(["critical-value"])
    return PlaneCurveSet(g, ["critical-value"],
                         [("critical-value", g.monic()._with_vars(UV))])


# --------------------------------------------------------------------------

def exceptional_set(F, samples=5, seed=0):
    """Square-free product of the confirmed non-proper components and the
    critical-value components, with provenance."""
    if jacobian(F).is_zero():
        raise ExceptionalError("map is not dominant")
    cand = nonproper_candidates(F)
    crit = critical_values(F)
    deg_geo = topological_degree(F, trials=3, seed=seed + 1).deg_geo
    verdicts = certify_nonproper(F, cand, samples=samples, seed=seed, deg_geo=deg_geo)
    product = Poly.const(1, UV)
    provenance = []
    comps = []
    for v, (tag, comp) in zip(verdicts, cand.component_polys):
        if v["confirmed"]:
            product = product * comp
            provenance.append("nonproper-candidate")
            comps.append((tag, comp))
    if not crit.is_empty():
        product = product * crit.defining
        provenance.append("critical-value")
        comps.extend(crit.component_polys)
    if product.is_constant():
        return _empty_curve(provenance)
    curve = PlaneCurveSet(product, provenance, comps)
    return curve


def line_intersections(curve, k):
    """Complex v-roots (with multiplicities) of defining(k, v): the
    intersection of the vertical line {u = k} with the curve.

    Errors when (u - k) divides the defining polynomial -- the excluded
    line-inside-curve case."""
    if curve.is_empty():
        return {"k": str(k), "roots": [], "count": 0}
    kq = GaussianRational.coerce(k)
    line = Poly(UV, {(1, 0): GaussianRational(1)}) - Poly.const(kq, UV)
    if divides(line, curve.defining):
        raise ExceptionalError(
            f"the line u = {k} is contained in the curve; intersection count undefined"
        )
    slice_v = curve.defining.evaluate({"u": kq})
    if hasattr(slice_v, "is_constant") and not slice_v.is_constant():
        roots = find_roots(slice_v.complex_coeff_list("v"))
        clustered = cluster_roots(roots, tol=1e-7)
    else:
        clustered = []
    return {
        "k": str(k),
        "roots": [
            {"v": [rep.real, rep.imag], "multiplicity": m} for rep, m in clustered
        ],
        "count": len(clustered),
    }
