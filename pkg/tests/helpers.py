"""Shared numeric checks used by both the property tests and the
acceptance battery (the grids are specified once, here)."""

import math

import numpy as np

import descort as ds
import descort._kernels as K

DEFAULT = ds.DEFAULT_CONFIG


def sample_window(d, n, lo_q=1e-4, hi_q=1 - 1e-4, cfg=DEFAULT):
    lo = ds.quantile(d, lo_q, cfg)
    hi = ds.quantile(d, hi_q, cfg)
    return np.linspace(lo, hi, n)


def mass_between(d, a, b, cfg=DEFAULT):
    """Probability mass on [a, b] WITHOUT shortcutting through the source
    of a transformed density: closed families use their own cdf, numeric
    transforms integrate honestly in the image variable."""
    closed = d.cdf_closed(np.array([a, b]))
    if closed is not None:
        return float(closed[1] - closed[0])
    val, _, ok, _ = K.integrate_power(d.descriptor(), 1.0, 0, a, b,
                                      cfg.rel_tol, cfg.abs_tol,
                                      cfg.max_subdivisions, d.breakpoints())
    assert ok
    return val


def masses_between_sorted(d, points, cfg=DEFAULT):
    """Cumulative masses at sorted points via per-gap integrals (one pass)."""
    closed = d.cdf_closed(points)
    if closed is not None:
        return np.asarray(closed, dtype=float)
    out = np.zeros(len(points))
    for i in range(1, len(points)):
        val, _, ok, _ = K.integrate_power(
            d.descriptor(), 1.0, 0, points[i - 1], points[i],
            cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions, d.breakpoints())
        assert ok
        out[i] = out[i - 1] + val
    return out


def check_probability_invariance(source, alpha, n_pairs=200, seed=0,
                                 tol=1e-8, cfg=DEFAULT):
    """|mass(x1, x2) - mass(y1, y2)| < tol for random interior pairs."""
    td = ds.transform(source, alpha, cfg)
    gen = np.random.default_rng(seed)
    qs = gen.uniform(1e-4, 1 - 1e-4, size=(n_pairs, 2))
    qs.sort(axis=1)
    xs = np.array([[ds.quantile(source, a, cfg), ds.quantile(source, b, cfg)]
                   for a, b in qs])
    pts = np.unique(xs.ravel())
    ys_pts = td.ymap.forward(pts)
    F_src = np.asarray(source.cdf_closed(pts), dtype=float)
    F_img = masses_between_sorted(td.base, ys_pts, cfg)
    lut = {x: i for i, x in enumerate(pts)}
    worst = 0.0
    for x1, x2 in xs:
        lhs = F_src[lut[x2]] - F_src[lut[x1]]
        rhs = F_img[lut[x2]] - F_img[lut[x1]]
        worst = max(worst, abs(lhs - rhs))
    assert worst < tol, f"invariance violated: {worst} (alpha={alpha})"
    return worst


def check_composition(source, a1, a2, n=128, tol=1e-7, cfg=DEFAULT):
    two_step = ds.transform(ds.transform(source, a1, cfg), a2, cfg)
    direct = ds.transform(source, a1 * a2, cfg)
    ys = sample_window(direct, n, cfg=cfg)
    dev = np.abs(two_step.pdf(ys) - direct.pdf(ys)).max()
    assert dev < tol, f"composition violated: {dev} ({a1}, {a2})"
    return dev


def check_scaling_law(source, a, alpha, n=64, tol=1e-7, cfg=DEFAULT):
    lhs = ds.transform(ds.scaled(source, a), alpha, cfg)
    rhs = ds.scaled(ds.transform(source, alpha, cfg).base, a ** alpha)
    ys = sample_window(rhs, n, cfg=cfg)
    dev = np.abs(lhs.pdf(ys) - rhs.pdf(ys)).max()
    assert dev < tol, f"scaling law violated: {dev} (a={a}, alpha={alpha})"
    return dev


def check_moment_rescaling(source, alpha, q, tol=1e-7, cfg=DEFAULT):
    lhs = ds.entropic_moment(ds.transform(source, alpha, cfg), q, cfg)
    rhs = ds.entropic_moment(source, ds.rescale_q(q, alpha), cfg)
    if math.isinf(lhs) or math.isinf(rhs):
        assert math.isinf(lhs) and math.isinf(rhs), \
            f"one side diverged: {lhs} vs {rhs} (alpha={alpha}, q={q})"
        return 0.0
    assert abs(lhs - rhs) < tol, \
        f"moment rescaling violated: {abs(lhs - rhs)} (alpha={alpha}, q={q})"
    return abs(lhs - rhs)


def check_entropy_scaling(source, alpha, q, tol, cfg=DEFAULT):
    td = ds.transform(source, alpha, cfg)
    devs = []
    s_lhs = ds.shannon_entropy(td, cfg)
    devs.append(abs(s_lhs - alpha * ds.shannon_entropy(source, cfg)))
    q_a = ds.rescale_q(q, alpha)
    r_lhs = ds.renyi_entropy(td, q, cfg)
    r_rhs = ds.renyi_entropy(source, q_a, cfg)
    t_lhs = ds.tsallis_entropy(td, q, cfg)
    t_rhs = ds.tsallis_entropy(source, q_a, cfg)
    for lhs, rhs in ((r_lhs, r_rhs), (t_lhs, t_rhs)):
        if math.isinf(lhs) or math.isinf(rhs):
            assert math.isinf(lhs) and math.isinf(rhs)
        else:
            devs.append(abs(lhs - alpha * rhs))
    worst = max(devs)
    assert worst < tol, \
        f"entropy scaling violated: {worst} (alpha={alpha}, q={q})"
    return worst


def renyi_of_deformation(source, q, alpha, cfg=DEFAULT):
    return ds.renyi_entropy(ds.transform(source, alpha, cfg), q, cfg)


def second_central_difference(f, x, h):
    return f(x + h) - 2.0 * f(x) + f(x - h)


def check_convexity_sign(source, q, alpha, uniform=False, h=1e-3,
                         cfg=DEFAULT):
    """Sign of the second difference of alpha -> R_q equals sign(1-q)."""
    f = lambda a: renyi_of_deformation(source, q, a, cfg)
    vals = [f(alpha - h), f(alpha), f(alpha + h)]
    if any(math.isinf(v) for v in vals):
        return None  # moment diverges at this grid point
    d2 = vals[2] - 2.0 * vals[1] + vals[0]
    if uniform:
        assert abs(d2) < 1e-8, f"uniform curvature {d2}"
        return 0.0
    expected = math.copysign(1.0, 1.0 - q)
    assert math.copysign(1.0, d2) == expected, \
        f"curvature sign wrong at q={q}, alpha={alpha}: {d2}"
    return d2


def _mixed_partial(F, q, alpha, h):
    num = (F(q + h, alpha + h) - F(q + h, alpha - h)
           - F(q - h, alpha + h) + F(q - h, alpha - h))
    return num / (4.0 * h * h)


def _second_alpha(F, q, alpha, h):
    return (F(q, alpha + h) - 2.0 * F(q, alpha) + F(q, alpha - h)) / (h * h)


def check_mixed_derivative_identity(source, q, alpha, h=1e-3, rel_tol=1e-3,
                                    cfg=DEFAULT):
    """d2R/dqda equals (-alpha/(1-q)) d2R/da2, by Richardson-refined
    central differences."""
    F = lambda qq, aa: renyi_of_deformation(source, qq, aa, cfg)
    rich = lambda est: (4.0 * est(h / 2) - est(h)) / 3.0
    mixed = rich(lambda hh: _mixed_partial(F, q, alpha, hh))
    second = rich(lambda hh: _second_alpha(F, q, alpha, hh))
    rhs = (-alpha / (1.0 - q)) * second
    rel = abs(mixed - rhs) / max(abs(mixed), abs(rhs), 1e-12)
    assert rel < rel_tol, \
        f"mixed-derivative identity off by {rel} at (q={q}, alpha={alpha})"
    return rel


def check_complexity_exponent_identity(source, alpha, p, q, tol=1e-6,
                                       cfg=DEFAULT):
    """C_{p,q} of the deformation equals C_{p_a,q_a} of the source to the
    alpha power."""
    td = ds.transform(source, alpha, cfg)
    p_a, q_a = ds.rescale_q(p, alpha), ds.rescale_q(q, alpha)
    try:
        lhs = ds.lmc_renyi(td, p, q, cfg)
    except ds.DivergentMoment:
        lhs = None
    try:
        rhs = ds.lmc_renyi(source, p_a, q_a, cfg) ** alpha
    except ds.DivergentMoment:
        rhs = None
    if lhs is None or rhs is None:
        assert lhs is None and rhs is None, f"{lhs} vs {rhs}"
        return 0.0
    assert abs(lhs - rhs) < tol * max(1.0, abs(rhs)), \
        f"complexity identity violated: {lhs} vs {rhs}"
    return abs(lhs - rhs)


def check_cumulant_scaling(source, alpha, rel_tol=1e-6, cfg=DEFAULT):
    base = ds.entropic_cumulants(source, cfg)
    trans = ds.entropic_cumulants(ds.transform(source, alpha, cfg), cfg)
    worst = 0.0
    for n in range(1, 5):
        expected = alpha ** n * base[n]
        scale = max(abs(expected), 1e-12)
        worst = max(worst, abs(trans[n] - expected) / scale)
    assert worst < rel_tol, f"cumulant scaling violated: {worst}"
    return worst


def random_staircase(gen: np.random.Generator) -> ds.PiecewiseConstant:
    n = int(gen.integers(2, 9))
    heights = np.exp(gen.uniform(-2.0, 2.0, n))
    widths = gen.uniform(0.1, 1.0, n)
    mass = float(np.sum(heights * widths))
    return ds.PiecewiseConstant(list(zip(heights / mass, widths)))


MONOTONE_ALPHAS = (0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0)


def check_monotone_complexity(source, alphas=MONOTONE_ALPHAS, cfg=DEFAULT):
    cs = [ds.lmc_renyi(ds.transform(source, a, cfg), 1.0, 2.0, cfg)
          for a in alphas]
    assert abs(cs[0] - 1.0) < 1e-12, f"C at alpha=0 is {cs[0]}"
    for c1, c2 in zip(cs, cs[1:]):
        assert c2 >= c1 - 1e-12 * max(1.0, abs(c2)), \
            f"complexity not monotone: {cs}"
    return cs
