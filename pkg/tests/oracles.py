"""Independent reference computations used by the tests.

Nothing here calls the package's kernels or inference path.
"""
import itertools

import numpy as np


def reference_centroid(var, clips, n=100_001):
    """Dense-grid centroid built straight from numpy.interp / numpy.trapezoid."""
    x = np.linspace(var.lo, var.hi, n)
    mu = np.zeros_like(x)
    for (_, mf), c in zip(var.terms, clips):
        if c > 0:
            mu = np.maximum(mu, np.minimum(np.interp(x, mf.xs, mf.mus), c))
    return np.trapezoid(x * mu, x) / np.trapezoid(mu, x)


def triangle_centroid(a, b, c):
    return (a + b + c) / 3.0


# Ladders written out by hand, independent of the enums' ordinals.
FUNDING_LADDER = ["decrease much", "decrease little", "do nothing", "increase little", "increase much"]
DEADLINE_LADDER = ["shorten", "do nothing", "extend", "big delay"]
GAP = ["none", "low", "high", "extreme"]
WEIGHT = ["none", "low", "high", "heavy"]

TABLE2 = [
    # perf, weight, funding, deadline
    ("none", "none", "decrease little", "do nothing"),
    ("low", "none", "do nothing", "shorten"),
    ("high", "none", "increase little", "extend"),
    ("extreme", "none", "increase little", "big delay"),
    ("none", "low", "decrease little", "do nothing"),
    ("low", "low", "do nothing", "shorten"),
    ("high", "low", "increase little", "extend"),
    ("extreme", "low", "increase little", "big delay"),
    ("none", "high", "do nothing", "do nothing"),
    ("low", "high", "do nothing", "do nothing"),
    ("high", "high", "increase much", "do nothing"),
    ("extreme", "high", "increase much", "do nothing"),
    ("none", "heavy", "do nothing", "do nothing"),
    ("low", "heavy", "increase little", "do nothing"),
    ("high", "heavy", "increase much", "do nothing"),
    ("extreme", "heavy", "increase much", "do nothing"),
]


def brute_force_default_rules():
    """Regenerate the completed rule table as {(p, w, f, d) labels: (fa, da) labels}."""
    base = {(p, w): (fa, da) for p, w, fa, da in TABLE2}
    fshift = {}
    for w in WEIGHT:
        fshift[("none", w)] = 0
        fshift[("low", w)] = 0
        fshift[("high", w)] = 1 if w in ("high", "heavy") else -1
    fshift.update({("extreme", "heavy"): 2, ("extreme", "high"): 1,
                   ("extreme", "low"): -1, ("extreme", "none"): -2})
    dshift = {"none": 0, "low": 0, "high": 1, "extreme": 2}
    out = {}
    for p, w, f, d in itertools.product(GAP, WEIGHT, GAP, GAP):
        fa, da = base[(p, w)]
        fi = FUNDING_LADDER.index(fa) + fshift[(f, w)]
        di = DEADLINE_LADDER.index(da) + dshift[d]
        fi = max(0, min(len(FUNDING_LADDER) - 1, fi))
        di = max(0, min(len(DEADLINE_LADDER) - 1, di))
        out[(p, w, f, d)] = (FUNDING_LADDER[fi], DEADLINE_LADDER[di])
    return out


TABLE1_THRESHOLDS = {"performance": (2.0, 7.0), "funding": (3.5, 6.5), "deadline": (20.0, 80.0)}


def table1_bin(kind, gap):
    """Published bins with the documented choices: None below 0.05, thresholds belong to High."""
    t1, t2 = TABLE1_THRESHOLDS[kind]
    if gap < 0.05:
        return "none"
    if gap < t1:
        return "low"
    if gap <= t2:
        return "high"
    return "extreme"


def random_clip_profiles(rng, n_terms, count, p_active=0.6):
    """Each term clipped at U(0,1) with probability p_active; never all zero."""
    profiles = []
    while len(profiles) < count:
        clips = rng.uniform(0.0, 1.0, n_terms) * (rng.uniform(size=n_terms) < p_active)
        if clips.max() > 0:
            profiles.append(clips)
    return profiles
