"""Shared fixture generators for the test suite."""
import numpy as np

from sepproj.separability import point_in_hull


def planted_separable_pair(rng, d, n, m, margin):
    """(P, Q, v): all of P at signed distance <= -margin from the plane v.x=0,
    all of Q at >= +margin."""
    v = rng.normal(size=d)
    v /= np.linalg.norm(v)
    Y = rng.normal(size=(n + m, d))
    Y -= np.outer(Y @ v, v)
    tp = -(margin + rng.uniform(0.0, 1.0, size=n))
    tq = margin + rng.uniform(0.0, 1.0, size=m)
    P = Y[:n] + np.outer(tp, v)
    Q = Y[n:] + np.outer(tq, v)
    return P, Q, v


def random_intersecting_pair(rng, d, n, m, max_tries=200):
    """Point sets whose hulls both contain the origin (so they intersect)."""
    for _ in range(max_tries):
        P = rng.normal(size=(n, d))
        Q = rng.normal(size=(m, d))
        in_p, _ = point_in_hull(np.zeros(d), P)
        in_q, _ = point_in_hull(np.zeros(d), Q)
        if in_p and in_q:
            return P, Q
    raise RuntimeError("could not sample intersecting hulls")


def mutual_containment_pair(rng, d, n, m):
    """(P, Q): some point of Q inside CH(P) and some point of P inside CH(Q).

    P surrounds the origin; Q is a cluster containing one deep point of P and
    placed so that one of its own points is the origin-area point of P...
    Construction: P = simplex-ish cloud around origin plus one point x0 that
    sits inside CH(Q); Q = cloud around x0 plus one point at the origin.
    """
    P = rng.normal(size=(n - 1, d)) + rng.normal(size=d) * 0.0
    # ensure the origin is interior to CH(P): add mirrored points
    P = np.vstack([P, -P[: d + 1]])
    x0 = rng.normal(size=d) * 0.2
    Q = x0 + 0.5 * rng.normal(size=(m - 1, d))
    Q = np.vstack([Q, x0 + 0.5 * -(Q[: d + 1] - x0)])
    # P gets a point deep inside CH(Q); Q gets a point deep inside CH(P)
    P = np.vstack([P, x0])
    Q = np.vstack([Q, np.zeros(d)])
    return P, Q
