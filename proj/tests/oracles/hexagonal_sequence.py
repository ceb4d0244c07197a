"""Exact replay of slow uniaxial extension of the hexagonal lattice.

Builds the lattice from scratch, solves the periodic Laplacian exactly and
splits vertices by the sign of dart projections on the top eigenvector of
the local tension. Prints closed-form trigger stretches and loss ratios.
Needs sympy. Contractions are not modelled; pick a small delta.
"""

import sys

import sympy as sp

s3 = sp.sqrt(3)


def hexagonal(w0=1, w1=1):
    u1 = sp.Matrix([s3, 0])
    u2 = sp.Matrix([s3 / 2, sp.Rational(3, 2)])
    period = sp.Matrix.hstack(u1, u2)
    # v1 sits at (√3/2, 1/2); the three neighbours of v0 are v1, v1 - u1, v1 - u1 + ... chosen by offset
    edges = [(0, 1, (0, 0), w1), (0, 1, (-1, 0), w1), (0, 1, (0, -1), w1), (0, 0, (0, 0), w0), (1, 1, (0, 0), w0)]
    return 2, edges, period


def harmonic(n, edges, period):
    # gauge x_0 = 0
    L = sp.zeros(n, n)
    b = sp.zeros(n, 2)
    for i, j, g, w in edges:
        if i == j:
            continue
        shift = (period * sp.Matrix(g)).T
        L[i, i] += w
        L[j, j] += w
        L[i, j] -= w
        L[j, i] -= w
        b[i, :] += w * shift
        b[j, :] -= w * shift
    x = sp.zeros(n, 2)
    if n > 1:
        x[1:, :] = L[1:, 1:].LUsolve(b[1:, :])
    return [sp.simplify(x[k, :].T) for k in range(n)]


def edge_vector(x, period, e):
    i, j, g, _ = e
    return x[j] + period * sp.Matrix(g) - x[i]


def darts(edges, v):
    out = []
    for k, (i, j, g, w) in enumerate(edges):
        if i == v:
            out.append((k, +1))
        if j == v:
            out.append((k, -1))
    return out


def local_tension(x, period, edges, v):
    t = sp.zeros(2, 2)
    for k, sign in darts(edges, v):
        vec = edge_vector(x, period, edges[k])
        t += edges[k][3] * vec * vec.T
    return sp.simplify(t)


def degree(edges, v):
    return sum(edges[k][3] for k, _ in darts(edges, v))


def energy(x, period, edges):
    return sp.simplify(sum(e[3] * (edge_vector(x, period, e).T * edge_vector(x, period, e))[0] for e in edges))


def uniaxial(lam, theta):
    r = sp.Matrix([[sp.cos(theta), -sp.sin(theta)], [sp.sin(theta), sp.cos(theta)]])
    return r * sp.diag(lam, 1 / lam) * r.T


def threshold_stretch(m, theta, k):
    # smallest λ >= 1 with λmax(A M A^T) = k, where A = R diag(λ, 1/λ) R^T
    r = sp.Matrix([[sp.cos(theta), -sp.sin(theta)], [sp.sin(theta), sp.cos(theta)]])
    mp = sp.simplify(r.T * m * r)
    a, b, c = mp[0, 0], mp[0, 1], mp[1, 1]
    X = sp.symbols("X", positive=True)
    roots = sp.solve(sp.Eq(-a * k * X**2 + (a * c + k**2 - b**2) * X - k * c, 0), X)
    good = []
    for root in roots:
        root = sp.nsimplify(sp.simplify(root))
        if root.is_real and root >= 1 and sp.simplify(a * root - k) >= 0:
            good.append(sp.sqrt(root))
    return min(good, key=lambda z: float(z)) if good else None


def split(n, edges, x, period, amap, v, p0, p1, p01):
    t = sp.simplify(amap * local_tension(x, period, edges, v) * amap.T)
    vals = t.eigenvects()
    lam_max, _, vecs = max(vals, key=lambda z: float(z[0]))
    u = vecs[0]
    new = n
    out = []
    for k, (i, j, g, w) in enumerate(edges):
        if i == v and j == v and all(c == 0 for c in g):
            out += [(v, v, g, p0 * w), (new, new, g, p1 * w), (v, new, (0, 0), p01 * w)]
            continue
        vec = amap * edge_vector(x, period, edges[k])
        side_tail = (u.T * vec)[0] > 0 if i == v else None
        side_head = (u.T * (-vec))[0] > 0 if j == v else None
        ni = new if side_tail else i
        nj = new if side_head else j
        out.append((ni, nj, g, w))
    return n + 1, out


def run(theta, firmness, steps, w0=1, w1=1, p=(sp.Rational(1, 4), sp.Rational(1, 4), sp.Rational(1, 2))):
    n, edges, period = hexagonal(w0, w1)
    x = harmonic(n, edges, period)
    e0 = energy(x, period, edges)
    current = sp.Integer(1)
    results = []
    for _ in range(steps):
        best = None
        for v in range(n):
            k = firmness(degree(edges, v))
            lam = threshold_stretch(local_tension(x, period, edges, v), theta, k)
            if lam is None or float(lam) < float(current) - 1e-12:
                continue
            if best is None or float(lam) < float(best[0]) - 1e-12:
                best = (lam, v)
        lam, v = best
        n, edges = split(n, edges, x, period, uniaxial(lam, theta), v, *p)
        x = harmonic(n, edges, period)
        current = lam
        results.append((v, sp.nsimplify(sp.simplify(lam**2)), sp.nsimplify(1 - energy(x, period, edges) / e0)))
    return results


if __name__ == "__main__":
    K = sp.Integer(int(sys.argv[1]) if len(sys.argv) > 1 else 100)
    for v, lam2, R in run(sp.pi / 6, lambda d: K / d**2, 3):
        print(f"split v{v}: lambda^2 = {lam2} ({float(sp.sqrt(lam2)):.12f}), R = {R}")
