"""Generate classical modular polynomial files in the `[a,b] c` format.

Solves for the symmetric integer coefficients of Phi_l(X, Y) from the
q-expansion identity Phi_l(j(q), j(q^l)) = 0. Intended for small l only
(fixture generation); usage: python3 gen_phi.py L > phi_L.txt
"""
import sys
from fractions import Fraction


def j_expansion(n_terms):
    """Coefficients of q*j(q) = sum c[k] q^k for k < n_terms."""
    N = n_terms + 2
    sigma3 = [0] * N
    for d in range(1, N):
        for m in range(d, N, d):
            sigma3[m] += d ** 3
    e4 = [1] + [240 * sigma3[k] for k in range(1, N)]

    def mul(a, b):
        out = [0] * N
        for i, x in enumerate(a):
            if x:
                for k in range(N - i):
                    out[i + k] += x * b[k]
        return out

    e4cube = mul(mul(e4, e4), e4)
    # Delta/q = prod (1-q^n)^24
    eta = [1] + [0] * (N - 1)
    for n in range(1, N):
        new = eta[:]
        for k in range(n, N):
            new[k] -= eta[k - n]
        eta = new
    d = [1] + [0] * (N - 1)
    for _ in range(24):
        d = mul(d, eta)
    # q*j = E4^3 / (Delta/q)
    inv = [0] * N
    inv[0] = 1
    for k in range(1, N):
        inv[k] = -sum(d[i] * inv[k - i] for i in range(1, k + 1))
    return mul(e4cube, inv)[:n_terms]


def laurent_pow(c, e, shift, n):
    """Series of j(q^shift)^e as dict exponent->coeff, truncated below n."""
    # j(q^s) = q^-s * sum c[k] q^(s k)
    base = {shift * k - shift: v for k, v in enumerate(c) if shift * k - shift < n}
    out = {0: 1}
    for _ in range(e):
        new = {}
        for a, x in out.items():
            for b, y in base.items():
                if a + b < n:
                    new[a + b] = new.get(a + b, 0) + x * y
        out = new
    return out


def solve(ell):
    top = ell + 1
    unknowns = [(a, b) for a in range(top) for b in range(a + 1)]
    low = -ell * top
    n_eq = len(unknowns) + 20
    hi = max(low + n_eq, n_eq)
    # intermediate truncation must leave room for the poles of the other factors
    room = hi - low
    c = j_expansion(room + 5)
    jx = [laurent_pow(c, e, 1, hi + room) for e in range(top + 1)]
    jy = [laurent_pow(c, e, ell, hi + room) for e in range(top + 1)]

    def prod(a, b):
        out = {}
        for x, u in jx[a].items():
            for y, v in jy[b].items():
                if x + y < hi:
                    out[x + y] = out.get(x + y, 0) + u * v
        return out

    cols = []
    for a, b in unknowns:
        s = prod(a, b)
        if a != b:
            t = prod(b, a)
            for k, v in t.items():
                s[k] = s.get(k, 0) + v
        cols.append(s)
    rhs = prod(top, 0)
    t = prod(0, top)
    for k, v in t.items():
        rhs[k] = rhs.get(k, 0) + v
    rows = []
    for k in range(low, hi):
        rows.append([Fraction(col.get(k, 0)) for col in cols] + [Fraction(-rhs.get(k, 0))])
    m = len(unknowns)
    r = 0
    piv = []
    for col in range(m):
        pr = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pr is None:
            raise SystemExit(f"singular at column {col}")
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(col)
        r += 1
    for i in range(r, len(rows)):
        assert rows[i][-1] == 0, "inconsistent system"
    sol = {unknowns[i]: rows[i][-1] for i in range(m)}
    for v in sol.values():
        assert v.denominator == 1
    sol[(top, 0)] = Fraction(1)
    return sol


def main():
    ell = int(sys.argv[1])
    sol = solve(ell)
    print(f"# classical modular polynomial Phi_{ell}, entries [a,b] c with a >= b")
    for (a, b) in sorted(sol, reverse=True):
        v = sol[(a, b)].numerator
        if v:
            print(f"[{a},{b}] {v}")


if __name__ == "__main__":
    main()
