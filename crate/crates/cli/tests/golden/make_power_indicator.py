"""Regenerate power_indicator.json with 30-digit arithmetic.

    python3 make_power_indicator.py > power_indicator.json
"""
import json

from mpmath import gamma, mp, mpf

mp.dps = 30

TUPLES = [
    ([0], -0.5, 1, 2),
    ([0.5], -0.5, 1, 2),
    ([1], -0.5, 1, 2),
    ([1], -2.5, 0.5, 0.7),
    ([2.5], -1, 3, 1.5),
    ([0], -0.9, 0.3, 5),
    ([2.5], -5.5, 2, 0.5),
    ([0, 0], -1, 2, 1),
    ([0.5, 1.5], -0.5, 1, 2),
    ([1, 1], -4, 0.25, 3),
    ([0.25, 0.75], -0.1, 4, 1.2),
    ([0.5, 0.5, 0.5], -2, 1.5, 0.8),
]


def fmt(x):
    return str(int(x)) if float(x).is_integer() else str(x)


def rows(i, ks, delta, beta, r):
    ks = [mpf(str(k)) for k in ks]
    delta, beta, r = mpf(str(delta)), mpf(str(beta)), mpf(str(r))
    d = len(ks)
    g = sum(ks)
    n = 2 * g + d
    inv_ck = mpf(1)
    for k in ks:
        inv_ck *= 2 ** (k + mpf(1) / 2) * gamma(k + mpf(1) / 2)
    dk = inv_ck / (2 ** (g + mpf(d) / 2 - 1) * gamma(g + mpf(d) / 2))
    nu1 = dk / n
    big_r = nu1 * r**n
    out = []
    for s in (0.5, 2):
        s_ = mpf(str(s))
        out.append((f"D_u(s={fmt(s)})", nu1 * s_ ** (n / delta)))
        out.append((f"D_1/v(s={fmt(s)})", nu1 * s_ ** (-n / beta)))
    out.append(("D_f(s=0.5)", big_r))
    out.append(("D_f(s=1.5)", mpf(0)))
    for t in (0.1, 1, 10):
        t_ = mpf(str(t))
        out.append((f"u*(t={fmt(t)})", nu1 ** (-delta / n) * t_ ** (delta / n)))
        out.append((f"(1/v)*(t={fmt(t)})", nu1 ** (beta / n) * t_ ** (-beta / n)))
    out.append(("f*(t=R/2)", mpf(1)))
    out.append(("f*(t=2R)", mpf(0)))
    want_u = dk * r ** (delta + n) / (delta + n)
    want_v = dk * r ** (beta + n) / (beta + n)
    out.append(("int f u", want_u))
    out.append(("int f* u*", want_u))
    out.append(("int f v", want_v))
    out.append(("int f* / (1/v)*", want_v))
    return [{"case": f"t{i:02d} {name}", "exact": float(v)} for name, v in out]


if __name__ == "__main__":
    table = [row for i, t in enumerate(TUPLES) for row in rows(i, *t)]
    print(json.dumps(table, indent=1))
