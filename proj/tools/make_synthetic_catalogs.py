#!/usr/bin/env python3
"""Writes the synthetic JSONL catalogs under tests/data.

Records are not real Maass forms. Their Hecke eigenvalues come from Satake
angles (real forms) or from the divisor count over Z[i] (Gaussian forms, p = 0 only), so
they satisfy the Hecke relations exactly and load without quarantine.
"""
import json
import math
import pathlib
import sys


def satake_tau(n_max, theta):
    tau = [0.0] * (n_max + 1)
    tau[1] = 1.0
    for n in range(2, n_max + 1):
        p = 2
        while n % p:
            p += 1
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        th = theta(p)
        u = (k + 1.0) if abs(math.sin(th)) < 1e-300 else math.sin((k + 1) * th) / math.sin(th)
        tau[n] = tau[m] * u
    return tau[1:]


def angle(shift):
    return lambda p: math.pi * math.fmod(p * math.sqrt(shift), 1.0) or 0.3


def real_record(label, eps, t, alpha, shift, h_half):
    return {"label": label, "eps": eps, "t": t, "alpha": alpha, "tau": satake_tau(60, angle(shift)),
            "H_half": h_half, "norm": "synthetic"}


def gauss_divisor_count(a, b):
    n = a * a + b * b
    count = 0
    x = 1
    while x * x <= n:
        y = 0
        while x * x + y * y <= n:
            d = x * x + y * y
            if (a * x + b * y) % d == 0 and (b * x - a * y) % d == 0:
                count += 1
            y += 1
        x += 1
    return count


def gauss_record(label, p, t, rho1sq, eps, h_half, max_norm=50):
    tau = []
    a = 1
    while a * a <= max_norm:
        b = 0
        while a * a + b * b <= max_norm:
            tau.append([a, b, float(gauss_divisor_count(a, b))])
            b += 1
        a += 1
    rec = {"label": label, "p": p, "t": t, "rho1sq": rho1sq, "eps": eps, "tau": tau}
    if h_half is not None:
        rec["H_half"] = h_half
    return rec


def write(path, records):
    with open(path, "w") as f:
        for r in records:
            f.write(json.dumps(r) + "\n")


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent.parent / "tests" / "data")
    out.mkdir(parents=True, exist_ok=True)
    low = [
        real_record("syn-a", -1, 2.5, 1.0, 2, 0.0),
        real_record("syn-b", 1, 3.2, 0.8, 3, 0.7),
        real_record("syn-c", 1, 4.1, 0.6, 5, 1.1),
    ]
    # spectral t far above where a Gaussian weight of width 1 still contributes
    high = [
        real_record("syn-h1", 1, 40.0, 1.3, 6, 0.9),
        real_record("syn-h2", 1, 55.0, 1.1, 7, 1.2),
    ]
    write(out / "maass_real.jsonl", low)
    write(out / "maass_real_extended.jsonl", low + high)
    no_h = real_record("syn-noh", 1, 3.2, 0.8, 3, None)
    del no_h["H_half"]
    write(out / "maass_real_missing_h.jsonl", [low[1], no_h])
    write(out / "maass_gauss.jsonl", [
        gauss_record("gsyn-a", 0, 2.0, 1.0, 1, 0.8),
        gauss_record("gsyn-b", 0, 3.0, 0.5, 1, 0.5),
    ])


if __name__ == "__main__":
    main()
