"""Regenerate the golden eigenvalue file with an independent high-precision oracle.

Integrates the eigenvalue integral in the substituted variable x = sin(theta),

    lambda_{n,l} = int_0^{sqrt(2)/2} (log 1/x)^(2/s-1) / x
                   * (1 + d - x^K P_l(x) - (1-x^2)^(K/2) P_l(sqrt(1-x^2)))
                   / sqrt(1-x^2) dx,          K = 2n + l,

with mpmath tanh-sinh quadrature at 40 significant digits and dyadic endpoint
splitting for the logarithmic corner.  Run from the repository root:

    python3 scripts/make_goldens.py

The output CSV is package data consumed by both the test suite and the CLI
verify suites.  The s = 2 closed forms (2/3)(1 - 2^(-3/2)) and 1 - 2^(-3/2)
validate the pipeline at generation time.
"""

import csv
import pathlib

import mpmath as mp

mp.mp.dps = 40

OUT = pathlib.Path(__file__).resolve().parent.parent / "src" / "dyboltz" / "data" / "golden_eigenvalues.csv"

CASES = [
    (2, 0, "0.5"),
    (2, 0, "1"),
    (2, 0, "2"),
    (2, 0, "4"),
    (0, 2, "1"),
    (0, 2, "2"),
    (3, 0, "1"),
    (5, 3, "2"),
    (10, 7, "4"),
    (1, 1, "0.5"),
]

PROVENANCE = "mpmath-tanhsinh-dps40-x=sin(theta)"


def legendre_poly(l, x):
    return mp.legendre(l, x)


def eigen_mp(n, l, s):
    K = 2 * n + l
    delta = 1 if (n == 0 and l == 0) else 0

    def f(x):
        if x <= 0:
            return mp.mpf(0)
        bracket = (
            1 + delta
            - x**K * legendre_poly(l, x)
            - (1 - x * x) ** mp.mpf(K / 2) * legendre_poly(l, mp.sqrt(1 - x * x))
        )
        return (mp.log(1 / x)) ** (2 / mp.mpf(s) - 1) / x * bracket / mp.sqrt(1 - x * x)

    top = mp.sqrt(2) / 2
    points = [mp.mpf(0)] + [mp.mpf(2) ** -j for j in (40, 30, 20, 14, 10, 7, 5, 3, 2)] + [top]
    return mp.quad(f, points)


GAP_OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden" / "scaled_gap.csv"

GAP_CASES = [
    (3, "0.001"),
    (40, "0.001"),
    (333, "0.001"),
    (333, "0.05"),
    (500, "1.0"),
    (500, "0.0015707963267948967"),  # pi/2000
]


def write_gap_goldens():
    rows = []
    for l, theta in GAP_CASES:
        th = mp.mpf(theta)
        val = (1 - mp.legendre(l, mp.cos(th / l))) / th**2
        rows.append((l, theta, mp.nstr(val, 17), "mpmath-legendre-dps40"))
        print(f"gap(l={l}, theta={theta}) = {mp.nstr(val, 17)}")
    GAP_OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(GAP_OUT, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["l", "theta", "gap", "provenance"])
        w.writerows(rows)
    print(f"wrote {GAP_OUT}")


def main():
    rows = []
    for n, l, s in CASES:
        val = eigen_mp(n, l, mp.mpf(s))
        rows.append((n, l, s, mp.nstr(val, 17), PROVENANCE))
        print(f"lambda(n={n}, l={l}, s={s}) = {mp.nstr(val, 17)}")

    closed_gap = mp.mpf(2) / 3 * (1 - mp.mpf(2) ** mp.mpf(-1.5))
    got = eigen_mp(2, 0, mp.mpf(2))
    assert abs(got - closed_gap) < mp.mpf(10) ** -25, (got, closed_gap)
    closed_02 = 1 - mp.mpf(2) ** mp.mpf(-1.5)
    got = eigen_mp(0, 2, mp.mpf(2))
    assert abs(got - closed_02) < mp.mpf(10) ** -25, (got, closed_02)
    print("closed-form validation at s=2 passed (1e-25)")

    with open(OUT, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "l", "s", "lambda", "provenance"])
        w.writerows(rows)
    print(f"wrote {OUT}")
    write_gap_goldens()


if __name__ == "__main__":
    main()
