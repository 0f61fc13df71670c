"""Regenerate src/nonlocal_fourier/data/double_fixture.json at 40 digits.

sigma(x) = i(alpha + gamma x / b) on [0, pi] with alpha = 1/2. We solve
Delta(lam) = Delta'(lam) = 0 for (gamma, lam = i t), then record the Taylor
data of (lam - lam*)^2 / Delta and every other zero in |lam| <= 6.
This script uses mpmath only and never imports the package.
"""
import json
import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
B = mp.pi
ALPHA = mp.mpf(1) / 2
RADIUS = 6


def delta(lam, gamma):
    # 1 + i lam integral_0^b exp(i lam x) (alpha + gamma x / b) dx
    f = lambda x: mp.exp(1j * lam * x) * (ALPHA + gamma * x / B)  # noqa: E731
    return 1 + 1j * lam * mp.quad(f, [0, B / 2, B])


def ddelta(lam, gamma, k):
    return mp.diff(lambda z: delta(z, gamma), lam, k)


def main(out):
    def eqs(gamma, t):
        lam = 1j * t
        return [mp.re(delta(lam, gamma)), mp.re(ddelta(lam, gamma, 1) / 1j)]

    gamma, t = mp.findroot(eqs, (mp.mpf("1.89"), mp.mpf("0.73")))
    lam = 1j * t
    d2 = ddelta(lam, gamma, 2)
    d3 = ddelta(lam, gamma, 3)
    a2, a3 = d2 / 2, d3 / 6
    taylor = [1 / a2, -a3 / a2 ** 2]  # d_j = j! * coeff_j of (lam - lam*)^2 / Delta

    zeros = []
    for re in range(-7, 8):
        for im in (0.0, 0.5, 1.0):
            try:
                z = mp.findroot(lambda z: delta(z, gamma), mp.mpc(re + 0.1, im))
            except (ValueError, ZeroDivisionError):
                continue
            if abs(z) <= RADIUS and abs(z - lam) > 1e-6 and all(abs(z - w) > 1e-8 for w in zeros):
                zeros.append(z)
    zeros.sort(key=lambda z: (float(mp.re(z)), float(mp.im(z))))

    c = lambda z: [mp.nstr(mp.re(z), 34), mp.nstr(mp.im(z), 34)]  # noqa: E731
    data = {
        "b": "pi",
        "alpha": mp.nstr(ALPHA, 34),
        "gamma": mp.nstr(gamma, 40),
        "lambda_star": c(lam),
        "multiplicity": 2,
        "delta_at_star": c(delta(lam, gamma)),
        "delta_prime_at_star": c(ddelta(lam, gamma, 1)),
        "delta_second": c(d2),
        "delta_third": c(d3),
        "taylor": [c(d) for d in taylor],
        "radius": RADIUS,
        "other_zeros": [c(z) for z in zeros],
        "count_in_radius": 2 + len(zeros),
    }
    Path(out).write_text(json.dumps(data, indent=2) + "\n")
    print(json.dumps(data, indent=2))


if __name__ == "__main__":
    default = Path(__file__).resolve().parents[1] / "src" / "nonlocal_fourier" / "data" / "double_fixture.json"
    main(sys.argv[1] if len(sys.argv) > 1 else default)
