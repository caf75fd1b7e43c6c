"""Regenerate cerf_oracle.csv: erf and Faddeeva values at 50 significant digits.

    python tests/data/generate_cerf_oracle.py

Points are drawn with log-uniform modulus in [1e-4, 20] and uniform
argument, so every quadrant is covered.  Values are computed with mpmath,
independently of scipy.
"""

import csv
import pathlib

import mpmath
import numpy as np

N = 10_000
SEED = 20240611


def main():
    mpmath.mp.dps = 50
    rng = np.random.default_rng(SEED)
    r = 10.0 ** rng.uniform(-4.0, np.log10(20.0), N)
    phase = rng.uniform(0.0, 2.0 * np.pi, N)
    z = r * np.exp(1j * phase)
    out = pathlib.Path(__file__).with_name("cerf_oracle.csv")
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["re", "im", "erf_re", "erf_im", "w_re", "w_im"])
        for zz in z:
            # take the double exactly as stored
            zm = mpmath.mpc(float(zz.real), float(zz.imag))
            e = mpmath.erf(zm)
            fw = mpmath.exp(-zm * zm) * mpmath.erfc(-1j * zm)
            w.writerow([repr(float(zz.real)), repr(float(zz.imag))]
                       + [mpmath.nstr(x, 20, strip_zeros=False)
                          for x in (e.real, e.imag, fw.real, fw.imag)])


if __name__ == "__main__":
    main()
