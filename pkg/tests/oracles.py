"""Independent reference implementations used as test oracles."""
import math

import numpy as np

from spin_uncertainty.spin_core import QuantumState


def wigner_d_factorial(s, theta):
    """Wigner's explicit sum for d[n, m] = <n|exp(-i theta L2)|m>, rows/cols descending."""
    two_s = int(2 * s)
    d = two_s + 1
    out = np.zeros((d, d))
    c, sn = math.cos(theta / 2), math.sin(theta / 2)
    f = math.factorial
    for i in range(d):
        n = s - i
        for j in range(d):
            m = s - j
            jn, jm = int(s + n), int(s - n)
            km, lm = int(s + m), int(s - m)
            pre = math.sqrt(f(jn) * f(jm) * f(km) * f(lm))
            total = 0.0
            for k in range(0, two_s + 1):
                a = int(s + m) - k
                b = k
                e = int(s - n) - k
                g = int(n - m) + k
                if min(a, b, e, g) < 0:
                    continue
                total += ((-1) ** g * c ** (2 * s + m - n - 2 * k) * sn ** (n - m + 2 * k)
                          / (f(a) * f(b) * f(e) * f(g)))
            out[i, j] = pre * total
    return out


def pure(v):
    return QuantumState(vector=np.asarray(v, dtype=complex) / np.linalg.norm(v))
