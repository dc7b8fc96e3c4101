"""Bessel function of the first kind, order zero.

Double-precision rational approximations on [0, 5] and a Hankel asymptotic
form with rational correction factors beyond; absolute error stays below
1e-15 across [0, 30] and well below 1e-12 out to |x| = 200, which is the
accuracy this package depends on for angular-averaging matrices.
"""

from __future__ import annotations

import numpy as np

_SQ2OPI = 7.9788456080286535587989e-1  # sqrt(2/pi)
_PIO4 = 7.85398163397448309616e-1

_RP = (
    -4.79443220978201773821e9,
    1.95617491946556577543e12,
    -2.49248344360967716204e14,
    9.70862251047306323952e15,
)
_RQ = (  # implicit leading coefficient 1
    4.99563147152651017219e2,
    1.73785401676374683123e5,
    4.84409658339962045305e7,
    1.11855537045356834862e10,
    2.11277520115489217587e12,
    3.10518229857422583814e14,
    3.18121955943204943306e16,
    1.71086294081043136091e18,
)
_PP = (
    7.96936729297347051624e-4,
    8.28352392107440799803e-2,
    1.23953371646414299388e0,
    5.44725003058768775090e0,
    8.74716500199817011941e0,
    5.30324038235394892183e0,
    9.99999999999999997821e-1,
)
_PQ = (
    9.24408810558863637013e-4,
    8.56288474354474431428e-2,
    1.25352743901058953537e0,
    5.47097740330417105182e0,
    8.76190883237069594232e0,
    5.30605288235394617618e0,
    1.00000000000000000218e0,
)
_QP = (
    -1.13663838898469149931e-2,
    -1.28252718670509318512e0,
    -1.95539544257735972385e1,
    -9.32060152123768231369e1,
    -1.77681167980488050595e2,
    -1.47077505154951170175e2,
    -5.14105326766599330220e1,
    -6.05014350600728481186e0,
)
_QQ = (  # implicit leading coefficient 1
    6.43178256118178023184e1,
    8.56430025976980587198e2,
    3.88240183605401609683e3,
    7.24046774195652478189e3,
    5.93072701187316984827e3,
    2.06209331660327847417e3,
    2.42005740240291393179e2,
)
_DR1 = 5.78318596294678452118e0
_DR2 = 3.04712623436620863991e1


def _polevl(x, coef):
    ans = np.full_like(x, coef[0])
    for c in coef[1:]:
        ans = ans * x + c
    return ans


def _p1evl(x, coef):
    ans = x + coef[0]
    for c in coef[1:]:
        ans = ans * x + c
    return ans


def bessel_j0(x):
    """J0(x). Accepts a scalar or ndarray; returns the matching shape."""
    arr = np.abs(np.asarray(x, dtype=np.float64))
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)

    small = arr < 5.0
    if small.any():
        z = arr[small] ** 2
        p = (z - _DR1) * (z - _DR2) * _polevl(z, _RP) / _p1evl(z, _RQ)
        # below ~1e-5 the rational form loses nothing, but the two-term
        # series is exact to double precision and avoids the zero factors
        tiny = arr[small] < 1e-5
        p[tiny] = 1.0 - z[tiny] / 4.0
        out[small] = p

    big = ~small
    if big.any():
        xb = arr[big]
        w = 5.0 / xb
        z = 25.0 / (xb * xb)
        p = _polevl(z, _PP) / _polevl(z, _PQ)
        q = _polevl(z, _QP) / _p1evl(z, _QQ)
        xn = xb - _PIO4
        out[big] = _SQ2OPI * (p * np.cos(xn) - w * q * np.sin(xn)) / np.sqrt(xb)

    return float(out[0]) if scalar else out.reshape(np.shape(x))
