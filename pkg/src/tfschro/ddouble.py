"""Compensated double-double arithmetic, vectorized over numpy arrays.

A double-double value is an unevaluated pair (hi, lo) with hi + lo carrying
roughly 32 significant decimal digits.  Only the handful of operations needed
by the Mittag-Leffler series accumulator are provided: addition, product by a
plain double, and full double-double product.  Python 3.10 has no math.fma,
so exact products use the classic Dekker split; that limits operands to
|x| < 2^996, far beyond anything the series branch produces.
"""

import numpy as np

_SPLITTER = 134217729.0  # 2^27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    # requires |a| >= |b| elementwise
    s = a + b
    err = b - (s - a)
    return s, err


def two_prod(a, b):
    p = a * b
    c = _SPLITTER * a
    ahi = c - (c - a)
    alo = a - ahi
    c = _SPLITTER * b
    bhi = c - (c - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def dd_add(xh, xl, yh, yl):
    s, e = two_sum(xh, yh)
    t, f = two_sum(xl, yl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def dd_add_d(xh, xl, y):
    s, e = two_sum(xh, y)
    e = e + xl
    return quick_two_sum(s, e)


def dd_mul(xh, xl, yh, yl):
    p, e = two_prod(xh, yh)
    e = e + (xh * yl + xl * yh)
    return quick_two_sum(p, e)


def dd_mul_d(xh, xl, y):
    p, e = two_prod(xh, y)
    e = e + xl * y
    return quick_two_sum(p, e)


def cdd_mul_z(re_h, re_l, im_h, im_l, zr, zi):
    """Multiply a complex double-double by a plain complex (zr + i*zi)."""
    ar_h, ar_l = dd_mul_d(re_h, re_l, zr)
    br_h, br_l = dd_mul_d(im_h, im_l, -zi)
    out_re = dd_add(ar_h, ar_l, br_h, br_l)
    ai_h, ai_l = dd_mul_d(re_h, re_l, zi)
    bi_h, bi_l = dd_mul_d(im_h, im_l, zr)
    out_im = dd_add(ai_h, ai_l, bi_h, bi_l)
    return out_re + out_im  # (re_h, re_l, im_h, im_l)


def cdd_mul_dd(re_h, re_l, im_h, im_l, ch, cl):
    """Multiply a complex double-double by a real double-double coefficient."""
    rr = dd_mul(re_h, re_l, ch, cl)
    ii = dd_mul(im_h, im_l, ch, cl)
    return rr + ii


def cdd_add(a, b):
    re = dd_add(a[0], a[1], b[0], b[1])
    im = dd_add(a[2], a[3], b[2], b[3])
    return re + im


def cdd_to_complex(re_h, re_l, im_h, im_l):
    return (re_h + re_l) + 1j * (im_h + im_l)


def cdd_zeros(shape):
    z = np.zeros(shape)
    return (z.copy(), z.copy(), z.copy(), z.copy())
