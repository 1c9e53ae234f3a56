"""Pure-numpy convolution kernels (im2col + BLAS matmul).

This is the fallback backend; the compiled extension in ``_convkern``
implements the same contracts. Either backend may be active, see
``attnwarp.kernels``.
"""

import numpy as np


def _im2col(x, kh, kw, stride, pad):
    n, c, h, w = x.shape
    if pad:
        x = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    ho = (h + 2 * pad - kh) // stride + 1
    wo = (w + 2 * pad - kw) // stride + 1
    s0, s1, s2, s3 = x.strides
    cols = np.lib.stride_tricks.as_strided(
        x,
        shape=(n, c, kh, kw, ho, wo),
        strides=(s0, s1, s2, s3, s2 * stride, s3 * stride),
        writeable=False,
    )
    # (n, c*kh*kw, ho*wo), contiguous copy so matmul can run on it
    return np.ascontiguousarray(cols).reshape(n, c * kh * kw, ho * wo), ho, wo


def conv2d_fwd(x, w, b=None, stride=1, pad=0):
    n, _, _, _ = x.shape
    co, _, kh, kw = w.shape
    cols, ho, wo = _im2col(x, kh, kw, stride, pad)
    y = np.matmul(w.reshape(co, -1)[None], cols).reshape(n, co, ho, wo)
    if b is not None:
        y += b[:, None, None]
    return y


def conv2d_bwd(x, w, gy, stride=1, pad=0, with_bias=True):
    n, ci, h, wd = x.shape
    co, _, kh, kw = w.shape
    ho, wo = gy.shape[2], gy.shape[3]
    gymat = gy.reshape(n, co, ho * wo)

    gb = gy.sum(axis=(0, 2, 3)) if with_bias else None

    cols, _, _ = _im2col(x, kh, kw, stride, pad)
    gw = np.matmul(gymat, cols.transpose(0, 2, 1)).sum(axis=0).reshape(w.shape)

    gcols = np.matmul(w.reshape(co, -1).T[None], gymat)
    gcols = gcols.reshape(n, ci, kh, kw, ho, wo)
    gxp = np.zeros((n, ci, h + 2 * pad, wd + 2 * pad), dtype=x.dtype)
    for i in range(kh):
        for j in range(kw):
            gxp[:, :, i : i + stride * ho : stride, j : j + stride * wo : stride] += gcols[
                :, :, i, j
            ]
    gx = gxp[:, :, pad : pad + h, pad : pad + wd] if pad else gxp
    return np.ascontiguousarray(gx), gw, gb
