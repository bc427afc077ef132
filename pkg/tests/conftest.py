import numpy as np

from texstego import FloatImage, SubbandSet, idwt2


def rand_image(rng, h, w, peak=255.0):
    return FloatImage(rng.uniform(0.0, peak, size=(h, w, 3)), peak)


def gap_dominant_cover(rng, side, min_gap, peak=65535.0, family="haar"):
    """Cover whose CD singular-value gaps all exceed min_gap on every channel.

    Built backwards: choose the CD spectrum with gaps of 1.5*min_gap, wrap it
    in random orthogonal factors, then run the inverse transform. Pixel values
    may exceed [0, peak]; FloatImage permits that and the embedding math does
    not care.
    """
    half = side
    ca = rng.uniform(0.0, peak, size=(half, half, 3))
    ch = rng.uniform(-1.0, 1.0, size=(half, half, 3))
    cv = rng.uniform(-1.0, 1.0, size=(half, half, 3))
    cd = np.empty((half, half, 3))
    spectrum = 1.5 * min_gap * np.arange(half, 0, -1, dtype=np.float64)
    for c in range(3):
        q1, _ = np.linalg.qr(rng.normal(size=(half, half)))
        q2, _ = np.linalg.qr(rng.normal(size=(half, half)))
        cd[:, :, c] = (q1 * spectrum) @ q2.T
    return idwt2(SubbandSet(ca=ca, ch=ch, cv=cv, cd=cd, family=family, peak=peak))
