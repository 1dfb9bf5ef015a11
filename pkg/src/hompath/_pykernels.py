"""Pure-numpy kernels; reference path and fallback when the extension is absent."""

import numpy as np

from .model import amplitude_hv, amplitude_vh, detector_amplitudes

NAME = "python"


def coincidence_sums(p, d, a, d_nodes, d_weights, lo, span, x_ref, w_ref):
    """Weighted sums over the (t3, t4 - t3) grid.

    Returns ``[hv, vh, bunched, background, analyzed, analyzed_background]``
    where ``background`` drops the cross term between the two emission
    amplitudes and the ``analyzed`` pair repeats the coincidence and its
    background after projection onto the analyzer axes (equal to
    ``hv + vh`` and ``background`` when ``a`` is None).
    """
    t3 = lo[:, None] + span[:, None] * x_ref[None, :]
    t4 = t3 + d_nodes[:, None]
    w = (d_weights * span)[:, None] * w_ref[None, :]

    hv, vh, bunched = detector_amplitudes(t3, t4, p, d)
    g_a = amplitude_hv(t3, t4, p, d)
    g_b = amplitude_vh(t3, t4, p, d)
    g_c = amplitude_hv(t4, t3, p, d)
    g_e = amplitude_vh(t4, t3, p, d)

    p_hv = np.abs(hv) ** 2
    p_vh = np.abs(vh) ** 2
    bg = 0.25 * (np.abs(g_a) ** 2 + np.abs(g_b) ** 2 + np.abs(g_c) ** 2 + np.abs(g_e) ** 2)
    if a is None:
        coh, coh_bg = p_hv + p_vh, bg
    else:
        s3, c3, s4, c4 = a.coefficients()
        coh = np.abs(s3 * c4 * hv + c3 * s4 * vh) ** 2
        coh_bg = 0.25 * (np.abs(-s3 * c4 * g_a + c3 * s4 * g_c) ** 2
                         + np.abs(s3 * c4 * g_b - c3 * s4 * g_e) ** 2)
    terms = (p_hv, p_vh, np.abs(bunched) ** 2, bg, coh, coh_bg)
    return np.array([np.sum(w * t) for t in terms])


def mc_tally(u, pair_prob, cum_outcome, trans, dark3, dark4):
    """Classify pulses from pre-drawn uniforms ``u`` of shape (6, n).

    Rows: pair emission, outcome, photon A survival, photon B survival,
    dark count D3, dark count D4. ``cum_outcome`` holds the three cumulative
    thresholds separating outcomes H3V4 | V3H4 | both@D3 | both@D4.
    ``trans`` is (t3H, t3V, t4H, t4V), analyzer transmission times efficiency.
    Returns int64 array ``[singles3, singles4, coincidences, pairs]``.
    """
    t3h, t3v, t4h, t4v = trans
    pair = u[0] < pair_prob
    out = np.searchsorted(np.asarray(cum_outcome), u[1], side="right")
    ua, ub = u[2], u[3]
    # photon A: the H photon for outcomes 0, 2, 3 and the V photon for outcome 1
    ph3 = np.where(out == 0, ua < t3h,
          np.where(out == 1, ua < t3v,
          np.where(out == 2, (ua < t3h) | (ub < t3v), False)))
    ph4 = np.where(out == 0, ub < t4v,
          np.where(out == 1, ub < t4h,
          np.where(out == 3, (ua < t4h) | (ub < t4v), False)))
    click3 = (pair & ph3) | (u[4] < dark3)
    click4 = (pair & ph4) | (u[5] < dark4)
    return np.array([click3.sum(), click4.sum(), (click3 & click4).sum(), pair.sum()],
                    dtype=np.int64)
