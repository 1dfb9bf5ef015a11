# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring :mod:`hompath._pykernels` line for line."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sin, sqrt

cnp.import_array()

NAME = "cython"


cdef struct Src:
    double norm
    double sigma2_4
    double wo
    double we
    double dgd
    double omega
    double tau
    double tau1
    double tau2


cdef inline void joint(const Src* s, double to, double te, double* re, double* im) noexcept nogil:
    cdef double diff = te - to
    cdef double arg, mag, ph
    if diff < 0.0 or diff >= s.dgd:
        re[0] = 0.0
        im[0] = 0.0
        return
    arg = s.wo * to - s.we * te
    mag = s.norm * exp(-s.sigma2_4 * arg * arg)
    ph = s.omega * (to + te)
    re[0] = mag * cos(ph)
    im[0] = -mag * sin(ph)


cdef inline double abs2(double re, double im) noexcept nogil:
    return re * re + im * im


def coincidence_sums(p, d, a, double[::1] d_nodes, double[::1] d_weights,
                     double[::1] lo, double[::1] span,
                     double[::1] x_ref, double[::1] w_ref):
    cdef Src s
    s.norm = p.normalization()
    s.sigma2_4 = 0.25 * p.pump_bandwidth * p.pump_bandwidth
    s.wo = p.o_weight
    s.we = p.e_weight
    s.dgd = p.dgd()
    s.omega = p.mean_frequency
    s.tau = d.tau
    s.tau1 = d.tau1
    s.tau2 = d.tau2
    cdef double cphi = cos(p.pump_phase), sphi = sin(p.pump_phase)
    cdef bint analyzed = a is not None
    cdef double ks = 0.0, kc = 0.0
    if analyzed:
        s3, c3, s4, c4 = a.coefficients()
        ks = s3 * c4
        kc = c3 * s4

    cdef Py_ssize_t nk = d_nodes.shape[0], nj = x_ref.shape[0], k, j
    cdef double t3, t4, w
    cdef double ar, ai, br, bi, cr, ci, er, ei, pbr, pbi, per, pei
    cdef double hvr, hvi, vhr, vhi, bur, bui, xr, xi, yr, yi
    cdef double phv, pvh, bg
    cdef double s_hv = 0.0, s_vh = 0.0, s_bu = 0.0, s_bg = 0.0, s_coh = 0.0, s_cbg = 0.0

    with nogil:
        for k in range(nk):
            for j in range(nj):
                t3 = lo[k] + span[k] * x_ref[j]
                t4 = t3 + d_nodes[k]
                w = d_weights[k] * span[k] * w_ref[j]
                joint(&s, t3, t4 - s.tau2 - s.tau, &ar, &ai)
                joint(&s, t3 - s.tau, t4 - s.tau1, &br, &bi)
                joint(&s, t4, t3 - s.tau2 - s.tau, &cr, &ci)
                joint(&s, t4 - s.tau, t3 - s.tau1, &er, &ei)
                # e^{i phi} applied to the VH emission amplitudes
                pbr = cphi * br - sphi * bi
                pbi = cphi * bi + sphi * br
                per = cphi * er - sphi * ei
                pei = cphi * ei + sphi * er
                hvr = 0.5 * (-ar + pbr)
                hvi = 0.5 * (-ai + pbi)
                vhr = 0.5 * (cr - per)
                vhi = 0.5 * (ci - pei)
                bur = -0.5 * (ai + pbi)
                bui = 0.5 * (ar + pbr)
                phv = abs2(hvr, hvi)
                pvh = abs2(vhr, vhi)
                bg = 0.25 * (abs2(ar, ai) + abs2(br, bi) + abs2(cr, ci) + abs2(er, ei))
                s_hv += w * phv
                s_vh += w * pvh
                s_bu += w * abs2(bur, bui)
                s_bg += w * bg
                if analyzed:
                    s_coh += w * abs2(ks * hvr + kc * vhr, ks * hvi + kc * vhi)
                    xr = -ks * ar + kc * cr
                    xi = -ks * ai + kc * ci
                    yr = ks * br - kc * er
                    yi = ks * bi - kc * ei
                    s_cbg += w * 0.25 * (abs2(xr, xi) + abs2(yr, yi))
                else:
                    s_coh += w * (phv + pvh)
                    s_cbg += w * bg
    return np.array([s_hv, s_vh, s_bu, s_bg, s_coh, s_cbg])


def mc_tally(double[:, ::1] u, double pair_prob, cum_outcome, trans,
             double dark3, double dark4):
    cdef double c0 = cum_outcome[0], c1 = cum_outcome[1], c2 = cum_outcome[2]
    cdef double t3h = trans[0], t3v = trans[1], t4h = trans[2], t4v = trans[3]
    cdef Py_ssize_t n = u.shape[1], i
    cdef long long n3 = 0, n4 = 0, nc = 0, npair = 0
    cdef bint ph3, ph4, pair, k3, k4
    cdef double uo, ua, ub
    with nogil:
        for i in range(n):
            pair = u[0, i] < pair_prob
            ph3 = False
            ph4 = False
            if pair:
                npair += 1
                uo = u[1, i]
                ua = u[2, i]
                ub = u[3, i]
                if uo < c0:
                    ph3 = ua < t3h
                    ph4 = ub < t4v
                elif uo < c1:
                    ph3 = ua < t3v
                    ph4 = ub < t4h
                elif uo < c2:
                    ph3 = (ua < t3h) or (ub < t3v)
                else:
                    ph4 = (ua < t4h) or (ub < t4v)
            k3 = ph3 or (u[4, i] < dark3)
            k4 = ph4 or (u[5, i] < dark4)
            n3 += k3
            n4 += k4
            nc += k3 and k4
    return np.array([n3, n4, nc, npair], dtype=np.int64)
