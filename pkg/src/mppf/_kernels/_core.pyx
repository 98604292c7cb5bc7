# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch potential kernel.

Line-for-line transcription of ``pure.total_potential_grid``; see that
module for the contract. Built with -ffp-contract=off so the arithmetic is
the same sequence of IEEE double operations as the pure kernel.
"""

from libc.math cimport INFINITY, M_PI, acos, sqrt


def total_potential_grid(int n, double[::1] cand_pos, double[::1] cand_vel,
                         double gx, double gy, double gz,
                         int m, double[::1] obs_pos, double[::1] obs_vel,
                         double[::1] obs_inf,
                         double fx, double fy, double fz,
                         double xi, double eta, double tau, double kappa,
                         double align_max, bint advanced, double[::1] out):
    cdef int i, j
    cdef double cx, cy, cz, dgx, dgy, dgz, dg2, u
    cdef double rx, ry, rz, do2, d_o, dtj, w
    cdef double vx, vy, vz, v_uo, fn, vn, c, gamma, dx, dy, dz, sx, sy, sz
    cdef bint blocked

    fn = sqrt(fx * fx + fy * fy + fz * fz)
    for i in range(n):
        cx = cand_pos[3 * i]
        cy = cand_pos[3 * i + 1]
        cz = cand_pos[3 * i + 2]
        dgx = gx - cx
        dgy = gy - cy
        dgz = gz - cz
        dg2 = dgx * dgx + dgy * dgy + dgz * dgz
        u = 0.5 * xi * dg2
        blocked = False
        for j in range(m):
            rx = obs_pos[3 * j] - cx
            ry = obs_pos[3 * j + 1] - cy
            rz = obs_pos[3 * j + 2] - cz
            do2 = rx * rx + ry * ry + rz * rz
            if do2 == 0.0:
                blocked = True
                break
            d_o = sqrt(do2)
            dtj = obs_inf[j]
            if d_o <= dtj:
                w = 1.0 / d_o - 1.0 / dtj
                u += 0.5 * eta * w * w * dg2
        if blocked:
            out[i] = INFINITY
            continue
        if advanced:
            vx = cand_vel[3 * i]
            vy = cand_vel[3 * i + 1]
            vz = cand_vel[3 * i + 2]
            for j in range(m):
                rx = obs_pos[3 * j] - cx
                ry = obs_pos[3 * j + 1] - cy
                rz = obs_pos[3 * j + 2] - cz
                do2 = rx * rx + ry * ry + rz * rz
                d_o = sqrt(do2)
                dtj = obs_inf[j]
                if d_o > dtj:
                    continue
                v_uo = ((vx - obs_vel[3 * j]) * rx
                        + (vy - obs_vel[3 * j + 1]) * ry
                        + (vz - obs_vel[3 * j + 2]) * rz) / d_o
                if v_uo < 0.0:
                    continue
                u += 0.5 * tau * v_uo / d_o
            if fn != 0.0:
                vn = sqrt(vx * vx + vy * vy + vz * vz)
                if vn != 0.0:
                    c = (fx * vx + fy * vy + fz * vz) / (fn * vn)
                    if c > 1.0:
                        c = 1.0
                    elif c < -1.0:
                        c = -1.0
                    gamma = acos(c)
                    if gamma <= align_max:
                        dx = fx - vx
                        dy = fy - vy
                        dz = fz - vz
                        u += 0.5 * kappa * (dx * dx + dy * dy + dz * dz)
                    elif gamma >= 0.5 * M_PI + align_max:
                        sx = fx + vx
                        sy = fy + vy
                        sz = fz + vz
                        u += 0.5 * kappa * (sx * sx + sy * sy + sz * sz)
        out[i] = u
