"""Hot loops, compiled with numba when available.

Everything here is written so a plain-Python fallback (numba absent) still
produces identical values, just slower. Keep the kernels free of Python
objects: scalars, ints and preallocated arrays only.
"""

import cmath
import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on stripped installs
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


LN2 = math.log(2.0)


@njit(cache=True)
def es_sum_single(q, alpha, theta):
    """Compensated sum of log|e^{2pi i (theta + k alpha)} - 1|, k = 0..q-1."""
    tot = 0.0
    comp = 0.0
    x = theta % 1.0
    a = alpha % 1.0
    for _ in range(q):
        v = math.log(2.0 * abs(math.sin(math.pi * x)))
        y = v - comp
        t = tot + y
        comp = (t - tot) - y
        tot = t
        x += a
        if x >= 1.0:
            x -= 1.0
    return tot


@njit(cache=True, fastmath=True)
def es_sum_grid(q, alpha, theta0, n_grid, out):
    """S(q, alpha, .) on the grid theta0 + g/n_grid, g = 0..n_grid-1.

    Uses the unit-circle recurrence w -> w*e^{2pi i alpha} and blocks of 8
    squared distances between exponent extractions, so no transcendental is
    evaluated in the inner loop.
    """
    two_pi = 2.0 * math.pi
    ca = math.cos(two_pi * alpha)
    sa = math.sin(two_pi * alpha)
    for g in range(n_grid):
        th = theta0 + g / n_grid
        wr = math.cos(two_pi * th)
        wi = math.sin(two_pi * th)
        p = 1.0
        exp_acc = 0
        logsum = 0.0
        for k in range(q):
            dr = wr - 1.0
            p *= dr * dr + wi * wi
            if k & 7 == 7:
                p, e = math.frexp(p)
                exp_acc += e
            wr, wi = wr * ca - wi * sa, wr * sa + wi * ca
            if k & 4095 == 4095:
                nrm = 1.0 / math.sqrt(wr * wr + wi * wi)
                wr *= nrm
                wi *= nrm
        if p > 0.0:
            logsum = math.log(p)
        else:
            logsum = -math.inf
        out[g] = 0.5 * (logsum + exp_acc * LN2)
    return out


@njit(cache=True)
def sturm_count(diag, off2, x):
    """Number of eigenvalues of the symmetric tridiagonal (diag, off)
    strictly below x; off2 holds squared off-diagonal entries."""
    n = diag.shape[0]
    cnt = 0
    d = 1.0
    for k in range(n):
        if k == 0:
            d = diag[0] - x
        else:
            d = (diag[k] - x) - off2[k - 1] / d
        if d == 0.0:
            d = -1e-300
        if d < 0.0:
            cnt += 1
    return cnt


@njit(cache=True)
def tridiag_eigvals_bisect(diag, off2, tol):
    """All eigenvalues of a symmetric tridiagonal matrix by Gershgorin
    bracketing plus Sturm-count bisection. Unconditionally convergent."""
    n = diag.shape[0]
    rad = 0.0
    for k in range(n):
        r = 0.0
        if k > 0:
            r += math.sqrt(off2[k - 1])
        if k < n - 1:
            r += math.sqrt(off2[k])
        if abs(diag[k]) + r > rad:
            rad = abs(diag[k]) + r
    out = np.empty(n)
    floor_lo = -rad - tol
    for i in range(n):
        a = floor_lo  # eigenvalues emerge sorted, so reuse the last bracket
        b = rad + tol
        while b - a > tol:
            m = 0.5 * (a + b)
            if sturm_count(diag, off2, m) > i:
                b = m
            else:
                a = m
        out[i] = 0.5 * (a + b)
        floor_lo = a
    return out


@njit(cache=True)
def jacobi_le_batch(
    e_grid, eps_grid, phases, alpha, lam1, lam2, lam3, n_iter, renorm_every, out_le
):
    """Lyapunov exponents of the phase-complexified Jacobi cocycle

        A(z) = [[E - v(z), -ct(z - alpha)], [c(z), 0]],  z = theta + i eps,

    batched over (eps, phase, E); out_le has shape (n_eps, n_ph, n_E) and
    receives log ||A_n|| / n (matrix products, Frobenius norm, rescaled to
    unit norm every `renorm_every` steps with compensated log accumulation).

    The (2,2)-zero structure makes the bottom row of the running product a
    lagged copy of the top row scaled by c at the previous orbit point, so
    only the top row is stored; the Frobenius norm and the renormalization
    are those of the full 2x2 product.
    """
    n_eps = eps_grid.shape[0]
    n_ph = phases.shape[0]
    n_e = e_grid.shape[0]
    two_pi = 2.0 * math.pi

    ua = math.cos(two_pi * alpha) + 1j * math.sin(two_pi * alpha)
    ph = math.cos(math.pi * alpha) + 1j * math.sin(math.pi * alpha)  # e^{i pi a}
    phc = ph.conjugate()

    x11 = np.empty(n_e, dtype=np.complex128)
    x12 = np.empty(n_e, dtype=np.complex128)
    y11 = np.empty(n_e, dtype=np.complex128)  # lagged top row
    y12 = np.empty(n_e, dtype=np.complex128)
    acc = np.empty(n_e)
    comp = np.empty(n_e)

    for ie in range(n_eps):
        d = math.exp(-two_pi * eps_grid[ie])
        idv = 1.0 / d
        # c(z)        = C1 conj(w) + lam2 + C3 w
        # ct(z-alpha) = D1 w       + lam2 + D3 conj(w)
        C1 = lam1 * phc * idv
        C3 = lam3 * ph * d
        D1 = lam1 * phc * d
        D3 = lam3 * ph * idv
        for ip in range(n_ph):
            th = phases[ip]
            w = math.cos(two_pi * th) + 1j * math.sin(two_pi * th)
            # state: x = top row of the product, y = previous top row,
            # bottom row = c_prev * y; seeding y=(0,1), c_prev=1 makes the
            # virtual bottom row equal the identity's (0, 1)
            for j in range(n_e):
                x11[j] = 1.0 + 0.0j
                x12[j] = 0.0 + 0.0j
                y11[j] = 0.0 + 0.0j
                y12[j] = 1.0 + 0.0j
                acc[j] = 0.0
                comp[j] = 0.0
            c_prev = 1.0 + 0.0j
            for k in range(n_iter):
                cw = w.conjugate()
                c_here = C1 * cw + lam2 + C3 * w
                g = -(D1 * w + lam2 + D3 * cw) * c_prev
                v_here = w * d + cw * idv
                for j in range(n_e):
                    a = e_grid[j] - v_here
                    t11 = a * x11[j] + g * y11[j]
                    t12 = a * x12[j] + g * y12[j]
                    y11[j] = x11[j]
                    y12[j] = x12[j]
                    x11[j] = t11
                    x12[j] = t12
                c_prev = c_here
                w *= ua
                if k & 1023 == 1023:
                    nrm = 1.0 / abs(w)
                    w *= nrm
                if (k + 1) % renorm_every == 0 or k == n_iter - 1:
                    cp2 = c_prev.real * c_prev.real + c_prev.imag * c_prev.imag
                    for j in range(n_e):
                        top = (
                            x11[j].real * x11[j].real
                            + x11[j].imag * x11[j].imag
                            + x12[j].real * x12[j].real
                            + x12[j].imag * x12[j].imag
                        )
                        bot = cp2 * (
                            y11[j].real * y11[j].real
                            + y11[j].imag * y11[j].imag
                            + y12[j].real * y12[j].real
                            + y12[j].imag * y12[j].imag
                        )
                        s = math.sqrt(top + bot)
                        if s > 0.0:
                            inv = 1.0 / s
                            x11[j] *= inv
                            x12[j] *= inv
                            y11[j] *= inv
                            y12[j] *= inv
                            v = math.log(s)
                        else:
                            v = -math.inf
                        yv = v - comp[j]
                        tv = acc[j] + yv
                        comp[j] = (tv - acc[j]) - yv
                        acc[j] = tv
            for j in range(n_e):
                out_le[ie, ip, j] = acc[j] / n_iter
    return out_le


@njit(cache=True)
def rotation_angle_lift(alpha, lam1, lam2, lam3, e_val, theta0, n_iter):
    """Vector-angle lift under the zero-eps normalized real Jacobi cocycle
    M(theta) ~ [[E - v, -|c|(theta-alpha)], [|c|(theta), 0]] (the positive
    unit-determinant rescale does not move directions, so it is dropped).

    Because the off-diagonals are positive, each step maps the open right
    half-plane into the upper half-plane; the canonical per-step angle
    advance therefore lies in [-pi/2, 3pi/2) and the lift wraps into that
    window. Steps within 1e-9 of the window boundary are counted as
    unreliable. Returns (total_angle, total_angle_first_half, unreliable).
    """
    two_pi = 2.0 * math.pi
    half_pi = 0.5 * math.pi
    half = n_iter // 2
    v1 = 0.894427190999915878  # unit vector along (2, 1)
    v2 = 0.447213595499957939
    phi = math.atan2(v2, v1)
    total = 0.0
    total_half = 0.0
    bad = 0

    th = theta0 % 1.0
    a_step = alpha % 1.0
    th_prev = (th - a_step) % 1.0
    ang = two_pi * (th_prev + 0.5 * a_step)
    cr = (lam1 + lam3) * math.cos(ang) + lam2
    ci = (lam3 - lam1) * math.sin(ang)
    a_prev = math.sqrt(cr * cr + ci * ci)

    for k in range(n_iter):
        ang = two_pi * (th + 0.5 * a_step)
        cr = (lam1 + lam3) * math.cos(ang) + lam2
        ci = (lam3 - lam1) * math.sin(ang)
        a_cur = math.sqrt(cr * cr + ci * ci)
        vv = 2.0 * math.cos(two_pi * th)
        w1 = (e_val - vv) * v1 - a_prev * v2
        w2 = a_cur * v1
        nrm = math.sqrt(w1 * w1 + w2 * w2)
        if nrm == 0.0:
            bad += n_iter  # degenerate step; poison the run
            break
        v1 = w1 / nrm
        v2 = w2 / nrm
        phi_new = math.atan2(v2, v1)
        delta = (phi_new - phi + half_pi) % two_pi - half_pi
        if delta < -half_pi + 1e-9 or delta > 3.0 * half_pi - 1e-9:
            bad += 1
        total += delta
        if k < half:
            total_half += delta
        phi = phi_new
        a_prev = a_cur
        th += a_step
        if th >= 1.0:
            th -= 1.0
    return total, total_half, bad


@njit(cache=True)
def generic_cocycle_le(code, l1, l2, l3, alpha, e_val, eps, theta0, n_iter,
                       renorm_every, conj_m, conj_inv, use_conj):
    """Lyapunov exponent of a single phase-complexified cocycle orbit.

    code: 0 jacobi_A, 1 transfer_B, 2 normalized_sharp, 3 zero_nn_Btilde.
    conj_m/conj_inv: fixed change of basis applied to every step matrix.
    Returns (le_estimate, det_residual, ok); ok goes False when an orbit
    point trips the |c| > 1e-12 guard of the divided variants. det_residual
    is the worst |det - 1| seen for code 2 (0.0 for the others).
    """
    two_pi = 2.0 * math.pi
    d = math.exp(-two_pi * eps)
    idv = 1.0 / d
    ph = complex(math.cos(math.pi * alpha), math.sin(math.pi * alpha))
    phc = ph.conjugate()
    ua = complex(math.cos(two_pi * alpha), math.sin(two_pi * alpha))
    w = complex(math.cos(two_pi * theta0), math.sin(two_pi * theta0))

    m11 = 1.0 + 0.0j
    m12 = 0.0 + 0.0j
    m21 = 0.0 + 0.0j
    m22 = 1.0 + 0.0j
    acc = 0.0
    comp = 0.0
    det_res = 0.0

    for k in range(n_iter):
        cw = w.conjugate()
        c_cur = l1 * phc * idv * cw + l2 + l3 * ph * d * w
        ct_prev = l1 * phc * d * w + l2 + l3 * ph * idv * cw
        v_cur = w * d + cw * idv
        if code == 0:
            a11 = e_val - v_cur
            a12 = -ct_prev
            a21 = c_cur
            a22 = 0.0 + 0.0j
        elif code == 1:
            if abs(c_cur) < 1e-12:
                return math.nan, det_res, False
            a11 = (e_val - v_cur) / c_cur
            a12 = -ct_prev / c_cur
            a21 = 1.0 + 0.0j
            a22 = 0.0 + 0.0j
        elif code == 2:
            ct_cur = l1 * ph * d * w + l2 + l3 * phc * idv * cw
            c_prev = l1 * ph * idv * cw + l2 + l3 * phc * d * w
            if abs(c_cur) < 1e-12 or abs(c_prev) < 1e-12:
                return math.nan, det_res, False
            a_cur = cmath.sqrt(c_cur * ct_cur)
            a_prev = cmath.sqrt(c_prev * ct_prev)
            s = cmath.sqrt(a_cur * a_prev)
            a11 = (e_val - v_cur) / s
            a12 = -a_prev / s
            a21 = a_cur / s
            a22 = 0.0 + 0.0j
            dd = a11 * a22 - a12 * a21
            r = abs(dd - 1.0)
            if r > det_res:
                det_res = r
        else:
            if abs(c_cur) < 1e-12:
                return math.nan, det_res, False
            a11 = e_val / c_cur + 0.0j
            a12 = -ct_prev / c_cur
            a21 = 1.0 + 0.0j
            a22 = 0.0 + 0.0j
        if use_conj:
            b11 = conj_m[0, 0] * a11 + conj_m[0, 1] * a21
            b12 = conj_m[0, 0] * a12 + conj_m[0, 1] * a22
            b21 = conj_m[1, 0] * a11 + conj_m[1, 1] * a21
            b22 = conj_m[1, 0] * a12 + conj_m[1, 1] * a22
            a11 = b11 * conj_inv[0, 0] + b12 * conj_inv[1, 0]
            a12 = b11 * conj_inv[0, 1] + b12 * conj_inv[1, 1]
            a21 = b21 * conj_inv[0, 0] + b22 * conj_inv[1, 0]
            a22 = b21 * conj_inv[0, 1] + b22 * conj_inv[1, 1]

        t11 = a11 * m11 + a12 * m21
        t12 = a11 * m12 + a12 * m22
        t21 = a21 * m11 + a22 * m21
        t22 = a21 * m12 + a22 * m22
        m11, m12, m21, m22 = t11, t12, t21, t22

        w *= ua
        if k & 1023 == 1023:
            nrm = 1.0 / abs(w)
            w *= nrm
        if (k + 1) % renorm_every == 0 or k == n_iter - 1:
            s2 = (
                m11.real * m11.real + m11.imag * m11.imag
                + m12.real * m12.real + m12.imag * m12.imag
                + m21.real * m21.real + m21.imag * m21.imag
                + m22.real * m22.real + m22.imag * m22.imag
            )
            sn = math.sqrt(s2)
            if sn > 0.0:
                inv = 1.0 / sn
                m11 *= inv
                m12 *= inv
                m21 *= inv
                m22 *= inv
                vlog = math.log(sn)
            else:
                vlog = -math.inf
            yv = vlog - comp
            tv = acc + yv
            comp = (tv - acc) - yv
            acc = tv
    return acc / n_iter, det_res, True
