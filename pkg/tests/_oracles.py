"""Independent high-precision oracles used to freeze expected values.

Everything here recomputes the encoders/decoders/roots from their defining
recursions in mpmath at >= 50 significant digits, sharing no code with the
package paths under test (plain loops, no Horner tricks, no numpy).
"""

import mpmath as mp

DPS = 60


def _bit_scalar(u, nu, policy_state):
    if nu == 0:
        return -1 if u <= 0 else 1
    if u >= nu:
        return 1
    if u < -nu:
        return -1
    return policy_state.decide()


def beta_bits_mp(x, beta, lam, n_bits, nu=0.0, policy_state=None, scale_first=True):
    """Bits and states of the (leaky) beta recursion at high precision."""
    with mp.workdps(DPS):
        beta = mp.mpf(beta)
        lam = mp.mpf(lam)
        u = beta * mp.mpf(x) if scale_first else mp.mpf(x)
        bits = []
        states = [u]
        for _ in range(n_bits):
            b = _bit_scalar(u, nu, policy_state)
            bits.append(b)
            u = lam * beta * (u - b)
            states.append(u)
        return bits, states


def gre_bits_mp(x, lambda1, lambda2, alpha, n_bits, nu=0.0, policy_state=None):
    """Bits and states of the (leaky) golden-ratio recursion at high precision."""
    with mp.workdps(DPS):
        l1 = mp.mpf(lambda1)
        l2 = mp.mpf(lambda2)
        alpha = mp.mpf(alpha)
        u_prev = mp.mpf(0)
        u_cur = mp.mpf(x)
        bits = []
        states = [u_prev, u_cur]
        for _ in range(n_bits):
            arg = u_prev + alpha * u_cur
            if nu == 0:
                b = 1 if arg >= 0 else -1
            elif arg >= nu:
                b = 1
            elif arg < -nu:
                b = -1
            else:
                b = policy_state.decide()
            bits.append(b)
            u_next = l1 * u_cur + l1 * l2 * u_prev - b
            states.append(u_next)
            u_prev, u_cur = u_cur, u_next
        return bits, states


def partial_sum_mp(bits, gamma, n=None, start_power=1):
    """Naive sum_{j} b_j gamma^(j-1+start_power) at high precision."""
    with mp.workdps(DPS):
        gamma = mp.mpf(gamma)
        if n is None:
            n = len(bits)
        return mp.fsum(
            mp.mpf(int(bits[j])) * gamma ** (j + start_power) for j in range(n)
        )


def poly_eval_naive_mp(coeffs, t):
    """Naive power-sum evaluation (value, derivative)."""
    with mp.workdps(DPS):
        t = mp.mpf(t)
        val = mp.fsum(mp.mpf(int(c)) * t ** j for j, c in enumerate(coeffs))
        der = mp.fsum(
            j * mp.mpf(int(c)) * t ** (j - 1) for j, c in enumerate(coeffs) if j >= 1
        )
        return val, der


def first_root_mp(coeffs, lo=0.0, hi=0.6491, scan=20001):
    """First sign change of the coefficient polynomial on [lo, hi], refined
    by bisection to ~1e-40. Returns None when there is no sign change."""
    with mp.workdps(DPS):
        def f(t):
            return poly_eval_naive_mp(coeffs, t)[0]

        lo = mp.mpf(lo)
        hi = mp.mpf(hi)
        step = (hi - lo) / (scan - 1)
        prev_t, prev_v = lo, f(lo)
        for i in range(1, scan):
            t = lo + i * step
            v = f(t)
            if v == 0:
                return t
            if (prev_v < 0) != (v < 0):
                a, b = prev_t, t
                fa = prev_v
                for _ in range(200):
                    m = (a + b) / 2
                    fm = f(m)
                    if fm == 0:
                        return m
                    if (fa < 0) != (fm < 0):
                        b = m
                    else:
                        a, fa = m, fm
                return (a + b) / 2
            prev_t, prev_v = t, v
        return None
