"""Reconstruction of the transfer function from the power spectrum.

For a vacuum-basis SISO system the power spectrum has three independent
rational components

    phi11 = xi_minus(s) xi_minus(-s#)#
    phi12 = xi_minus(s) xi_plus(-s)
    phi22 = xi_plus(s#)#  xi_plus(-s).

Stability assigns every pole unambiguously; zeros are recovered by a
set-difference argument for complex locations and a counting argument for
real ones, after reinstating the fictitious zeros that cancelled against
shared poles.  The reconstruction fails exactly on spectra whose generating
system hides a passive all-pass factor (a pole/zero pattern pairing
(s + lam#)/(s - lam) in xi_minus with (s + lam)/(s - lam#) in xi_plus).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .doubled import DEFAULT_TOL
from .errors import (IllConditioned, Inconsistent, NotGloballyMinimal,
                     ShapeMismatch, SingularInput)
from .rational import RationalFn, count_at, multiset_difference
from .stationary import PowerSpectrumSISO
from .systems import QlsSystem
from .transfer import TransferFunctionSISO, tf_rational

MATCH_TOL = 1e-7


@dataclass(frozen=True)
class ZeroAssignment:
    """Bookkeeping of the real-zero counting argument at one location."""

    location: float
    n_at: int
    m_at: int
    p: int
    q: int

    def __post_init__(self):
        if not (self.location > 0):
            raise ValueError("counting locations are strictly positive")
        if (self.n_at - self.p) % 2 or (self.m_at - self.q) % 2:
            raise ValueError("parity constraints violated")
        if self.p != self.n_at and self.q != self.m_at:
            raise ValueError("either p = n or q = m must hold")


@dataclass(frozen=True)
class EntangledSpectrumBlocks:
    """The (2,1) and (1,4) power-spectrum entries of the two-channel
    entangled-input configuration, plus the input correlations they carry."""

    block21: RationalFn
    block14: RationalFn
    N2: complex
    M2: complex


def spectrum_components(sys: QlsSystem,
                        tol: float = DEFAULT_TOL) -> PowerSpectrumSISO:
    """Exact spectral components of a vacuum-driven SISO system."""
    if sys.n_channels != 1:
        raise ShapeMismatch("spectral components are defined for one channel")
    return components_of(tf_rational(sys, tol))


def components_of(tf: TransferFunctionSISO) -> PowerSpectrumSISO:
    """Assemble (phi11, phi12, phi22) from a transfer function pair."""
    xm, xp = tf.xi_minus, tf.xi_plus
    return PowerSpectrumSISO(xm * xm.reflect_conj(),
                             xm * xp.reflect_neg(),
                             xp.conj_arg() * xp.reflect_neg())


def has_hidden_passive_factor(tf: TransferFunctionSISO,
                              tol: float = MATCH_TOL) -> bool:
    """Detect the pole/zero pattern that hides a mode from the spectrum.

    True iff some lam is a pole of xi_minus with zero -lam# while lam# is a
    pole of xi_plus with zero -lam; such a factor pair leaves the power
    spectrum of the remaining modes unchanged.
    """
    xm, xp = tf.xi_minus, tf.xi_plus
    if xp.is_zero:
        return False
    for lam in xm.poles:
        if (count_at(xm.zeros, -np.conj(lam), tol)
                and count_at(xp.poles, np.conj(lam), tol)
                and count_at(xp.zeros, -lam, tol)):
            return True
    return False


def real_zero_counts(n_at: int, m_at: int, red_plus: int,
                     red_minus: int) -> tuple[int, int]:
    """Solve the counting constraints at a real location lam > 0.

    n_at / m_at are the zero multiplicities of phi11 / phi22 at +lam;
    red_plus / red_minus those of phi12 at +lam / -lam.  The unique (p, q)
    satisfies p = n_at or q = m_at, q - p = red_minus - red_plus, and the
    parity/positivity constraints.
    """
    if red_plus + red_minus != n_at + m_at:
        raise Inconsistent(
            f"red zero total {red_plus + red_minus} != n + m = {n_at + m_at}")
    d = red_minus - red_plus

    def valid(p, q):
        return (0 <= p <= n_at and 0 <= q <= m_at
                and (n_at - p) % 2 == 0 and (m_at - q) % 2 == 0)

    candidates = set()
    if valid(n_at, n_at + d):
        candidates.add((n_at, n_at + d))
    if valid(m_at - d, m_at):
        candidates.add((m_at - d, m_at))
    if not candidates:
        raise Inconsistent(
            f"no (p, q) with n={n_at}, m={m_at}, q-p={d}")
    if len(candidates) > 1:
        raise Inconsistent(
            f"ambiguous (p, q) candidates {sorted(candidates)}")
    return candidates.pop()


def _lhp(values) -> list:
    return [v for v in np.asarray(values, dtype=complex) if v.real < 0]


def _rhp(values) -> list:
    return [v for v in np.asarray(values, dtype=complex) if v.real > 0]


def _merge_max_multiplicity(a, b, tol: float) -> list:
    """Multiset union where each location takes its larger multiplicity."""
    a = list(np.asarray(a, dtype=complex))
    out = list(a)
    extra = multiset_difference(b, a, tol)
    out.extend(extra)
    return out


def _conjugation_closed(values, tol: float) -> bool:
    values = np.asarray(values, dtype=complex)
    rest = list(values)
    while rest:
        v = rest.pop()
        if abs(v.imag) <= tol * max(1.0, abs(v)):
            continue
        hit = None
        for i, w in enumerate(rest):
            if abs(w - np.conj(v)) <= tol * max(1.0, abs(v)):
                hit = i
                break
        if hit is None:
            return False
        rest.pop(hit)
    return True


def _split_real_complex(values, tol: float) -> tuple[list, list]:
    reals, cplx = [], []
    for v in np.asarray(values, dtype=complex):
        if abs(v.imag) <= tol * max(1.0, abs(v)):
            reals.append(float(v.real))
        else:
            cplx.append(complex(v))
    return reals, cplx


def _assign_real_zeros(blue_r, red_r, yellow_r,
                       tol: float) -> tuple[list, list, list]:
    """Counting argument per positive real location; returns the real zeros
    of xi_minus and xi_plus plus the ZeroAssignment records."""
    z_minus, z_plus, records = [], [], []
    # zeros at the origin are their own negation: even multiplicities split
    n0 = sum(1 for v in blue_r if abs(v) <= tol)
    m0 = sum(1 for v in yellow_r if abs(v) <= tol)
    r0 = sum(1 for v in red_r if abs(v) <= tol)
    if n0 or m0 or r0:
        if n0 % 2 or m0 % 2 or r0 != n0 // 2 + m0 // 2:
            raise Inconsistent(
                f"origin zero counts ({n0}, {m0}, {r0}) are inconsistent")
        z_minus.extend([0.0] * (n0 // 2))
        z_plus.extend([0.0] * (m0 // 2))
    locations = []
    for v in blue_r + red_r + yellow_r:
        lam = abs(v)
        if lam <= tol:
            continue
        if not any(abs(lam - u) <= tol * max(1.0, u) for u in locations):
            locations.append(lam)
    for lam in sorted(locations):
        ltol = tol * max(1.0, lam)
        n_at = sum(1 for v in blue_r if abs(v - lam) <= ltol)
        n_neg = sum(1 for v in blue_r if abs(v + lam) <= ltol)
        m_at = sum(1 for v in yellow_r if abs(v - lam) <= ltol)
        m_neg = sum(1 for v in yellow_r if abs(v + lam) <= ltol)
        if n_at != n_neg or m_at != m_neg:
            raise Inconsistent(
                f"phi11/phi22 real zeros unbalanced at +-{lam:.6g}")
        r_plus = sum(1 for v in red_r if abs(v - lam) <= ltol)
        r_minus = sum(1 for v in red_r if abs(v + lam) <= ltol)
        p, q = real_zero_counts(n_at, m_at, r_plus, r_minus)
        records.append(ZeroAssignment(lam, n_at, m_at, p, q))
        z_minus.extend([lam] * ((n_at + p) // 2) + [-lam] * ((n_at - p) // 2))
        z_plus.extend([lam] * ((m_at + q) // 2) + [-lam] * ((m_at - q) // 2))
    return z_minus, z_plus, records


def _assign_complex_zeros(blue_c, red_c, yellow_c,
                          tol: float) -> tuple[list, list]:
    """Set-difference assignment of complex zeros, with a fallback for the
    degenerate case of a full quadruple common to every component."""
    z_minus = [-np.conj(z) for z in multiset_difference(blue_c, red_c, tol)]
    z_plus = [-w for w in multiset_difference(red_c, blue_c, tol)]

    def residual(zm, zp):
        blue_pred = list(zm) + [-np.conj(z) for z in zm]
        red_pred = list(zm) + [-z for z in zp]
        yellow_pred = [np.conj(z) for z in zp] + [-z for z in zp]
        return (multiset_difference(blue_c, blue_pred, tol)
                + multiset_difference(blue_pred, blue_c, tol),
                multiset_difference(red_c, red_pred, tol)
                + multiset_difference(red_pred, red_c, tol),
                multiset_difference(yellow_c, yellow_pred, tol)
                + multiset_difference(yellow_pred, yellow_c, tol))

    rb, rr, ry = residual(z_minus, z_plus)
    if not (rb or rr or ry):
        return z_minus, z_plus

    # Degenerate leftovers can only be quadruples {v, -v, v#, -v#} common to
    # all three components; assign the (+Re, +Im) corner pair to xi_minus
    # and its conjugates to xi_plus.
    leftover = multiset_difference(
        blue_c, list(z_minus) + [-np.conj(z) for z in z_minus], tol)
    progress = True
    while leftover and progress:
        progress = False
        v = max(leftover, key=lambda z: (abs(z.real), abs(z.imag)))
        v = complex(abs(v.real) + 1j * abs(v.imag))
        quad = [v, -v, np.conj(v), -np.conj(v)]
        if all(any(abs(u - w) <= tol * max(1.0, abs(u)) for w in leftover)
               for u in quad):
            z_minus.extend([v, -v])
            z_plus.extend([np.conj(v), -np.conj(v)])
            leftover = multiset_difference(leftover, quad, tol)
            progress = True
    rb, rr, ry = residual(z_minus, z_plus)
    if rb or rr or ry:
        raise Inconsistent(
            f"complex zero assignment leaves residuals {rb}, {rr}, {ry}")
    return z_minus, z_plus


def _recover_plus_gain(ps: PowerSpectrumSISO, xi_minus: RationalFn,
                       unit_plus: RationalFn) -> complex:
    """Gain of xi_plus from phi12 at well-conditioned probe points."""
    unit_reflected = unit_plus.reflect_neg()
    best, best_score = None, -1.0
    estimates = []
    for w in np.logspace(-2, 2, 41):
        s0 = -1j * w
        denom = complex(xi_minus(s0)) * complex(unit_reflected(s0))
        if not np.isfinite(denom) or abs(denom) < 1e-9:
            continue
        val = complex(ps.phi12(s0)) / denom
        if not np.isfinite(val):
            continue
        estimates.append(val)
        if abs(denom) > best_score:
            best, best_score = val, abs(denom)
    if best is None:
        raise Inconsistent("no well-conditioned probe for the gain")
    spread = max(abs(e - best) for e in estimates)
    if spread > 1e-5 * max(1.0, abs(best)):
        raise Inconsistent(f"gain estimates disagree by {spread:.3e}")
    return best


def reconstruct_tf(ps: PowerSpectrumSISO,
                   tol: float = MATCH_TOL) -> TransferFunctionSISO:
    """Rebuild (xi_minus, xi_plus) from the three spectral components.

    Valid for spectra generated by globally minimal cascade-realizable
    systems in the vacuum basis; spectra of reducible systems yield the
    lower-dimensional transfer function with the same spectrum, or raise
    NotGloballyMinimal/Inconsistent when the bookkeeping fails.
    """
    if ps.phi12.is_zero != ps.phi22.is_zero:
        raise Inconsistent("phi12 and phi22 must vanish together")
    if ps.is_trivial:
        return TransferFunctionSISO.trivial()

    if ps.phi12.is_zero:
        # All-pass branch: |xi_minus| = 1 on the axis forces phi11 = 1.
        raise Inconsistent(
            "phi12 = phi22 = 0 with nontrivial phi11 is not a vacuum spectrum")

    p_minus = _merge_max_multiplicity(_lhp(ps.phi11.poles),
                                      _lhp(ps.phi12.poles), tol)
    p_plus = _merge_max_multiplicity(
        [np.conj(v) for v in _lhp(ps.phi22.poles)],
        [-v for v in _rhp(ps.phi12.poles)], tol)
    pole_set = _merge_max_multiplicity(p_minus, p_plus, tol)
    if not _conjugation_closed(pole_set, tol):
        raise Inconsistent("recovered pole set is not conjugation closed")
    d_minus = multiset_difference(pole_set, p_minus, tol)
    d_plus = multiset_difference(pole_set, p_plus, tol)

    blue_z = list(ps.phi11.zeros) + d_minus + [-np.conj(v) for v in d_minus]
    red_z = list(ps.phi12.zeros) + d_minus + [-v for v in d_plus]
    yellow_z = list(ps.phi22.zeros) + [np.conj(v) for v in d_plus] \
        + [-v for v in d_plus]

    blue_r, blue_c = _split_real_complex(blue_z, tol)
    red_r, red_c = _split_real_complex(red_z, tol)
    yellow_r, yellow_c = _split_real_complex(yellow_z, tol)

    zm_real, zp_real, _ = _assign_real_zeros(blue_r, red_r, yellow_r, tol)
    zm_cplx, zp_cplx = _assign_complex_zeros(blue_c, red_c, yellow_c, tol)
    z_minus = list(zm_real) + list(zm_cplx)
    z_plus = list(zp_real) + list(zp_cplx)

    if len(z_minus) != len(pole_set):
        raise Inconsistent(
            f"xi_minus needs {len(pole_set)} zeros, found {len(z_minus)}")
    if len(z_plus) % 2 or len(z_plus) >= len(pole_set):
        raise Inconsistent(
            f"xi_plus zero count {len(z_plus)} inconsistent with "
            f"{len(pole_set)} poles")

    xi_minus = RationalFn(z_minus, pole_set, 1.0)
    unit_plus = RationalFn(z_plus, pole_set, 1.0)
    gain = _recover_plus_gain(ps, xi_minus, unit_plus)
    xi_plus = RationalFn(z_plus, pole_set, gain)
    result = TransferFunctionSISO(xi_minus, xi_plus)

    if has_hidden_passive_factor(result, tol):
        raise NotGloballyMinimal(
            "assignment forces a hidden passive factor")
    check = components_of(result)
    for w in np.logspace(-2, 2, 25):
        s0 = -1j * w
        got = check.matrix_at(s0)
        want = ps.matrix_at(s0)
        if not (np.all(np.isfinite(got)) and np.all(np.isfinite(want))):
            continue
        scale = max(1.0, np.abs(want).max())
        if np.abs(got - want).max() > 1e-6 * scale:
            raise Inconsistent(
                f"reconstructed spectrum deviates by "
                f"{np.abs(got - want).max():.3e} at w = {w:.3g}")
    return result


def entangled_spectrum_blocks(tf: TransferFunctionSISO, n2: complex,
                              m2: complex) -> EntangledSpectrumBlocks:
    """The two informative power-spectrum entries of the entangled setup.

    With the system on channel 1, an ancilla passthrough on channel 2 and
    input correlations (N2, M2) between the channels, the (2,1) entry is
    N2 xi_minus(-s#)# + M2 xi_plus(-s#)# and the (1,4) entry is
    M2 xi_minus(s) + N2 xi_plus(s).
    """
    rc_minus = tf.xi_minus.reflect_conj()
    rc_plus = tf.xi_plus.reflect_conj()
    b21 = complex(n2) * rc_minus + complex(m2) * rc_plus
    b14 = complex(m2) * tf.xi_minus + complex(n2) * tf.xi_plus
    return EntangledSpectrumBlocks(b21, b14, complex(n2), complex(m2))


def entangled_identify(blocks: EntangledSpectrumBlocks,
                       tol: float = DEFAULT_TOL) -> TransferFunctionSISO:
    """Solve the 2x2 linear system for (xi_minus, xi_plus).

    Works for any minimal system; no global minimality is needed.  Raises
    SingularInput when |N2| = |M2| within tolerance.
    """
    n2, m2 = blocks.N2, blocks.M2
    det = abs(n2) ** 2 - abs(m2) ** 2
    if abs(det) <= max(tol, 1e-10) * max(abs(n2) ** 2, abs(m2) ** 2, 1.0):
        raise SingularInput(f"|N2|^2 - |M2|^2 = {det:.3e} is singular")
    lhs1 = blocks.block21.reflect_conj()   # = N2# xi_minus + M2# xi_plus
    lhs2 = blocks.block14
    xi_minus = (n2 * lhs1) - (np.conj(m2) * lhs2)
    xi_minus = RationalFn(xi_minus.zeros, xi_minus.poles, xi_minus.gain / det)
    xi_plus = ((-m2) * lhs1) + (np.conj(n2) * lhs2)
    xi_plus = RationalFn(xi_plus.zeros, xi_plus.poles, xi_plus.gain / det)
    if abs(xi_minus.gain - 1.0) > 1e-6:
        raise Inconsistent(
            f"recovered xi_minus gain {xi_minus.gain} is not monic")
    xi_minus = RationalFn(xi_minus.zeros, xi_minus.poles, 1.0)
    return TransferFunctionSISO(xi_minus, xi_plus)


def fit_rational_from_samples(samples, degree_bound: int,
                              n_iter: int = 25) -> RationalFn:
    """Rational fit of frequency-response samples by pole relocation.

    samples are (omega, value) pairs of a rational function evaluated at
    s = -i omega; degree_bound bounds both numerator and denominator
    degrees.  A barycentric (vector-fitting style) least-squares problem is
    solved repeatedly: residues of f(s) sigma(s) and of the scaling function
    sigma(s) share a pole set, and the zeros of sigma become the relocated
    poles.  Complex data is fitted directly, with no conjugacy constraint,
    since the spectral components have genuinely complex coefficients.
    """
    pts = [(float(w), complex(v)) for w, v in samples]
    need = 2 * (2 * degree_bound + 1)
    if len(pts) < need:
        raise ValueError(
            f"need at least {need} samples for degree {degree_bound}")
    s = np.array([-1j * w for w, _ in pts])
    f = np.array([v for _, v in pts])
    n = degree_bound
    if n == 0:
        return RationalFn.const(f.mean())

    wmax = np.abs(s).max()
    wmin = max(np.abs(s).min(), 1e-3 * wmax)
    betas = np.logspace(np.log10(wmin), np.log10(wmax), (n + 1) // 2)
    init = []
    for b in betas:
        init.extend([(-0.01 - 1j) * b, (-0.01 + 1j) * b])
    poles = np.array(init[:n])

    def cauchy(p):
        return 1.0 / (s[:, None] - p[None, :])

    def fixed_pole_fit(p):
        lhs = np.hstack([cauchy(p), np.ones((len(s), 1))])
        sol, _, _, _ = np.linalg.lstsq(lhs, f, rcond=None)
        if not np.all(np.isfinite(sol)):
            raise IllConditioned("residue fit produced non-finite data")
        return sol, float(np.linalg.norm(lhs @ sol - f))

    best_poles, best_resid = poles, np.inf
    for _ in range(n_iter):
        _, resid = fixed_pole_fit(poles)
        if resid < best_resid:
            best_poles, best_resid = poles.copy(), resid
        cm = cauchy(poles)
        lhs = np.hstack([cm, np.ones((len(s), 1)), -f[:, None] * cm])
        sol, _, _, _ = np.linalg.lstsq(lhs, f, rcond=None)
        if not np.all(np.isfinite(sol)):
            raise IllConditioned("pole-relocation step produced non-finite data")
        sigma_res = sol[n + 1:]
        if np.abs(sigma_res).max() < 1e-12:
            break   # sigma = 1: poles have converged
        # zeros of sigma(s) = 1 + sum res_i/(s - a_i)
        new_poles = np.linalg.eigvals(np.diag(poles)
                                      - np.outer(np.ones(n), sigma_res))
        if not np.all(np.isfinite(new_poles)):
            raise IllConditioned("relocated poles are not finite")
        if np.abs(new_poles - poles).max() < 1e-12 * max(1.0, wmax):
            poles = new_poles
            break
        poles = new_poles

    _, resid = fixed_pole_fit(poles)
    if resid > best_resid:
        poles = best_poles   # noisy relocation can oscillate; keep the best
    sol, _ = fixed_pole_fit(poles)
    res, d = sol[:n], sol[n]

    # drop poles whose residues are negligible (over-modelled fit)
    scale = max(np.abs(f).max(), 1.0)
    keep = np.abs(res) > 1e-9 * scale * max(np.abs(poles).max(), 1.0)
    res, poles = res[keep], poles[keep]
    n_eff = len(poles)
    if n_eff == 0:
        return RationalFn.const(d)
    if abs(d) > 1e-9 * scale:
        zeros = np.linalg.eigvals(np.diag(poles)
                                  - np.outer(np.ones(n_eff), res) / d)
        return RationalFn(zeros, poles, d)
    num = np.zeros(n_eff, dtype=complex)
    for i in range(n_eff):
        num = np.polyadd(num, res[i] * np.poly(np.delete(poles, i)))
    return RationalFn.from_poly(num, np.poly(poles))
