"""Complete elliptic integrals and the auxiliary Jacobi-function families.

Legendre forms are evaluated through Carlson's symmetric integrals from
:mod:`scipy.special`.  On top of them sit

* ``V_j = int_0^{u1} du / (1 - alpha2 sn^2 u)^j`` at ``u1 = K``;
* ``R_m = int_0^{u1} du / (1 + alpha cn u)^m`` at ``u1 = K`` or ``2K``;

and the quartic-root integrals built from them.
"""

from __future__ import annotations

import math
from math import comb

import numpy as np
from numpy.polynomial import Polynomial
from scipy import special

from .errors import ConditioningError, DegenerateError, InvalidInputError

NEAR_ONE = 1e-10


def _check_modulus(k2: float) -> None:
    if 1.0 - k2 < NEAR_ONE:
        raise ConditioningError(f"k2 too close to 1 ({k2})")


def _check_k2(k2: float) -> None:
    if not k2 < 1:
        raise InvalidInputError(f"k2 must be < 1, got {k2}")
    if k2 < 0:
        raise InvalidInputError(f"k2 must be >= 0, got {k2}")


def ellint_K(k2: float) -> float:
    _check_k2(k2)
    return float(special.elliprf(0.0, 1.0 - k2, 1.0))


def ellint_E(k2: float) -> float:
    _check_k2(k2)
    return float(2.0 * special.elliprg(0.0, 1.0 - k2, 1.0))


def ellint_Pi(alpha2: float, k2: float) -> float:
    """Complete third kind ``int_0^{pi/2} dt / ((1 - alpha2 sin^2 t) sqrt(1 - k2 sin^2 t))``.

    ``alpha2 > 1`` returns the Cauchy principal value.
    """
    _check_k2(k2)
    if alpha2 == 1.0:
        raise DegenerateError("Pi has a pole at alpha2 = 1")
    kp2 = 1.0 - k2
    return float(special.elliprf(0.0, kp2, 1.0)
                 + alpha2 / 3.0 * special.elliprj(0.0, kp2, 1.0, 1.0 - alpha2))


def _int_sn2(k2: float) -> float:
    # int_0^K sn^2 u du = (K - E) / k2, without the cancellation at small k2
    return float(special.elliprd(0.0, 1.0 - k2, 1.0)) / 3.0


def sn_moments(j_max: int, k2: float) -> np.ndarray:
    """``S_j = int_0^K sn^(2j) u du`` for ``j = 0..j_max`` (hypergeometric form)."""
    _check_k2(k2)
    j = np.arange(j_max + 1)
    lead = np.exp(special.gammaln(j + 0.5) - special.gammaln(0.5) - special.gammaln(j + 1))
    return 0.5 * math.pi * lead * special.hyp2f1(0.5, j + 0.5, j + 1.0, k2)


def _sncndn_series(alpha2: float, k2: float) -> float:
    """``int_0^K sn^2 cn^2 dn^2 / (1 - alpha2 sn^2)^4 du`` as a power series in alpha2."""
    n_max = 1
    while comb(n_max + 3, 3) * alpha2**n_max > 1e-18:
        n_max += 1
    S = sn_moments(n_max + 3, k2)
    terms = [comb(n + 3, 3) * alpha2**n * (S[n + 1] - (1 + k2) * S[n + 2] + k2 * S[n + 3])
             for n in range(n_max + 1)]
    return math.fsum(terms)


SERIES_ALPHA2 = 0.25
# largest expansion ratio for the root-centered moment series
CENTERED_RATIO = 0.5
_SERIES_TOL = 1e-18


def cn_sn_moments(j: int, n_max: int, k2: float) -> np.ndarray:
    """``int_0^K cn^(2j) sn^(2n) u du`` for ``n = 0..n_max``."""
    n = np.arange(n_max + 1, dtype=float)
    beta = np.exp(special.gammaln(n + 0.5) + special.gammaln(j + 0.5) - special.gammaln(n + j + 1.0))
    return 0.5 * beta * special.hyp2f1(0.5, n + 0.5, n + j + 1.0, k2)


def _series_length(j: int, x: float) -> int:
    # terms comb(n + j - 1, n) x^n of a negative-binomial expansion
    n = 0
    while comb(n + j - 1, n) * x**n > _SERIES_TOL and n < 400:
        n += 1
    return n


def v_sequence(m_max: int, alpha2: float, k2: float) -> list[float]:
    """``V_0 .. V_m_max`` at complete amplitude.

    ``V_0 = K``, ``V_1 = Pi(alpha2, k)``, ``V_2`` closed form and the
    three-term recursion for the rest.  The ``sn cn dn`` boundary terms vanish
    at ``u = K``.
    """
    if m_max < 0:
        raise InvalidInputError("m_max must be >= 0")
    _check_modulus(k2)
    K = ellint_K(k2)
    if alpha2 == 0.0:
        return [K] * (m_max + 1)
    out = [K]
    if m_max == 0:
        return out
    a2 = alpha2
    Pi = ellint_Pi(a2, k2)
    out.append(Pi)
    if m_max == 1:
        return out
    denom = (a2 - 1.0) * (k2 - a2)
    if abs(a2 - 1.0) < NEAR_ONE or abs(k2 - a2) < NEAR_ONE:
        raise ConditioningError(f"degenerate characteristic alpha2={a2}, k2={k2}")
    E = ellint_E(k2)
    out.append((a2 * E + (k2 - a2) * K
                + (2 * a2 * k2 + 2 * a2 - a2 * a2 - 3 * k2) * Pi) / (2 * denom))
    for m in range(m_max - 2):
        num = ((2 * m + 1) * k2 * out[m]
               + 2 * (m + 1) * (a2 * k2 + a2 - 3 * k2) * out[m + 1]
               + (2 * m + 3) * (a2 * a2 - 2 * a2 * k2 - 2 * a2 + 3 * k2) * out[m + 2])
        out.append(num / (2 * (m + 2) * (1 - a2) * (k2 - a2)))
    return out


def _f1(alpha: float, k2: float) -> float:
    """Closed form at ``u = K`` (``sn = 1``, ``dn = k'``, ``sd = 1/k'``)."""
    kp2 = 1.0 - k2
    a2 = alpha * alpha
    q = k2 + kp2 * a2
    n = a2 / (a2 - 1.0)
    sd = 1.0 / math.sqrt(kp2)
    if n < k2:
        w = math.sqrt((1 - a2) / q)
        return w * math.atan(sd / w)
    if n == k2:
        return sd
    dn, sn = math.sqrt(kp2), 1.0
    rq, ra = math.sqrt(q), math.sqrt(a2 - 1)
    return 0.5 * math.sqrt((a2 - 1) / q) * math.log((rq * dn + ra * sn) / (rq * dn - ra * sn))


def r_sequence(m_max: int, alpha: float, k2: float, periods: int = 1) -> dict[int, float]:
    """``R_{-2} .. R_m_max`` integrated from 0 to ``periods * K``.

    ``periods=2`` is the full half-period used by the complex-root
    substitution, where ``cn`` runs from 1 to -1.
    """
    if periods not in (1, 2):
        raise InvalidInputError("periods must be 1 or 2")
    _check_modulus(k2)
    if abs(abs(alpha) - 1.0) < NEAR_ONE:
        raise ConditioningError(f"|alpha| = 1 makes R_m singular (alpha={alpha})")
    K = ellint_K(k2)
    kp2 = 1.0 - k2
    u = periods * K
    if periods == 2:
        sn, cn, dn = 0.0, -1.0, 1.0
        int_cn = 0.0
    else:
        sn, cn, dn = 1.0, 0.0, math.sqrt(kp2)
        k = math.sqrt(k2)
        int_cn = math.asin(k) / k if k > 0 else 1.0
    int_cn2 = periods * (K - _int_sn2(k2))
    R = {0: u, -1: u + alpha * int_cn, -2: u + 2 * alpha * int_cn + alpha * alpha * int_cn2}
    if alpha == 0.0:
        for m in range(1, m_max + 1):
            R[m] = u
        return R
    a2 = alpha * alpha
    Pi = periods * ellint_Pi(a2 / (a2 - 1.0), k2)
    f1 = 0.0 if periods == 2 else _f1(alpha, k2)
    if m_max >= 1:
        R[1] = (Pi - alpha * f1) / (1.0 - a2)
    # d/du [sn dn / w^(m-1)] with w = 1 + alpha cn, written as a polynomial in w
    cn_w = Polynomial([-1.0, 1.0]) / alpha
    w = Polynomial([0.0, 1.0])
    base = cn_w * (1 - 2 * k2 + 2 * k2 * cn_w**2) * w
    quartic = alpha * (1 - cn_w**2) * (kp2 + k2 * cn_w**2)
    for m in range(2, m_max + 1):
        coef = (base + (m - 1) * quartic).coef
        boundary = sn * dn / (1 + alpha * cn) ** (m - 1)
        acc = sum(coef[j] * R[m - j] for j in range(1, len(coef)))
        R[m] = (boundary - acc) / coef[0]
    return R


def _recenter(moments: list[float], center: float) -> list[float]:
    """Raw moments ``int t^m`` from moments about ``center``."""
    return [math.fsum(comb(m, j) * center ** (m - j) * moments[j] for j in range(m + 1))
            for m in range(len(moments))]


class Quartic:
    """``P(t) = -(t - r1)(t - r2)(t - r3)(t - r4)`` with an integration
    interval between two adjacent real roots on which ``P > 0``.

    Real case: roots ``a > b > c > d``; the interval is ``[b, a]`` (top) or
    ``[d, c]`` (bottom, handled by reflecting ``t -> -t``).
    Complex case: ``a > b`` real, ``c, conj(c)``; interval ``[b, a]``.
    """

    def __init__(self, roots, lower: float, upper: float):
        roots = [complex(r) for r in roots]
        if len(roots) != 4:
            raise InvalidInputError("a quartic has four roots")
        self.lower, self.upper = float(lower), float(upper)
        real = [r.real for r in roots if abs(r.imag) == 0.0]
        self.is_real = len(real) == 4
        if self.is_real:
            a, b, c, d = sorted(real, reverse=True)
            if math.isclose(lower, b) and math.isclose(upper, a):
                self.reflected = False
            elif math.isclose(lower, d) and math.isclose(upper, c):
                self.reflected = True
                a, b, c, d = -d, -c, -b, -a
            else:
                raise InvalidInputError("interval must span two adjacent outer roots")
            if not a > b > c > d:
                raise ConditioningError("coincident quartic roots")
            self.a, self.b, self.c, self.d = a, b, c, d
        else:
            if len(real) != 2:
                raise InvalidInputError("need two real roots and a complex pair")
            a, b = max(real), min(real)
            cplx = [r for r in roots if r.imag != 0.0]
            if not math.isclose(lower, b) or not math.isclose(upper, a):
                raise InvalidInputError("interval must be the real-root pair")
            if not a > b:
                raise ConditioningError("coincident real roots")
            self.a, self.b = a, b
            self.b1 = cplx[0].real
            self.a1 = abs(cplx[0].imag)
            self.reflected = False

    # -- real-root machinery ---------------------------------------------

    def _real_params(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        k2 = (a - b) * (c - d) / ((a - c) * (b - d))
        g = 2.0 / math.sqrt((a - c) * (b - d))
        if 1.0 - k2 < NEAR_ONE:
            raise ConditioningError(f"k2 too close to 1 ({k2})")
        return k2, g

    def _real_power(self, m_max: int) -> list[float]:
        centered = self._real_centered(m_max)
        if centered is not None:
            return _recenter(centered, self.b)
        a, b, d = self.a, self.b, self.d
        k2, g = self._real_params()
        alpha2 = (b - a) / (b - d)
        V = v_sequence(m_max, alpha2, k2)
        # t = d + (a - d) / (1 - alpha2 sn^2)
        return [g * sum(comb(m, j) * d ** (m - j) * (a - d) ** j * V[j] for j in range(m + 1))
                for m in range(m_max + 1)]

    def _real_centered(self, m_max: int) -> list[float] | None:
        """``int (t - b)^j / sqrt(P)`` by series when ``[b, a]`` is short.

        With ``t - b = (a - b) cn^2 / (1 + x sn^2)``, ``x = (a - b)/(b - d)``,
        every term carries the small width explicitly, so nothing cancels.
        """
        a, b, d = self.a, self.b, self.d
        x = (a - b) / (b - d)
        if x > CENTERED_RATIO:
            return None
        k2, g = self._real_params()
        out = [g * ellint_K(k2)]
        for j in range(1, m_max + 1):
            n_max = _series_length(j, x)
            S = cn_sn_moments(j, n_max, k2)
            terms = [comb(n + j - 1, n) * (-x) ** n * S[n] for n in range(n_max + 1)]
            out.append(g * (a - b) ** j * math.fsum(terms))
        return out

    def _real_pole(self, p: float) -> float:
        a, b, d = self.a, self.b, self.d
        if abs(p - a) < NEAR_ONE * (1 + abs(a)) or abs(p - d) < NEAR_ONE * (1 + abs(d)):
            raise ConditioningError("pole at an integration root")
        k2, g = self._real_params()
        alpha2 = (b - a) / (b - d)
        alpha12 = alpha2 * (p - d) / (p - a)
        if abs(alpha12 - 1.0) < NEAR_ONE:
            raise ConditioningError("pole characteristic at 1")
        # (1 - alpha2 sn^2) / (1 - alpha12 sn^2) expanded over V_0, V_1 (m=1),
        # regrouped with Pi - K = alpha12 RJ / 3 so K never cancels against Pi
        _check_k2(k2)
        kp2 = 1.0 - k2
        K = float(special.elliprf(0.0, kp2, 1.0))
        rj = float(special.elliprj(0.0, kp2, 1.0, 1.0 - alpha12))
        return g / (p - a) * (K + (a - d) * alpha2 / (p - a) * rj / 3.0)

    def real_sqrt_integral(self) -> float:
        """``int sqrt(P) dt`` over the interval, through the ``V`` family."""
        return self._real_sqrt_parts()[0]

    def _real_sqrt_parts(self) -> tuple[float, float]:
        a, b, c, d = self.a, self.b, self.c, self.d
        k2, _ = self._real_params()
        g = 2.0 / math.sqrt((a - c) * (b - d))
        al2 = (a - b) / (a - c)
        if al2 < SERIES_ALPHA2:
            # the V-combination below loses ~1/alpha2^2 digits here
            pre = (b - c) ** 2 * (a - b) * (b - d) * al2 * g
            val = pre * _sncndn_series(al2, k2)
            return val, abs(val)
        V = v_sequence(4, al2, k2)
        terms = (-k2 * V[1], (3 * k2 - al2 * k2 - al2) * V[2],
                 (2 * al2 * k2 + 2 * al2 - 3 * k2 - al2 * al2) * V[3],
                 (al2 - 1) * (al2 - k2) * V[4])
        pre = (b - c) ** 2 * (a - b) * (b - d) * g / al2**2
        return pre * math.fsum(terms), abs(pre) * sum(map(abs, terms))

    # -- complex-pair machinery -------------------------------------------

    def _cplx_params(self):
        a, b, b1, a1 = self.a, self.b, self.b1, self.a1
        A = math.hypot(a - b1, a1)
        B = math.hypot(b - b1, a1)
        g = 1.0 / math.sqrt(A * B)
        k2 = ((a - b) ** 2 - (A - B) ** 2) / (4 * A * B)
        if 1.0 - k2 < NEAR_ONE:
            raise ConditioningError(f"k2 too close to 1 ({k2})")
        return A, B, g, max(k2, 0.0)

    def _cplx_centered(self, m_max: int) -> list[float] | None:
        """Root-centered moments for the complex pair when ``A ~ B``.

        ``t - b = h (1 - cn) / (1 + alpha cn)`` with ``h = (a - b) B / (A + B)``,
        expanded in powers of ``alpha`` over ``int_0^{2K} cn^q du``.
        """
        a, b = self.a, self.b
        A, B, g, k2 = self._cplx_params()
        alpha = (A - B) / (A + B)
        if abs(alpha) > CENTERED_RATIO:
            return None
        h = (a - b) * B / (A + B)
        n_max = _series_length(m_max, abs(alpha))
        q_max = n_max + m_max
        # int_0^{2K} cn^q du: zero for odd q, twice the quarter period otherwise
        C = np.zeros(q_max + 1)
        C[0::2] = 2.0 * np.array(
            [cn_sn_moments(l, 0, k2)[0] for l in range(q_max // 2 + 1)])
        out = [g * C[0]]
        for j in range(1, m_max + 1):
            # int (1 - cn)^j cn^n du for every n
            base = [math.fsum(comb(j, i) * (-1) ** i * C[n + i] for i in range(j + 1))
                    for n in range(_series_length(j, abs(alpha)) + 1)]
            terms = [comb(n + j - 1, n) * (-alpha) ** n * base[n] for n in range(len(base))]
            out.append(g * h**j * math.fsum(terms))
        return out

    def _cplx_power(self, m_max: int) -> list[float]:
        centered = self._cplx_centered(m_max)
        if centered is not None:
            return _recenter(centered, self.b)
        a, b = self.a, self.b
        A, B, g, k2 = self._cplx_params()
        alpha = (A - B) / (A + B)
        if abs(alpha) < 1e-6:
            raise ConditioningError("A ~ B: complex-pair expansion degenerates")
        R = r_sequence(m_max, alpha, k2, periods=2)
        # t = (P0 + Q0 cn) / (1 + alpha cn) = shift + step / (1 + alpha cn);
        # the same sum as the textbook form without dividing by aB + bA
        P0 = (a * B + b * A) / (A + B)
        shift = (b * A - a * B) / (A - B)
        step = P0 - shift
        return [g * sum(comb(m, j) * shift ** (m - j) * step**j * R[j] for j in range(m + 1))
                for m in range(m_max + 1)]

    def _cplx_pole(self, p: float) -> float:
        a, b = self.a, self.b
        A, B, g, k2 = self._cplx_params()
        N0 = a * B + b * A - p * (A + B)
        N1 = A * (b - p) - B * (a - p)
        if N0 == 0:
            raise ConditioningError("pole at an integration root")
        alpha = N1 / N0
        if abs(alpha) < 1e-6:
            raise ConditioningError("complex-pair sqrt expansion degenerates")
        alpha1 = (A - B) / (A + B)
        R = r_sequence(1, alpha, k2, periods=2)
        # int dt / ((t - p) sqrt P)
        return g * (A + B) / N1 * (alpha1 * R[0] + (alpha - alpha1) * R[1])

    # -- public ---------------------------------------------------------

    def power_integrals(self, m_max: int = 4) -> list[float]:
        """``I_m = int t^m / sqrt(P) dt`` for ``m = 0..m_max``."""
        if self.is_real:
            vals = self._real_power(m_max)
            if self.reflected:
                vals = [(-1) ** m * v for m, v in enumerate(vals)]
            return vals
        return self._cplx_power(m_max)

    def pole_integral(self, p: float) -> float:
        """``J(p) = int dt / ((p - t) sqrt(P))`` for ``p`` outside the interval."""
        if self.lower - 1e-12 <= p <= self.upper + 1e-12:
            raise ConditioningError("pole inside the integration interval")
        if self.is_real:
            if self.reflected:
                # t = -s: 1/(p - t) = -1/((-p) - s)
                return -self._real_pole(-p)
            return self._real_pole(p)
        return -self._cplx_pole(p)

    def moments(self, m_max: int = 4) -> tuple[float, list[float]]:
        """``(center, [int (t - center)^j / sqrt(P) dt])``.

        The center is the interval root the series expansions start from;
        when no series applies it is ``0`` and these are the raw moments.
        """
        if self.is_real:
            cen = self._real_centered(m_max)
            if cen is not None:
                if self.reflected:
                    return -self.b, [(-1) ** j * v for j, v in enumerate(cen)]
                return self.b, cen
        else:
            cen = self._cplx_centered(m_max)
            if cen is not None:
                return self.b, cen
        return 0.0, self.power_integrals(m_max)

    def sqrt_integral(self) -> float:
        """``int sqrt(P) dt``; the ``V`` family when real, otherwise ``int P / sqrt(P)``."""
        return self.sqrt_integral_parts()[0]

    def sqrt_integral_parts(self) -> tuple[float, float]:
        """``(value, scale)`` where ``scale`` sums the magnitudes that cancel."""
        if self.is_real:
            try:
                return self._real_sqrt_parts()
            except ConditioningError:
                pass
        center, M = self.moments(4)
        coef = self.polynomial(center).coef
        terms = [coef[m] * M[m] for m in range(5)]
        return math.fsum(terms), sum(map(abs, terms))

    def polynomial(self, center: float = 0.0) -> Polynomial:
        """``P`` as a polynomial in ``t - center``, built from the shifted roots."""
        roots = [complex(self.a), complex(self.b)]
        if self.is_real:
            roots += [complex(self.c), complex(self.d)]
            if self.reflected:
                roots = [-r for r in roots]
        else:
            roots += [complex(self.b1, self.a1), complex(self.b1, -self.a1)]
        roots = [r - center for r in roots]
        return Polynomial(-np.real(np.polynomial.polynomial.polyfromroots(roots)))
