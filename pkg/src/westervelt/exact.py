"""Exact solutions of the undamped Westervelt equation.

Solutions ``v*(t*, x*)`` of the linear wave equation are mapped back through
the linearizing contact transformation: solve

    psi*_{t*}(Psi1, Psi2) = -t,   psi*_{x*}(Psi1, Psi2) = -x

for ``(Psi1, Psi2)``; then ``p = Psi1`` and
``v = t Psi1 + x Psi2 + psi*(Psi1, Psi2)``.  Implicit equations are solved by
a safeguarded Newton iteration.  Finite group transformations act on any
solution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

__all__ = [
    "ExactSolution", "NewtonProblem", "NewtonError", "DomainError",
    "safeguarded_newton", "PsiStar", "invert_contact",
    "make_deg2", "make_deg3", "make_deg4", "make_similarity", "psi0",
    "group_transform", "fd_residual", "fd_residual_orders", "make_family",
    "FAMILIES",
]

_EPS = np.finfo(float).eps


class NewtonError(ArithmeticError):
    """Newton iteration failed to converge or no bracket was found."""


class DomainError(ValueError):
    """Evaluation point outside the domain of validity of a solution."""


# ---------------------------------------------------------------------------
# Newton


def safeguarded_newton(f: Callable[[float], float], df: Callable[[float], float],
                       x0: float, lo: float = -math.inf, hi: float = math.inf,
                       tol: float = 1e-12, maxit: int = 50,
                       step0: Optional[float] = None) -> float:
    """Root of ``f`` near ``x0`` inside the open interval ``(lo, hi)``.

    Plain Newton is tried first.  If it leaves the interval, stalls or fails
    to converge, a bracket is grown geometrically around ``x0`` and a
    Newton-bisection hybrid finishes inside it.

    Convergence means ``|f(x)| <= tol`` or a Newton step below
    ``4 eps |x|``; one polishing step follows.

    Raises
    ------
    NewtonError
    """
    x = float(x0)
    if not lo < x < hi:
        raise NewtonError(f"seed {x0} outside ({lo}, {hi})")
    for _ in range(maxit):
        fx = f(x)
        if not math.isfinite(fx):
            break
        if abs(fx) <= tol:
            return _polish(f, df, x, lo, hi)
        d = df(x)
        if d == 0 or not math.isfinite(d):
            break
        xn = x - fx / d
        if not lo < xn < hi:
            break
        if abs(xn - x) <= 4 * _EPS * max(abs(x), 1e-300):
            return _polish(f, df, xn, lo, hi)
        x = xn
    a, b = _bracket(f, float(x0), lo, hi, step0)
    return _hybrid(f, df, a, b, tol, max(maxit, 200))


def _polish(f, df, x, lo, hi):
    try:
        d = df(x)
        xn = x - f(x) / d
    except (ZeroDivisionError, OverflowError, ValueError):
        return x
    if lo < xn < hi and math.isfinite(xn) and abs(f(xn)) <= abs(f(x)):
        return xn
    return x


def _bracket(f, x0, lo, hi, step0):
    d = step0 if step0 is not None else 1e-3 * max(1.0, abs(x0))
    f0 = f(x0)
    if f0 == 0:
        return x0, x0
    for _ in range(200):
        a = x0 - d if x0 - d > lo else lo + 0.5 * (x0 - lo) if math.isfinite(lo) else x0 - d
        b = x0 + d if x0 + d < hi else hi - 0.5 * (hi - x0) if math.isfinite(hi) else x0 + d
        fa, fb = f(a), f(b)
        # prefer the side closer to the seed
        if math.isfinite(fa) and fa * f0 <= 0:
            return a, x0
        if math.isfinite(fb) and fb * f0 <= 0:
            return x0, b
        d *= 2.0
        if d > 1e300:
            break
    raise NewtonError(f"no bracketing interval found around {x0}")


def _hybrid(f, df, a, b, tol, maxit):
    if a == b:
        return a
    fa, fb = f(a), f(b)
    if fa == 0:
        return a
    if fb == 0:
        return b
    if fa > 0:
        a, b, fa, fb = b, a, fb, fa  # now f(a) < 0 < f(b)
    x = 0.5 * (a + b)
    for _ in range(maxit):
        fx = f(x)
        if abs(fx) <= tol or a == b:
            return _polish(f, df, x, min(a, b) - abs(b - a), max(a, b) + abs(b - a))
        if fx < 0:
            a = x
        else:
            b = x
        d = df(x)
        xn = x - fx / d if d != 0 and math.isfinite(d) else None
        if xn is None or not min(a, b) < xn < max(a, b):
            xn = 0.5 * (a + b)
        if abs(xn - x) <= 4 * _EPS * max(abs(x), 1e-300):
            return xn
        x = xn
    raise NewtonError("bracketed Newton did not converge")


@dataclass
class NewtonProblem:
    """Square system ``residual(u) = 0`` in one or two unknowns."""

    residual: Callable
    jacobian: Callable
    x0: Union[float, Sequence[float]]
    tol: float = 1e-12
    maxit: int = 50
    lo: float = -math.inf
    hi: float = math.inf

    def solve(self):
        if np.ndim(self.x0) == 0:
            return safeguarded_newton(self.residual, self.jacobian, float(self.x0),
                                      self.lo, self.hi, self.tol, self.maxit)
        return _newton2(self.residual, self.jacobian, np.asarray(self.x0, dtype=float),
                        self.tol, self.maxit)


def _newton2(F, J, x, tol, maxit):
    x = x.copy()
    for _ in range(maxit):
        r = np.asarray(F(x), dtype=float)
        if not np.all(np.isfinite(r)):
            raise NewtonError("non-finite residual")
        jac = np.asarray(J(x), dtype=float)
        det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
        scale = np.max(np.abs(jac)) ** 2
        if scale == 0 or abs(det) <= 1e-14 * scale:
            raise NewtonError("singular Jacobian")
        dx = np.linalg.solve(jac, -r)
        # backtrack until the residual does not grow
        lam = 1.0
        rn = np.max(np.abs(r))
        for _ in range(30):
            xn = x + lam * dx
            rr = np.asarray(F(xn), dtype=float)
            if np.all(np.isfinite(rr)) and np.max(np.abs(rr)) <= max(rn, tol):
                break
            lam *= 0.5
        x = xn
        if np.max(np.abs(rr)) <= tol or np.max(np.abs(lam * dx)) <= 4 * _EPS * np.max(np.abs(x)):
            return x
    raise NewtonError("2D Newton did not converge")


# ---------------------------------------------------------------------------
# solutions


@dataclass
class ExactSolution:
    """A solution ``p(t, x)`` of the undamped equation.

    ``eval_pt`` defaults to a five-point centered difference of ``eval_p``.
    ``valid(t, x)`` is the domain-of-validity predicate; evaluation outside
    raises :class:`DomainError`.
    """

    family: str
    params: Dict[str, object]
    eval_p: Callable[[float, float], float]
    eval_v: Optional[Callable[[float, float], float]] = None
    eval_pt_fn: Optional[Callable[[float, float], float]] = None
    valid: Callable[[float, float], bool] = lambda t, x: True
    psi: Optional[Callable[[float, float], Tuple[float, float]]] = None
    note: str = ""

    @property
    def beta(self) -> float:
        return float(self.params["beta"])

    def eval_pt(self, t: float, x: float) -> float:
        if self.eval_pt_fn is not None:
            return self.eval_pt_fn(t, x)
        h = 1e-3 * max(1.0, abs(t))
        f = lambda s: self.eval_p(t + s, x)
        return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h)

    def sample(self, ts: Iterable[float], xs: Iterable[float]) -> List[Tuple[float, float, float, Optional[float]]]:
        """Rows ``(t, x, p, v)`` over the tensor grid; ``v`` is None when no
        closed form exists."""
        rows = []
        for t in ts:
            for x in xs:
                p = self.eval_p(t, x)
                v = self.eval_v(t, x) if self.eval_v is not None else None
                rows.append((t, x, p, v))
        return rows


def _guard(valid, fn):
    def wrapped(t, x):
        if not valid(t, x):
            raise DomainError(f"({t}, {x}) outside the domain of validity")
        return fn(t, x)
    return wrapped


def _solution(family, params, p, v=None, pt=None, valid=None, psi=None, note=""):
    valid = valid or (lambda t, x: True)
    return ExactSolution(family, params, _guard(valid, p),
                         None if v is None else _guard(valid, v),
                         None if pt is None else _guard(valid, pt), valid,
                         None if psi is None else _guard(valid, psi), note)


def make_deg2(a1: float = 0.0, a2: float = 0.0, a3: float = 1.0,
              beta: float = 1.0) -> ExactSolution:
    """Static solution ``p = -(x + a1)/a3``, ``v = -(t + a2)(x + a1)/a3``."""
    if a3 == 0:
        raise ValueError("a3 must be nonzero")
    return _solution(
        "deg2", {"a1": a1, "a2": a2, "a3": a3, "beta": beta},
        lambda t, x: -(x + a1) / a3,
        lambda t, x: -(t + a2) * (x + a1) / a3,
        lambda t, x: 0.0,
        psi=lambda t, x: (-(x + a1) / a3, -(t + a2) / a3))


def make_deg3(a1: float = 1.0, branch: str = "-", beta: float = 1.0) -> ExactSolution:
    """Spatially constant solution ``p = (1 +- s)/(2 beta)``,
    ``s = sqrt(1 - 4 beta^2 t/(3 a1))``.

    ``eval_v`` is assembled as ``t Psi1 + x Psi2 + psi*(Psi1, Psi2)`` with
    ``Psi2 = beta x/(3 a1)``, which gives
    ``v = t/(6 beta) + beta x^2/(6 a1) + (t/(3 beta) - a1/(4 beta^3))(1 +- s)``.
    The variant with ``t/(2 beta)`` in place of ``t/(6 beta)`` is kept as
    ``params["reference_v"]``; its ``t``-derivative exceeds ``p`` by
    ``1/(3 beta)``.
    """
    if a1 == 0:
        raise ValueError("a1 must be nonzero")
    sgn = _branch_sign(branch)
    b = beta

    def s(t):
        return math.sqrt(1.0 - 4.0 * b * b * t / (3.0 * a1))

    def valid(t, x):
        return 1.0 - 4.0 * b * b * t / (3.0 * a1) >= 0.0

    def p(t, x):
        return (1.0 + sgn * s(t)) / (2.0 * b)

    def pt(t, x):
        st = s(t)
        if st == 0:
            raise DomainError("p_t is singular at the end of the interval of existence")
        return -sgn * b / (3.0 * a1 * st)

    def v(t, x):
        return t / (6 * b) + b * x * x / (6 * a1) + (t / (3 * b) - a1 / (4 * b ** 3)) * (1 + sgn * s(t))

    def reference_v(t, x):
        return t / (2 * b) + b * x * x / (6 * a1) + (t / (3 * b) - a1 / (4 * b ** 3)) * (1 + sgn * s(t))

    sol = _solution("deg3", {"a1": a1, "branch": branch, "beta": beta}, p, v, pt, valid,
                    psi=lambda t, x: (p(t, x), b * x / (3 * a1)))
    sol.params["reference_v"] = _guard(valid, reference_v)
    return sol


def _branch_sign(branch) -> int:
    if branch in ("+", "plus", 1, "1", "+1"):
        return 1
    if branch in ("-", "minus", -1, "-1"):
        return -1
    raise ValueError(f"branch must be '+' or '-', got {branch!r}")


# ---------------------------------------------------------------------------
# degree four


def _deg4_a2zero(a1, b):
    def F(P, t, x):
        return a1 * (2 * b * P - 3) * P * P - b * b * t * t / (3 * a1 * P * P * (b * P - 1) ** 2) + 2 * b * x

    def FP(P, t, x):
        g = P * P * (b * P - 1) ** 2
        dg = 2 * P * (b * P - 1) ** 2 + 2 * b * P * P * (b * P - 1)
        return a1 * (6 * b * P * P - 6 * P) + b * b * t * t * dg / (3 * a1 * g * g)

    def Ft(P, t, x):
        return -2 * b * b * t / (3 * a1 * P * P * (b * P - 1) ** 2)

    def psi2(P, t, x):
        return -b * t / (3 * a1 * P * (b * P - 1))

    def psistar(ts, xs):
        return a1 * (2 * b * ts ** 3 - 3 * ts ** 2 - xs ** 2) * xs / (2 * b)

    return F, FP, Ft, psi2, psistar, 3.0 / (2 * b), 1.0 / b, math.inf


def _deg4_a1zero(a2, b):
    def F(P, t, x):
        return a2 * (4 * b * b * P * P - 3) * P - b ** 5 * x * x / (3 * a2 * (2 * b * P + 1) ** 2) + b * b * t

    def FP(P, t, x):
        return a2 * (12 * b * b * P * P - 3) + 4 * b ** 6 * x * x / (3 * a2 * (2 * b * P + 1) ** 3)

    def Ft(P, t, x):
        return b * b

    def psi2(P, t, x):
        return b * b * x / (3 * a2 * (2 * b * P + 1))

    def psistar(ts, xs):
        return a2 * (2 * b * b * ts ** 4 - 6 * b * ts * xs ** 2 - 3 * (ts ** 2 + xs ** 2)) / (2 * b * b)

    return F, FP, Ft, psi2, psistar, 0.0, -1.0 / (2 * b), math.inf


def make_deg4(case: str, a: float, beta: float = 1.0, tol: float = 1e-12,
              seed_point: Tuple[float, float] = (0.0, 0.0)) -> ExactSolution:
    """Degree-four family with ``a2 = 0`` (``case="a2zero"``, ``a = a1``) or
    ``a1 = 0`` (``case="a1zero"``, ``a = a2``).

    ``p = Psi1`` solves the scalar implicit equation by safeguarded Newton,
    continued along the straight path from ``seed_point`` where the branch
    is anchored (``Psi1 = 3/(2 beta)`` resp. ``Psi1 = 0`` at the origin).

    Raises
    ------
    NewtonError
        At evaluation, when the branch cannot be followed.
    """
    if a == 0:
        raise ValueError("the family parameter must be nonzero")
    if case == "a2zero":
        F, FP, Ft, psi2, psistar, seed, lo, hi = _deg4_a2zero(a, beta)
        params = {"a1": a, "a2": 0.0}
    elif case == "a1zero":
        F, FP, Ft, psi2, psistar, seed, lo, hi = _deg4_a1zero(a, beta)
        params = {"a1": 0.0, "a2": a}
    else:
        raise ValueError("case must be 'a2zero' or 'a1zero'")
    params["beta"] = beta
    t0, x0 = seed_point
    seed = safeguarded_newton(lambda P: F(P, t0, x0), lambda P: FP(P, t0, x0), seed,
                              lo, hi, tol)

    def p(t, x):
        n = max(8, int(math.ceil(math.hypot(t - t0, x - x0) / 0.02)))
        P = seed
        for k in range(1, n + 1):
            tk = t0 + (t - t0) * k / n
            xk = x0 + (x - x0) * k / n
            P = safeguarded_newton(lambda u: F(u, tk, xk), lambda u: FP(u, tk, xk), P,
                                   lo, hi, tol, step0=1e-3 * max(1.0, abs(P)))
        return P

    def pt(t, x):
        P = p(t, x)
        return -Ft(P, t, x) / FP(P, t, x)

    def v(t, x):
        P = p(t, x)
        X = psi2(P, t, x)
        return t * P + x * X + psistar(P, X)

    def residual(t, x, P):
        return F(P, t, x)

    sol = _solution("deg4_" + case, params, p, v, pt,
                    psi=lambda t, x: (lambda P: (P, psi2(P, t, x)))(p(t, x)))
    sol.params["implicit_residual"] = residual
    return sol


# ---------------------------------------------------------------------------
# similarity solutions


def psi0(z: float, branch: str = "nonsingular", tol: float = 1e-14) -> float:
    """Root of ``(1 + z^2 Psi0)^7 Psi0^9 = 1`` on the chosen branch.

    The nonsingular branch lies in ``(0, 1]`` with ``Psi0(0) = 1``; the
    singular branch satisfies ``Psi0 < -1/z^2``.  Each branch is the unique
    root of a monotone function in log variables, solved from an anchored
    seed.
    """
    z2 = z * z
    if branch == "nonsingular":
        # u = log Psi0:  9u + 7 log(1 + z^2 e^u) = 0
        f = lambda u: 9 * u + 7 * math.log1p(z2 * math.exp(u))
        df = lambda u: 9 + 7 * z2 * math.exp(u) / (1 + z2 * math.exp(u))
        u0 = -7.0 / 16.0 * math.log1p(z2)
        return math.exp(safeguarded_newton(f, df, u0, tol=tol, step0=1.0))
    if branch == "singular":
        if z == 0:
            raise DomainError("the singular branch is undefined at z = 0")
        # Psi0 = -(1 + y)/z^2 with y = e^s > 0:  7 s + 9 log(1 + e^s) = 18 log|z|
        lz = math.log(abs(z))
        f = lambda s: 7 * s + 9 * math.log1p(math.exp(s)) - 18 * lz
        df = lambda s: 7 + 9 / (1 + math.exp(-s))
        s0 = 18.0 / 7.0 * lz if lz < 0 else 18.0 / 16.0 * lz
        y = math.exp(safeguarded_newton(f, df, s0, tol=tol, step0=1.0))
        return -(1.0 + y) / z2
    raise ValueError("branch must be 'nonsingular' or 'singular'")


def _psi0_prime(z: float, P: float) -> float:
    # implicit derivative of 9 log|P| + 7 log|1 + z^2 P| = 0
    w = 1 + z * z * P
    FP = 9 / P + 7 * z * z / w
    Fz = 14 * z * P / w
    return -Fz / FP


def make_similarity(branch: str = "nonsingular", beta: float = 1.0) -> ExactSolution:
    """``p = (1/(2 beta))(1 + (beta/t)^(2/3) Psi0(z))``, ``z = beta^(1/3) x/t^(4/3)``.

    Defined for ``t > 0`` (and ``x != 0`` on the singular branch).
    """
    if branch not in ("nonsingular", "singular"):
        raise ValueError("branch must be 'nonsingular' or 'singular'")
    b = beta

    def valid(t, x):
        return t > 0 and (branch == "nonsingular" or x != 0)

    def parts(t, x):
        z = b ** (1 / 3) * x / t ** (4 / 3)
        P0 = psi0(z, branch)
        c = (b / t) ** (2 / 3)
        return z, P0, c

    def p(t, x):
        z, P0, c = parts(t, x)
        return (1 + c * P0) / (2 * b)

    def pt(t, x):
        z, P0, c = parts(t, x)
        dP = _psi0_prime(z, P0)
        return (-(2 / 3) * c / t * P0 + c * dP * (-(4 / 3) * z / t)) / (2 * b)

    def psi(t, x):
        z, P0, c = parts(t, x)
        w = c * P0
        return (1 + w) / (2 * b), x * w * w / (3 * b * t)

    def v(t, x):
        z, P0, c = parts(t, x)
        w = c * P0
        P1, P2 = (1 + w) / (2 * b), x * w * w / (3 * b * t)
        R = 9 * b * b * P2 * P2 + w ** 3
        return t * P1 + x * P2 + R ** (-1 / 6)

    return _solution("similarity", {"branch": branch, "beta": beta}, p, v, pt, valid, psi)


# ---------------------------------------------------------------------------
# contact inversion


@dataclass
class PsiStar:
    """A solution ``psi*(t*, x*)`` of the linear wave equation with its
    gradient and Hessian."""

    value: Callable[[float, float], float]
    grad: Callable[[float, float], Tuple[float, float]]
    hess: Callable[[float, float], Tuple[Tuple[float, float], Tuple[float, float]]]

    @classmethod
    def deg2(cls, a1, a2, a3):
        return cls(lambda T, X: a3 * T * X + a2 * T + a1 * X,
                   lambda T, X: (a3 * X + a2, a3 * T + a1),
                   lambda T, X: ((0.0, a3), (a3, 0.0)))

    @classmethod
    def deg3(cls, a1, b):
        return cls(lambda T, X: a1 * (T ** 3 - 1.5 * (T * T + X * X) / b),
                   lambda T, X: (a1 * (3 * T * T - 3 * T / b), -3 * a1 * X / b),
                   lambda T, X: ((a1 * (6 * T - 3 / b), 0.0), (0.0, -3 * a1 / b)))

    @classmethod
    def deg4(cls, a1, a2, b):
        def value(T, X):
            return (a1 * (2 * b * T ** 3 - 3 * T * T - X * X) * X / (2 * b)
                    + a2 * (2 * b * b * T ** 4 - 6 * b * T * X * X - 3 * (T * T + X * X)) / (2 * b * b))

        def grad(T, X):
            gt = (a1 * (6 * b * T * T - 6 * T) * X / (2 * b)
                  + a2 * (8 * b * b * T ** 3 - 6 * b * X * X - 6 * T) / (2 * b * b))
            gx = (a1 * (2 * b * T ** 3 - 3 * T * T - 3 * X * X) / (2 * b)
                  + a2 * (-12 * b * T * X - 6 * X) / (2 * b * b))
            return gt, gx

        def hess(T, X):
            htt = a1 * (12 * b * T - 6) * X / (2 * b) + a2 * (24 * b * b * T * T - 6) / (2 * b * b)
            htx = a1 * (6 * b * T * T - 6 * T) / (2 * b) + a2 * (-12 * b * X) / (2 * b * b)
            hxx = a1 * (-6 * X) / (2 * b) + a2 * (-12 * b * T - 6) / (2 * b * b)
            return ((htt, htx), (htx, hxx))

        return cls(value, grad, hess)

    @classmethod
    def similarity(cls, b):
        def R(T, X):
            return 9 * b * b * X * X + (2 * b * T - 1) ** 3

        def value(T, X):
            return R(T, X) ** (-1 / 6)

        def grad(T, X):
            r = R(T, X) ** (-7 / 6)
            return -b * (2 * b * T - 1) ** 2 * r, -3 * b * b * X * r

        def hess(T, X):
            w = 2 * b * T - 1
            Rv = R(T, X)
            r7, r13 = Rv ** (-7 / 6), Rv ** (-13 / 6)
            Rt, Rx = 6 * b * w * w, 18 * b * b * X
            htt = -4 * b * b * w * r7 + b * w * w * (7 / 6) * r13 * Rt
            htx = b * w * w * (7 / 6) * r13 * Rx
            hxx = -3 * b * b * r7 + 3 * b * b * X * (7 / 6) * r13 * Rx
            return ((htt, htx), (htx, hxx))

        return cls(value, grad, hess)


def invert_contact(psi_star: PsiStar, t: float, x: float,
                   seed: Tuple[float, float], tol: float = 1e-12,
                   maxit: int = 50) -> Tuple[float, float, float]:
    """Solve ``grad psi*(Psi1, Psi2) = (-t, -x)`` by 2D Newton.

    Returns
    -------
    (Psi1, Psi2, v)
        with ``p = Psi1`` and ``v = t Psi1 + x Psi2 + psi*(Psi1, Psi2)``.

    Raises
    ------
    NewtonError
        On non-convergence or a singular Jacobian.
    """
    def F(u):
        g = psi_star.grad(u[0], u[1])
        return np.array([g[0] + t, g[1] + x])

    def J(u):
        return np.array(psi_star.hess(u[0], u[1]), dtype=float)

    P1, P2 = NewtonProblem(F, J, seed, tol, maxit).solve()
    return float(P1), float(P2), float(t * P1 + x * P2 + psi_star.value(P1, P2))


# ---------------------------------------------------------------------------
# group transformations


def group_transform(sol: ExactSolution, generator: str, eps: float) -> ExactSolution:
    """Image of ``sol`` under the finite flow of a point symmetry.

    ``X1``: ``p(t - eps, x)``; ``X2``: ``p(t, x - eps)``;
    ``X3``: ``1/(2 beta) + (p(mu t, nu x) - 1/(2 beta)) mu`` with
    ``mu = exp(-2 beta eps)``, ``nu = exp(-3 beta eps)``;
    ``X4``: ``p(t/e^eps, x/e^eps)``.
    """
    b = sol.beta
    P, Pt, V, ok = sol.eval_p, sol.eval_pt, sol.eval_v, sol.valid
    if generator == "X1":
        m = lambda t, x: (t - eps, x)
        p = lambda t, x: P(*m(t, x))
        pt = lambda t, x: Pt(*m(t, x))
        v = None if V is None else (lambda t, x: V(*m(t, x)))
    elif generator == "X2":
        m = lambda t, x: (t, x - eps)
        p = lambda t, x: P(*m(t, x))
        pt = lambda t, x: Pt(*m(t, x))
        v = None if V is None else (lambda t, x: V(*m(t, x)))
    elif generator == "X3":
        mu, nu = math.exp(-2 * b * eps), math.exp(-3 * b * eps)
        m = lambda t, x: (mu * t, nu * x)
        p = lambda t, x: 1 / (2 * b) + (P(*m(t, x)) - 1 / (2 * b)) * mu
        pt = lambda t, x: mu * mu * Pt(*m(t, x))
        v = None if V is None else (lambda t, x: V(*m(t, x)) + t * (1 - mu) / (2 * b))
    elif generator == "X4":
        s = math.exp(-eps)
        m = lambda t, x: (s * t, s * x)
        p = lambda t, x: P(*m(t, x))
        pt = lambda t, x: s * Pt(*m(t, x))
        v = None if V is None else (lambda t, x: V(*m(t, x)) / s)
    else:
        raise ValueError("generator must be one of X1, X2, X3, X4")
    if eps == 0:
        p, pt, v = P, Pt, V
    valid = lambda t, x: ok(*m(t, x))
    params = dict(sol.params, generator=generator, eps=eps)
    return ExactSolution(f"{sol.family}^{generator}", params, _guard(valid, p),
                         None if v is None else _guard(valid, v), _guard(valid, pt), valid)


# ---------------------------------------------------------------------------
# finite-difference residuals


def fd_residual(sol: ExactSolution, t: float, x: float, h: float, stencil: int = 3) -> float:
    """Undamped residual ``(1 - 2 beta p) p_tt - 2 beta p_t^2 - p_xx`` with
    centered differences of step ``h`` (3- or 5-point)."""
    P = sol.eval_p
    b = sol.beta
    p0 = P(t, x)
    if stencil == 3:
        pp, pm = P(t + h, x), P(t - h, x)
        ptt = (pp - 2 * p0 + pm) / (h * h)
        pt = (pp - pm) / (2 * h)
        pxx = (P(t, x + h) - 2 * p0 + P(t, x - h)) / (h * h)
    elif stencil == 5:
        tp1, tm1, tp2, tm2 = P(t + h, x), P(t - h, x), P(t + 2 * h, x), P(t - 2 * h, x)
        ptt = (-tp2 + 16 * tp1 - 30 * p0 + 16 * tm1 - tm2) / (12 * h * h)
        pt = (-tp2 + 8 * tp1 - 8 * tm1 + tm2) / (12 * h)
        xp1, xm1, xp2, xm2 = P(t, x + h), P(t, x - h), P(t, x + 2 * h), P(t, x - 2 * h)
        pxx = (-xp2 + 16 * xp1 - 30 * p0 + 16 * xm1 - xm2) / (12 * h * h)
    else:
        raise ValueError("stencil must be 3 or 5")
    return (1 - 2 * b * p0) * ptt - 2 * b * pt * pt - pxx


def fd_residual_orders(sol: ExactSolution, points: Sequence[Tuple[float, float]],
                       hs: Sequence[float], stencil: int = 3) -> Tuple[List[float], List[float]]:
    """Max residual over ``points`` for each ``h``, and the observed orders
    ``log(r_i/r_{i+1}) / log(h_i/h_{i+1})``."""
    res = [max(abs(fd_residual(sol, t, x, h, stencil)) for t, x in points) for h in hs]
    orders = [math.log(r0 / r1) / math.log(h0 / h1) if r0 > 0 and r1 > 0 else float("nan")
              for r0, r1, h0, h1 in zip(res, res[1:], hs, hs[1:])]
    return res, orders


# ---------------------------------------------------------------------------
# registry used by the command line


FAMILIES = ("deg2", "deg3", "deg4a", "deg4b", "similarity")


def make_family(name: str, params: Dict[str, str]) -> ExactSolution:
    """Build a family from string parameters (as given on the command line).

    Raises
    ------
    ValueError
        On unknown families or parameters.
    """
    params = dict(params)
    beta = float(params.pop("beta", 1.0))

    def num(key, default):
        return float(params.pop(key, default))

    if name == "deg2":
        sol = make_deg2(num("a1", 0.0), num("a2", 0.0), num("a3", 1.0), beta)
    elif name == "deg3":
        sol = make_deg3(num("a1", 1.0), params.pop("branch", "-"), beta)
    elif name == "deg4a":
        sol = make_deg4("a2zero", num("a1", 1.0), beta)
    elif name == "deg4b":
        sol = make_deg4("a1zero", num("a2", 1.0), beta)
    elif name == "similarity":
        sol = make_similarity(params.pop("branch", "nonsingular"), beta)
    else:
        raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    if params:
        raise ValueError(f"unknown parameters for {name}: {', '.join(sorted(params))}")
    return sol
