"""Independent values of 6*psi by symbolic integration of the rank-bound integrands.

Frozen into tests/test_eta_profiles.cpp. Run: python3 psi_oracle.py
"""
from sympy import Rational as R, Max, Min, Piecewise, integrate, symbols, nsimplify

x = symbols("x", nonnegative=True)


def eta(lam, gam):
    return Max(0, lam * (x - 3) + gam)


def chain6(lam, gam, a, b, upper):
    e = eta(lam, gam)
    f = Piecewise(
        (3 * x**2 - 3 * e**2 / (a * b), e <= a * x),
        (3 * (b * x - e) ** 2 / (b * (b - a)), e <= b * x),
        (0, True),
    )
    return nsimplify(integrate(f, (x, 0, upper)))


def degen6(lam, gam, upper):
    e = eta(lam, gam)
    return nsimplify(integrate(3 * (x**2 - e**2), (x, 0, upper)))


def nonexc6(lam, gam, upper):
    e = eta(lam, gam)
    return nsimplify(integrate(3 * (x - e) ** 2, (x, 0, upper)))


if __name__ == "__main__":
    h = R(9, 2)
    print("chain(1,5) l=5/3 g=5:", chain6(R(5, 3), 5, 1, 5, h))
    print("chain(1,5) l=2 g=5:", chain6(R(2), 5, 1, 5, h))
    print("chain(2,5) l=3 g=631/100:", chain6(R(3), R(631, 100), 2, 5, h))
    print("chain(3,7) l=20 g=9:", chain6(R(20), 9, 3, 7, (3 * 20 - 9) / R(20 - 7)))
    print("chain(1,2) l=1 g=3:", chain6(R(1), 3, 1, 2, h))
    print("degenerate l=2/3 g=2:", degen6(R(2, 3), 2, h))
    print("degenerate l=5/3 g=2:", degen6(R(5, 3), 2, (3 * R(5, 3) - 2) / (R(5, 3) - 1)))
    print("degenerate l=3 g=2:", degen6(R(3), 2, R(7, 2)))
    print("nonexc l=1/2 g=1:", nonexc6(R(1, 2), 1, h))
    print("nonexc l=1 g=1:", nonexc6(R(1), 1, h))
    print("nonexc l=7/3 g=1:", nonexc6(R(7, 3), 1, h))
    print("nonexc l=3 g=1 (T0=4):", nonexc6(R(3), 1, R(4)))
