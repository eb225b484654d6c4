"""High-precision reference values frozen into the Rust test suite.

Run with `python3 mp_reference.py`; every value is printed with 20
significant digits. Nothing here imports the Rust implementation.
"""
from mpmath import mp, mpf, mpc, loggamma, gamma, hyp2f1, besselj, sinh, cosh, exp, sqrt, pi

mp.dps = 50


def jacobi_phi(a, b, lam, t):
    rho = a + b + 1
    return hyp2f1((rho - lam) / 2, (rho + lam) / 2, a + 1, -sinh(t) ** 2)


def jacobi_Phi(a, b, lam, t):
    rho = a + b + 1
    return (2 * cosh(t)) ** (lam - rho) * hyp2f1(
        (rho - lam) / 2, (a - b + 1 - lam) / 2, 1 - lam, cosh(t) ** -2
    )


def c_rank1(a, b, lam):
    rho = a + b + 1
    return (
        mpf(2) ** (rho - lam) * gamma(a + 1) * gamma(lam)
        / (gamma((lam + rho) / 2) * gamma((lam + a - b + 1) / 2))
    )


def show(name, v):
    if isinstance(v, mpc):
        print(f"{name}: {mp.nstr(v.real, 20)} {mp.nstr(v.imag, 20)}")
    else:
        print(f"{name}: {mp.nstr(v, 20)}")


show("loggamma(1.5+2.5i)", loggamma(mpc(1.5, 2.5)))
show("loggamma(-2.3+0.7i)", loggamma(mpc(-2.3, 0.7)))
show("loggamma(30-12i)", loggamma(mpc(30, -12)))
show("J0(2)", besselj(0, 2))
show("calJ_{1.5}(2.2i)", 2 ** mpf(1.5) * gamma(mpf(2.5)) * besselj(1.5, mpc(0, 2.2)) / mpc(0, 2.2) ** mpf(1.5))
show("2F1(0.3,-1.7;2.2;-7.5)", hyp2f1(mpf("0.3"), mpf("-1.7"), mpf("2.2"), mpf("-7.5")))
show("2F1(1.1,2.4;3.3;0.8)", hyp2f1(mpf("1.1"), mpf("2.4"), mpf("3.3"), mpf("0.8")))
show("phi(1,0.5;2.5;t=1)", jacobi_phi(mpf(1), mpf("0.5"), mpf("2.5"), mpf(1)))
show("phi(1,0.5;1.9;t=1.3)", jacobi_phi(mpf(1), mpf("0.5"), mpf("1.9"), mpf("1.3")))
show("phi(1,0.5;1.9;t=4.5)", jacobi_phi(mpf(1), mpf("0.5"), mpf("1.9"), mpf("4.5")))
show("phi(2.6,0.3;0.7;t=9)", jacobi_phi(mpf("2.6"), mpf("0.3"), mpf("0.7"), mpf(9)))
show("phi(0,-0.5;1.5i;t=2)", jacobi_phi(mpf(0), mpf("-0.5"), mpc(0, "1.5"), mpf(2)))
show("phi(1,0.5;3;t=6)", jacobi_phi(mpf(1), mpf("0.5"), mpf(3), mpf(6)))
show("phi(0.25,-0.25;1.3+0.4i;t=2.7)", jacobi_phi(mpf("0.25"), mpf("-0.25"), mpc("1.3", "0.4"), mpf("2.7")))
show("Phi(-0.5,-0.5;0.5;t=3)", jacobi_Phi(mpf(-0.5), mpf(-0.5), mpf("0.5"), mpf(3)))
show("Phi(1,0.5;1.7;t=1.2)", jacobi_Phi(mpf(1), mpf("0.5"), mpf("1.7"), mpf("1.2")))
show("c(1,0.5;2.5)", c_rank1(mpf(1), mpf("0.5"), mpf("2.5")))
show("c(1,1;rho=3)", c_rank1(mpf(1), mpf(1), mpf(3)))
show("c(1,0.5;0.9)", c_rank1(mpf(1), mpf("0.5"), mpf("0.9")))
show("c(0.7,0.2;1.4+2i)", c_rank1(mpf("0.7"), mpf("0.2"), mpc("1.4", 2)))
# Product formula for n=2, k_s=k_l=0, k_m=1: alpha=beta=-1/2, rho_1=0
lam = [mpf("3.3"), mpf("1.1")]
t = [mpf(2), mpf(1)]
delta = 2 * (cosh(2 * t[0]) - cosh(2 * t[1]))
show("phi_product(ks=kl=0,km=1)", jacobi_Phi(mpf(-0.5), mpf(-0.5), lam[0], t[0]) * jacobi_Phi(mpf(-0.5), mpf(-0.5), lam[1], t[1]) / delta)
# BC_1 Harish-Chandra coefficients: Taylor coefficients in u = e^{-2t} of
# e^{-(lambda-rho)t} Phi(t), for k_s = 0.7, k_l = 0.4, lambda = 2.37.
from mpmath import taylor

ks, kl, lam1 = mpf("0.7"), mpf("0.4"), mpf("2.37")
a1, b1 = ks + kl - mpf("0.5"), kl - mpf("0.5")
r1 = a1 + b1 + 1
hc = taylor(
    lambda u: (1 + u) ** (lam1 - r1)
    * hyp2f1((r1 - lam1) / 2, (a1 - b1 + 1 - lam1) / 2, 1 - lam1, 4 * u / (1 + u) ** 2),
    0,
    4,
)
for j, v in enumerate(hc):
    show(f"HC coefficient Gamma_{j}", v)
