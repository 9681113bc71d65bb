"""Tour of the algebraic layer: the closure F, its quartic, and the
characteristic (s1, s2) variables.

The first-order system closes through F(u, v), the smaller root of
x^2 - Q x + u^2 v^2 with Q = v^2 (1 - u^2) - 1.  In characteristic
variables s1 = phi_r, s2 = -phi_t / sqrt(Delta) the same quantity is
simply min(s1^2, s2^2), which makes exactness easy to check.
"""
import numpy as np

from membrane.transform import (SPair, discriminant, f_partials, f_value,
                                q_value, s_to_uv, sample_spairs)


def main():
    print("=== closure at a hand-picked point ===")
    s = SPair(0.7, 1.9)
    p = s_to_uv(s)
    f = f_value(p.u, p.v)
    print(f"s = ({s.s1}, {s.s2})  ->  (u, v) = ({p.u:.6f}, {p.v:.6f})")
    print(f"F(u, v)        = {f:.15f}")
    print(f"min(s1^2,s2^2) = {min(s.s1**2, s.s2**2):.15f}")
    q = q_value(p.u, p.v)
    print(f"quartic residual F^2 - Q F + (uv)^2 = {f*f - q*f + (p.u*p.v)**2:.3e}")

    print("\n=== worst-case exactness over 10^4 random valid points ===")
    worst = 0.0
    for s in sample_spairs(10_000, seed=0):
        p = s_to_uv(s)
        target = min(s.s1**2, s.s2**2)
        worst = max(worst, abs(f_value(p.u, p.v) - target) / target)
    print(f"max relative error of F against the s-form: {worst:.3e}")

    print("\n=== derivative sign near the sonic set ===")
    print("moving u toward the sonic set raises min(s1^2, s2^2), so F")
    print("grows with |u|; the analytic partial agrees:")
    for u, v in [(0.1, 2.5), (0.3, 2.0), (0.45, 2.0)]:
        fu, fv = f_partials(u, v)
        print(f"  u={u:4.2f} v={v:3.1f}  D={discriminant(u, v):7.4f}  "
              f"dF/du={fu:+9.4f}  dF/dv={fv:+9.4f}")


if __name__ == "__main__":
    main()
