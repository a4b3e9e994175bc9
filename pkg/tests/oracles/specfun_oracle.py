"""Reference values for the specfun test suite.

Everything here is computed with mpmath (plus closed forms) and never imports
the package under test.  Run and paste the printed constants into
tests/test_specfun.py; rerun whenever a tolerance or a probe point changes.
"""

import mpmath as mp

mp.mp.dps = 50


def show(name, value):
    print(f"{name} = {mp.nstr(value, 17)}")


# --- gamma ratio -----------------------------------------------------------
show("gamma_ratio_40_1p7", mp.gamma("41.7") / mp.gamma(41))
stirling = (mp.mpf("41.7") / 41) ** mp.mpf("40.5") * (mp.mpf("41.7") / mp.e) ** mp.mpf("0.7")
show("gamma_ratio_40_1p7_stirling_relerr",
     stirling / (mp.gamma("41.7") / mp.gamma(41)) - 1)

# --- Bessel ----------------------------------------------------------------
show("bessel_i_half_1", mp.sqrt(2 / mp.pi) * mp.sinh(1))

# --- Kummer M1 -------------------------------------------------------------
a, b, z = mp.mpf("-2.3"), mp.mpf("1.4"), mp.mpf("0.9")
h = mp.mpf("1e-6")
show("kummer_m1_central_fd", (mp.hyp1f1(a + h, b, z) - mp.hyp1f1(a - h, b, z)) / (2 * h))
show("kummer_m1_exact", mp.diff(lambda t: mp.hyp1f1(t, b, z), a))

# --- rescaled U ------------------------------------------------------------
show("kummer_u_2p3_1p7_1p1", mp.hyperu("-2.3", "1.7", "1.1"))
show("kummer_u_rescaled_60_1p5_2", mp.hyperu(-60, "1.5", 2) / mp.gamma(61))
show("kummer_u1_rescaled_2p3_1p7_1p1",
     mp.diff(lambda t: mp.hyperu(t, "1.7", "1.1") / mp.gamma(1 - t), mp.mpf("-2.3")))

# --- parabolic cylinder ----------------------------------------------------
show("parabolic_d1_1p3", mp.mpf("1.3") * mp.exp(-mp.mpf("1.69") / 4))
show("parabolic_d3_0p8",
     2 ** mp.mpf("-1.5") * mp.hermite(3, mp.mpf("0.8") / mp.sqrt(2)) * mp.exp(-mp.mpf("0.64") / 4))
show("parabolic_d_2p6_1p1", mp.pcfd("2.6", "1.1"))
show("parabolic_d_m0p4_m0p9", mp.pcfd("-0.4", "-0.9"))


def d_tilde(nu, z):
    return mp.sqrt(mp.pi) * 2 ** (-nu / 2) * mp.pcfd(nu, z) / mp.gamma(nu / 2)


show("parabolic_d1_rescaled_2p6_1p1", mp.diff(lambda v: d_tilde(v, mp.mpf("1.1")), mp.mpf("2.6")))

# --- Kummer cylinder (S and its order derivative) ---------------------------
def s_kummer(alpha, beta, x, y):
    return (mp.hyp1f1(alpha, beta, x) * mp.hyperu(alpha, beta, y)
            - mp.hyperu(alpha, beta, x) * mp.hyp1f1(alpha, beta, y))


show("cylinder_kummer_m1p2_1p6_0p4_2p0", s_kummer(mp.mpf("-1.2"), mp.mpf("1.6"), mp.mpf("0.4"), 2))
show("cylinder_kummer1_rescaled_1p2_1p6_0p4_2p0",
     mp.diff(lambda t: s_kummer(t, mp.mpf("1.6"), mp.mpf("0.4"), 2) / mp.gamma(1 - t),
             mp.mpf("-1.2")))

# --- parabolic cylinder pair (OU S and its order derivative) ---------------
def s_parab(nu_slot, x, y):
    e = mp.exp((x * x + y * y) / 4)
    return e * (mp.pcfd(-nu_slot, x) * mp.pcfd(-nu_slot, -y)
                - mp.pcfd(-nu_slot, y) * mp.pcfd(-nu_slot, -x))


def s_parab_tilde(nu, x, y):
    e = mp.exp((x * x + y * y) / 4)
    return e * (d_tilde(nu, x) * d_tilde(nu, -y) - d_tilde(nu, y) * d_tilde(nu, -x))


x0, y0 = mp.mpf("-0.3"), mp.mpf("0.9")
show("cylinder_parabolic_m1p5", s_parab(mp.mpf("-1.5"), x0, y0))
show("cylinder_parabolic_rescaled_1p5", s_parab_tilde(mp.mpf("1.5"), x0, y0))
show("cylinder_parabolic1_rescaled_1p5",
     -mp.diff(lambda v: s_parab_tilde(v, x0, y0), mp.mpf("1.5")))

# --- Tricomi U sample grid for the reflection-consistency test --------------
rng_pts = [
    (-0.3, 1.2, 0.5), (-1.7, 1.4, 1.0), (-2.9, 2.6, 3.0), (-4.4, 1.1, 7.5),
    (-6.1, 2.2, 12.0), (-7.8, 1.8, 20.0), (-9.6, 2.9, 15.0), (-0.9, 2.4, 0.8),
    (-3.3, 1.3, 4.2), (-5.5, 2.7, 9.9), (-8.2, 1.6, 2.3), (-2.1, 2.1, 18.0),
]
print("U_GRID = [")
for (aa, bb, zz) in rng_pts:
    val = mp.hyperu(mp.mpf(repr(aa)), mp.mpf(repr(bb)), mp.mpf(repr(zz)))
    print(f"    ({aa}, {bb}, {zz}, {mp.nstr(val, 17)}),")
print("]")

# --- large-order Kummer M probe (forces the high-precision fallback) --------
show("kummer_m_m60p5_1p5_30", mp.hyp1f1(mp.mpf("-60.5"), mp.mpf("1.5"), 30))
show("kummer_m_m200p25_2p5_40", mp.hyp1f1(mp.mpf("-200.25"), mp.mpf("2.5"), 40))
show("kummer_m1_m60p5_1p5_30",
     mp.diff(lambda t: mp.hyp1f1(t, mp.mpf("1.5"), 30), mp.mpf("-60.5")))

# --- incomplete gamma spot values -------------------------------------------
show("gammainc_lower_0p7_1p3", mp.gammainc(mp.mpf("0.7"), 0, mp.mpf("1.3")))
show("gammainc_upper_0p7_1p3", mp.gammainc(mp.mpf("0.7"), mp.mpf("1.3"), mp.inf))
