#!/usr/bin/env python3
"""Generate high-precision reference values frozen into the C++ test suite.

All values are computed with mpmath at 50-200 decimal digits and emitted as
tests/golden.hpp. Hypergeometric values are computed by brute-force summation
of the defining series (no transformation tricks), so they are an independent
check on the C++ evaluation strategy (series + connection formula).

Run from the repository root:  python3 tools/gen_golden.py
"""

import mpmath as mp

OUT = "tests/golden.hpp"


def f17(x):
    """Render an mpmath float as a C++ double literal with 17 significant digits."""
    return mp.nstr(mp.mpf(x), 17, strip_zeros=False)


def brute_2f1(a, b, c, z, max_terms=200000):
    """Brute-force hypergeometric series sum_n (a)_n (b)_n / ((c)_n n!) z^n."""
    s = mp.mpf(1) if mp.im(z) == 0 and all(mp.im(t) == 0 for t in (a, b, c)) else mp.mpc(1)
    term = s
    n = 0
    while n < max_terms:
        term = term * (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        s += term
        n += 1
        if abs(term) < mp.mpf(10) ** (-mp.mp.dps + 5) * max(abs(s), 1):
            return s
    raise RuntimeError(f"series did not converge: a={a} b={b} c={c} z={z}")


def log_branch_second_solution(a, b, w, nmax=4000):
    """Second Frobenius solution at w=0 when the local exponents coincide (c'=1):
    y2(w) = 2F1(a,b,1;w) log(w) + sum_{n>=1} (a)_n (b)_n/(n!)^2 h_n w^n,
    h_n = sum_{k<n} [1/(a+k) + 1/(b+k) - 2/(1+k)].
    When a = -m is a nonpositive integer the n>m terms are the analytic limit
    (a)_n h_n -> (-1)^m m! (n-1-m)!, so the series stays finite."""
    m = None
    if mp.im(a) == 0 and mp.re(a) <= 0 and mp.isint(a):
        m = int(-mp.re(a))
    y1 = brute_2f1(a, b, 1, w)
    pochb = mp.mpf(1)
    pocha = mp.mpf(1)
    h = mp.mpf(0)
    s = mp.mpf(0)
    for n in range(1, nmax):
        k = n - 1
        pochb = pochb * (b + k)
        if m is None or n <= m:
            pocha = pocha * (a + k)
            h += 1 / (a + k) + 1 / (b + k) - 2 / (1 + k)
            term = pocha * pochb / mp.factorial(n) ** 2 * h * w ** n
        else:
            lim = (-1) ** m * mp.factorial(m) * mp.factorial(n - 1 - m)
            term = lim * pochb / mp.factorial(n) ** 2 * w ** n
        s += term
        if abs(term) < mp.mpf(10) ** (-mp.mp.dps + 5) * max(abs(s), 1):
            break
    return y1 * mp.log(w) + s


def spectral_params(ell, lam):
    ell = mp.mpf(ell)
    return ((-1 + ell + lam) / 2, (4 + ell + lam) / 2, mp.mpf(3) / 2 + ell)


def free_params(ell):
    ell = mp.mpf(ell)
    return ((3 + 2 * ell) / 4, (5 + 2 * ell) / 4, (3 + 2 * ell) / 2)


def main():
    mp.mp.dps = 200

    lines = []
    lines.append("// Generated by tools/gen_golden.py — do not edit by hand.")
    lines.append("// High-precision reference values (mpmath, 50-200 digit working precision),")
    lines.append("// frozen to 17 significant digits.")
    lines.append("#pragma once")
    lines.append("")
    lines.append("namespace golden {")
    lines.append("")

    # ---------------------------------------------------------------- gamma
    gamma_args = [
        mp.mpf(1), mp.mpf("0.5"), mp.mpf(5), mp.mpf("3.7"), mp.mpf("-2.5"),
        mp.mpf("0.1"), mp.mpf("10.3"), mp.mpf("29.5"), mp.mpf("1e-3"),
        mp.mpf("-0.75"), mp.mpf("-7.2"),
        mp.mpc(2, 3), mp.mpc("-1.5", "0.5"), mp.mpc("0.5", "-4"),
        mp.mpc("0.25", "0.25"), mp.mpc(-3, -2), mp.mpc(12, 7),
    ]
    lines.append("struct GammaCase { double zr, zi, gr, gi; };")
    lines.append("inline constexpr GammaCase kGammaCases[] = {")
    for z in gamma_args:
        g = mp.gamma(z)
        lines.append(f"    {{{f17(mp.re(z))}, {f17(mp.im(z))}, {f17(mp.re(g))}, {f17(mp.im(g))}}},")
    lines.append("};")
    lines.append("")

    # -------------------------------------------------------------- digamma
    digamma_args = [mp.mpf(1), mp.mpf("0.5"), mp.mpf("3.25"), mp.mpf("10.7"),
                    mp.mpf("-0.75"), mp.mpc(2, 1), mp.mpc("0.3", "-2.2")]
    lines.append("struct DigammaCase { double zr, zi, vr, vi; };")
    lines.append("inline constexpr DigammaCase kDigammaCases[] = {")
    for z in digamma_args:
        v = mp.digamma(z)
        lines.append(f"    {{{f17(mp.re(z))}, {f17(mp.im(z))}, {f17(mp.re(v))}, {f17(mp.im(v))}}},")
    lines.append("};")
    lines.append("")

    # ---------------------------------------------------------------- 2F1
    cases = []

    # Generic sanity triples.
    cases.append((mp.mpf(1), mp.mpf(1), mp.mpf(2), mp.mpf("0.5")))        # = 2 log 2
    cases.append((mp.mpf("0.5"), mp.mpf("1.25"), mp.mpf("2.5"), mp.mpf("0.9")))
    cases.append((mp.mpf(-1), mp.mpf("2.3"), mp.mpf("1.7"), mp.mpf("0.8")))  # terminating
    cases.append((mp.mpc("0.5", "0.3"), mp.mpc("1.1", "-0.2"), mp.mpf("2.2"), mp.mpc("0.35", "0.15")))
    cases.append((mp.mpf("0.75"), mp.mpf("1.75"), mp.mpf("2.25"), mp.mpc("0.4", "0.45")))

    # Spectral parameter family (with-potential radial operator),
    # first-kind solutions at z and 1-z for assorted (ell, lambda).
    zs = [mp.mpf(t) for t in ("0.05", "0.3", "0.55", "0.61", "0.75", "0.9", "0.95")]
    for ell in (0, 1, 2, 5):
        for lam in (mp.mpf("0.5"), mp.mpf("1.25"), mp.mpf(2), mp.mpf("1.0005"),
                    mp.mpc("0.5", "0.75")):
            a, b, c = spectral_params(ell, lam)
            for z in zs:
                cases.append((a, b, c, z))                     # phi0 argument
                cases.append((a, b, a + b + 1 - c, 1 - z))     # phi1 argument
    # Free family at lambda = 1/2 (elementary-form family), ell = 0..8.
    for ell in range(9):
        a, b, c = free_params(ell)
        for z in (mp.mpf("0.05"), mp.mpf("0.5"), mp.mpf("0.75"), mp.mpf("0.95")):
            cases.append((a, b, c, z))
            cases.append((a, b, mp.mpf(3) / 2, 1 - z))

    lines.append("struct Hyp2f1Case { double ar, ai, br, bi, cr, ci, zr, zi, fr, fi; };")
    lines.append("inline constexpr Hyp2f1Case kHyp2f1Cases[] = {")
    for (a, b, c, z) in cases:
        f = brute_2f1(a, b, c, z)
        row = [mp.re(a), mp.im(a), mp.re(b), mp.im(b), mp.re(c), mp.im(c),
               mp.re(z), mp.im(z), mp.re(f), mp.im(f)]
        lines.append("    {" + ", ".join(f17(x) for x in row) + "},")
    lines.append("};")
    lines.append("")

    # Self-check: 2F1(1,1,2;1/2) = 2 log 2.
    assert abs(brute_2f1(1, 1, 2, mp.mpf("0.5")) - 2 * mp.log(2)) < mp.mpf("1e-180")

    # ------------------------------- degenerate connection (c-a-b = -m) near z=1
    # Evaluated with mpmath's own hyp2f1 (the brute series is impractically slow
    # this close to z=1); mp.hyp2f1 is cross-checked against the brute series at
    # a moderate z for every parameter triple first.
    near_one = [
        ("0.7", "0.8", "1.5", "0.97"),        # m = 0
        ("0.25", "1.25", "1.5", "0.9995"),    # m = 0
        ("0.5", "2.5", "2.0", "0.999"),       # m = 1
        ("0.5", "3.0", "1.5", "0.99938"),     # m = 2
        ("0.5", "3.0", "1.5", "0.9999995"),   # m = 2, extreme
        ("1.0", "3.5", "2.5", "0.999"),       # m = 2, log coefficient vanishes
        ("1.5", "4.0", "3.5", "0.9996"),      # m = 2
        ("1.5", "4.0", "2.5", "0.9995"),      # m = 3
        ("2.5", "5.0", "3.5", "0.9995"),      # m = 4
    ]
    lines.append("struct Hyp2f1NearOneCase { double a, b, c, z, f; };")
    lines.append("inline constexpr Hyp2f1NearOneCase kHyp2f1NearOne[] = {")
    for (a_s, b_s, c_s, z_s) in near_one:
        # Round every input through binary double first: the consumer receives
        # doubles, and near z = 1 the value is sensitive to the last ulp of z.
        a, b, c, z = (mp.mpf(float(mp.mpf(t))) for t in (a_s, b_s, c_s, z_s))
        m = c - a - b
        assert mp.isint(m) and m <= 0, (a_s, b_s, c_s)
        chk = mp.mpf("0.9")
        assert abs(mp.hyp2f1(a, b, c, chk) - brute_2f1(a, b, c, chk)) < \
            mp.mpf("1e-150") * abs(brute_2f1(a, b, c, chk))
        f = mp.hyp2f1(a, b, c, z)
        lines.append(
            f"    {{{f17(a)}, {f17(b)}, {f17(c)}, {f17(z)}, {f17(f)}}},")
    lines.append("};")
    lines.append("")

    # ------------------------------------------------- elementary phi1 form
    # phi1_elementary(ell, z) = [ (1-sqrt(1-z))^(-ell-1/2) - (1+sqrt(1-z))^(-ell-1/2) ]
    #                           / ((2 ell + 1) sqrt(1-z))
    def phi1_elem(ell, z):
        s = mp.sqrt(1 - z)
        e = -(mp.mpf(ell) + mp.mpf("0.5"))
        return ((1 - s) ** e - (1 + s) ** e) / ((2 * ell + 1) * s)

    # Self-check: elementary form equals the free-family hypergeometric phi1.
    for ell in range(9):
        a, b, c = free_params(ell)
        for z in (mp.mpf("0.05"), mp.mpf("0.5"), mp.mpf("0.75"), mp.mpf("0.95")):
            hyp = brute_2f1(a, b, mp.mpf(3) / 2, 1 - z)
            assert abs(phi1_elem(ell, z) - hyp) < mp.mpf("1e-150") * abs(hyp), (ell, z)

    v = phi1_elem(0, mp.mpf("0.75"))
    lines.append(f"inline constexpr double kPhi1Elem075 = {f17(v)};")

    # Elementary-form pinned samples (ell, z, value).
    lines.append("struct Phi1ElemCase { int ell; double z, value; };")
    lines.append("inline constexpr Phi1ElemCase kPhi1ElemCases[] = {")
    for ell in (0, 1, 3, 8):
        for z in (mp.mpf("0.05"), mp.mpf("0.35"), mp.mpf("0.75"), mp.mpf("0.95")):
            lines.append(f"    {{{ell}, {f17(z)}, {f17(phi1_elem(ell, z))}}},")
    lines.append("};")
    lines.append("")

    # ------------------------------------------ Wronskian / boundary limits
    # Self-check (50 digits): rho^2 (1-rho^2)^{3/2} W(psi0, psi1)(rho) = -2^{ell+1/2}
    # for the free family at lambda = 1/2, psi_j(rho) = rho^ell phi_j(rho^2).
    mp.mp.dps = 60
    for ell in range(9):
        a, b, c = free_params(ell)

        def psi0(r, ell=ell, a=a, b=b, c=c):
            return r ** ell * brute_2f1(a, b, c, r * r)

        def psi1(r, ell=ell, a=a, b=b):
            return r ** ell * brute_2f1(a, b, mp.mpf(3) / 2, 1 - r * r)

        rho = mp.mpf("0.5")
        W = psi0(rho) * mp.diff(psi1, rho) - mp.diff(psi0, rho) * psi1(rho)
        val = rho ** 2 * (1 - rho ** 2) ** mp.mpf("1.5") * W
        target = -mp.mpf(2) ** (ell + mp.mpf("0.5"))
        assert abs(val - target) < mp.mpf("1e-40") * abs(target), (ell, val, target)

    # Self-check: Gamma((3+2l)/2) Gamma(1/2) / (Gamma((3+2l)/4) Gamma((5+2l)/4))
    # equals 2^{l+1/2} (the z->1 limit constant of sqrt(1-z) phi0).
    for ell in range(9):
        a, b, c = free_params(ell)
        val = mp.gamma(c) * mp.gamma(mp.mpf("0.5")) / (mp.gamma(a) * mp.gamma(b))
        assert abs(val - mp.mpf(2) ** (ell + mp.mpf("0.5"))) < mp.mpf("1e-50")

    # --------------------------------------------- logarithmic branch, lam=0
    # Second solution about z=1 for the spectral family at lambda=0 (c = a+b+1-1,
    # i.e. the local exponents at z=1 coincide). Values of
    # y2(1-z) = phi1(z) log(1-z) + sum ... , frozen for ell = 0,1,2.
    lines.append("struct LogBranchCase { int ell; double z, value; };")
    lines.append("inline constexpr LogBranchCase kPhi1TildeLog[] = {")
    for ell in (0, 1, 2):
        a, b, c = spectral_params(ell, mp.mpf(0))
        assert a + b == c  # degenerate connection: local exponent difference 0

        # Self-check: y2 solves the hypergeometric ODE in w:
        # w(1-w) y'' + [1 - (a+b+1) w] y' - a b y = 0.
        def y2(w, a=a, b=b):
            return log_branch_second_solution(a, b, w)

        w0 = mp.mpf("0.35")
        res = (w0 * (1 - w0) * mp.diff(y2, w0, 2)
               + (1 - (a + b + 1) * w0) * mp.diff(y2, w0)
               - a * b * y2(w0))
        # mp.diff's numerical 2nd derivative limits attainable residual; a wrong
        # branch would give an O(1) residual here.
        assert abs(res) < mp.mpf("1e-12"), (ell, res)

        for z in (mp.mpf("0.4"), mp.mpf("0.7"), mp.mpf("0.9")):
            val = log_branch_second_solution(a, b, 1 - z)
            lines.append(f"    {{{ell}, {f17(z)}, {f17(val)}}},")
    lines.append("};")
    lines.append("")

    # Log coefficient of the z=0-normalized second solution for (ell=1, lam=0):
    # phi0_tilde(z) = z^{-3/2} 2F1(-3/2, 1, -1/2; z) ~ A log(1-z), A = 3/2.
    A = -mp.gamma(mp.mpf("-0.5")) / (mp.gamma(mp.mpf("-1.5")) * mp.gamma(1))
    assert abs(A - mp.mpf("1.5")) < mp.mpf("1e-50")
    # Numerical confirmation by a two-point slope fit close to z=1 (modest
    # precision keeps the brute-force series affordable there).
    mp.mp.dps = 25
    z1, z2 = 1 - mp.mpf("1e-3"), 1 - mp.mpf("1e-4")
    f1 = z1 ** mp.mpf("-1.5") * brute_2f1(mp.mpf("-1.5"), 1, mp.mpf("-0.5"), z1, 10 ** 7)
    f2 = z2 ** mp.mpf("-1.5") * brute_2f1(mp.mpf("-1.5"), 1, mp.mpf("-0.5"), z2, 10 ** 7)
    Afit = (f2 - f1) / (mp.log(1 - z2) - mp.log(1 - z1))
    assert abs(Afit - mp.mpf("1.5")) < mp.mpf("0.01"), Afit
    mp.mp.dps = 60
    lines.append("// phi0_tilde(ell=1, lam=0): coefficient of log(1-z) as z->1.")
    lines.append("inline constexpr double kLogCoeffEll1Lam0 = 1.5;")
    lines.append("")

    # ------------------------------------------------------------- geometry
    lines.append("// Penrose image of (t=1, r=1): U = 0, V = arctan 2, Tp = R = arctan(2)/2.")
    lines.append(f"inline constexpr double kPenroseT1R1 = {f17(mp.atan(2) / 2)};")
    lines.append(f"inline constexpr double kAtan2Val = {f17(mp.atan(2))};")
    lines.append("")

    lines.append("}  // namespace golden")
    lines.append("")

    with open(OUT, "w") as fh:
        fh.write("\n".join(lines))
    print(f"wrote {OUT}: {sum(1 for l in lines if l.startswith('    {'))} table rows")


if __name__ == "__main__":
    main()
