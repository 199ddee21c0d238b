"""Independent brute-force oracle for the canonical instances.

Enumerates every atom with mpmath at 50 digits, straight from the
definitions, and prints the constants frozen into the C++ tests.
Run: python3 tests/oracle/canonical_values.py
"""
import itertools
from mpmath import mp, mpf, log, sqrt, exp

mp.dps = 50


def zero_one(w, z):
    return mpf(0) if w == z else mpf(1)


def inst_a():
    # Z = {0,1} uniform, n = 2, ERM on 0/1 loss, ties -> lowest index.
    pz = {0: mpf(1) / 2, 1: mpf(1) / 2}
    n = 2
    joint = {}
    for zv in itertools.product([0, 1], repeat=n):
        pzv = pz[zv[0]] * pz[zv[1]]
        risks = [sum(zero_one(w, z) for z in zv) / n for w in (0, 1)]
        best = min(risks)
        w = risks.index(best)
        joint[(w, zv)] = joint.get((w, zv), 0) + pzv
    return pz, n, joint


def standard_measures(pz, n, joint):
    pzn = {}
    pw = {}
    for (w, zv), p in joint.items():
        pzn[zv] = pzn.get(zv, 0) + p
        pw[w] = pw.get(w, 0) + p
    iota = {k: log(p / (pw[k[0]] * pzn[k[1]])) for k, p in joint.items() if p > 0}
    mi = sum(joint[k] * iota[k] for k in iota)
    m2 = sqrt(sum(joint[k] * (iota[k] - mi) ** 2 for k in iota))
    minf = max(abs(iota[k] - mi) for k in iota)
    imax = max(iota.values())
    cond = lambda w, zv: joint.get((w, zv), 0) / pzn[zv]
    leak = log(sum(max(cond(w, zv) for zv in pzn) for w in pw))
    # alpha-MI, alpha = 2
    a = mpf(2)
    inner = {w: sum(pzn[zv] * (cond(w, zv) / pw[w]) ** a for zv in pzn) for w in pw}
    ami2 = a / (a - 1) * log(sum(pw[w] * inner[w] ** (1 / a) for w in pw))
    # Renyi D_2(P_WZ || P_W P_Z)
    d2 = 1 / (a - 1) * log(sum(pw[w] * pzn[zv] * (cond(w, zv) / pw[w]) ** a
                               for w in pw for zv in pzn))
    pl = {w: sum(pz[z] * zero_one(w, z) for z in pz) for w in pw}
    egen = sum(p * (pl[w] - sum(zero_one(w, z) for z in zv) / n) for (w, zv), p in joint.items())
    return dict(mi=mi, m2=m2, minf=minf, imax=imax, leak=leak, ami2=ami2, d2=d2,
                egen=egen, pw=pw)


def inst_b():
    # Z = {0,1} uniform, n = 1, W = Z(S).
    pz = {0: mpf(1) / 2, 1: mpf(1) / 2}
    n = 1
    atoms = []  # (w, zt, s, mass, p(w|zt,s), p(w|zt))
    for zt in itertools.product([0, 1], repeat=2 * n):
        for s in itertools.product([0, 1], repeat=n):
            sel = tuple(zt[i + s[i] * n] for i in range(n))
            for w in (0, 1):
                pwzs = mpf(1) if w == sel[0] else mpf(0)
                pwz = sum((mpf(1) if w == zt[si * n] else 0) for si in (0, 1)) / 2
                mass = pz[zt[0]] * pz[zt[1]] * mpf(1) / 2 * pwzs
                atoms.append((w, zt, s, mass, pwzs, pwz))
    return pz, n, atoms


def subset_measures(pz, n, atoms):
    supp = [a for a in atoms if a[3] > 0]
    cmi = sum(a[3] * log(a[4] / a[5]) for a in supp)
    m2 = sqrt(sum(a[3] * (log(a[4] / a[5]) - cmi) ** 2 for a in supp))
    alpha = mpf(2)
    # conditional Renyi: E_{P_Zt P_W|Zt P_S}[(p/q)^alpha] / (alpha-1)
    pzt = {}
    for a in atoms:
        pzt[a[1]] = pz[a[1][0]] * pz[a[1][1]]
    ps = mpf(1) / 2 ** n
    tot = 0
    for a in atoms:
        if a[5] > 0:
            tot += pzt[a[1]] * a[5] * ps * (a[4] / a[5]) ** alpha
    crd2 = log(tot) / (alpha - 1)
    # conditional alpha-MI
    outer = 0
    for zt in pzt:
        mid = 0
        for w in (0, 1):
            rows = [a for a in atoms if a[1] == zt and a[0] == w]
            q = rows[0][5]
            if q == 0:
                continue
            inner = sum(ps * (a[4] / q) ** alpha for a in rows)
            mid += q * inner ** (1 / alpha)
        outer += pzt[zt] * mid ** alpha
    cami2 = log(outer) / (alpha - 1)
    return dict(cmi=cmi, m2=m2, crd2=crd2, cami2=cami2)


if __name__ == "__main__":
    pz, n, joint = inst_a()
    a = standard_measures(pz, n, joint)
    s2n = mpf(1) / 4 * 2 / n  # 2 sigma^2 / n, sigma = 1/2
    d = mpf("0.1")
    print("erm_n2")
    for k in ("mi", "m2", "minf", "imax", "leak", "ami2", "d2", "egen"):
        print(f"  {k:6s} {mp.nstr(a[k], 20)}")
    print("  avg     ", mp.nstr(sqrt(s2n * a["mi"]), 20))
    print("  pacb00  ", mp.nstr(sqrt(s2n * (log(mpf(4) / 3) + log(1 / d))), 20))
    print("  pacbm1  ", mp.nstr(sqrt(s2n * (a["mi"] / (d / 2) + log(2 / d))), 20))
    print("  sddens  ", mp.nstr(sqrt(s2n * (log(4) + log(1 / d))), 20))
    print("  sdmom2  ", mp.nstr(sqrt(s2n * (a["mi"] + a["m2"] / sqrt(d / 2) + log(2 / d))), 20))
    print("  sdmominf", mp.nstr(sqrt(s2n * (a["mi"] + a["minf"] + log(2 / d))), 20))
    print("  sdleak  ", mp.nstr(sqrt(s2n * (a["leak"] + 2 * log(2 / d))), 20))
    print("  sdrenyi2", mp.nstr(sqrt(s2n * (a["d2"] + 2 * log(2 / d))), 20))
    # tail bound, delta = 0.3: gamma just above ln(4/3): P[iota >= gamma] = 1/4
    d3 = mpf("0.3")
    g = log(mpf(4) / 3)
    print("  tail.3  ", mp.nstr(sqrt(s2n * (g + log(2 / (d3 - mpf(1) / 4)))), 20))
    g = log(mpf(4))
    print("  tail.3b ", mp.nstr(sqrt(s2n * (g + log(2 / d3))), 20))
    pz, n, atoms = inst_b()
    b = subset_measures(pz, n, atoms)
    print("identity_n1")
    for k in ("cmi", "m2", "crd2", "cami2"):
        print(f"  {k:6s} {mp.nstr(b[k], 20)}")
    print("  cmiavg  ", mp.nstr(sqrt(2 * b["cmi"]), 20))
