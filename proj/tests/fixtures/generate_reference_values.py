#!/usr/bin/env python3
"""Generate frozen reference values for the test suite.

Special-function references are evaluated with mpmath at 40-digit precision.
Model ground truths (spectra, Lanczos coefficients, AGP norms) are computed with
an independent dense numpy implementation so the C++ library can be validated
against a second code path.

Run from the repository root:  python3 tests/fixtures/generate_reference_values.py
Output: tests/fixtures/reference_values.json
"""
import json
import math
import os
import sys

import numpy as np
import mpmath as mp

mp.mp.dps = 40

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "reference_values.json")


def f(x):
    """mpmath -> shortest round-trip python float"""
    return float(x)


# ---------------------------------------------------------------- special functions
def special_functions():
    j0_x = [0.1, 0.5, 1.0, 2.0, 4.5, 10.0, 25.3, 100.0, 12345.678, 400000.0]
    j1_x = j0_x
    jnu = [(2, 0.5), (2, 3.0), (3, 7.2), (5, 1.0), (5, 40.0),
           (7, 7.0), (10, 3.3), (10, 60.0), (15, 30.0), (20, 11.5)]
    erfc_x = [-3.0, -1.0, -0.25, 0.0, 0.3, 0.7071067811865476, 1.0, 2.0, 5.0, 10.0]
    # complete elliptic integrals in the *parameter* convention:
    # K(m) = int_0^{pi/2} (1 - m sin^2 th)^{-1/2} dth, likewise E(m).
    ell_m = [0.0, 0.1, 0.36, 0.5, 0.8, 0.99, -0.5, -4.0, -6400.0, -640000.0]
    return {
        "bessel_j0": [[x, f(mp.besselj(0, x))] for x in j0_x],
        "bessel_j1": [[x, f(mp.besselj(1, x))] for x in j1_x],
        "bessel_jnu": [[n, x, f(mp.besselj(n, x))] for (n, x) in jnu],
        "erfc": [[x, f(mp.erfc(x))] for x in erfc_x],
        "ellint_K_param": [[m, f(mp.ellipk(m))] for m in ell_m],
        "ellint_E_param": [[m, f(mp.ellipe(m))] for m in ell_m],
    }


# ---------------------------------------------------------------- autocorrelation families
# Family norm convention: N(mu) = int_0^inf (1/mu - t) C(t) e^{-mu t} dt  (unhalved).
def gaussian_norm(mu):
    mu = mp.mpf(mu)
    return mp.sqrt(mp.pi / 2) * mp.e**(mu**2 / 2) * (1 + mu**2) * mp.erfc(mu / mp.sqrt(2)) / mu - 1


def bessel_const_norm(alpha, mu):
    alpha, mu = mp.mpf(alpha), mp.mpf(mu)
    return (mp.sqrt(4 * alpha**2 / mu**2 + 1) - 1) / alpha**2 - 2 / (mu * mp.sqrt(4 * alpha**2 + mu**2))


def su2_cos_norm(L, alpha, mu):
    # cos^L(a t) = 2^-L sum_k C(L,k) cos((L-2k) a t); each line w*cos(w t) contributes
    # 2 w_k^2/(mu^2+w_k^2)^2 per unit weight in the unhalved convention.
    alpha, mu = mp.mpf(alpha), mp.mpf(mu)
    tot = mp.mpf(0)
    for k in range(L + 1):
        w = mp.binomial(L, k) / mp.mpf(2)**L
        om = (L - 2 * k) * alpha
        if om != 0:
            tot += w * 2 * om**2 / (mu**2 + om**2)**2
    return tot


def bessel_j0sq_norm(alpha, mu):
    alpha, mu = mp.mpf(alpha), mp.mpf(mu)
    m = -4 * alpha**2 / mu**2
    return -2 * (mp.ellipe(m) - (4 * alpha**2 / mu**2 + 1) * mp.ellipk(m)) / (mp.pi * mu**2 * (4 * alpha**2 / mu**2 + 1))


def xy_chain_norm(mu):
    mu = mp.mpf(mu)
    m = -64 / mu**2
    return ((mu**2 + 32) * mp.ellipk(m) - mu**2 * mp.ellipe(m)) / (8 * mp.pi * mu**2)


def sech_norm_quad(alpha, eta, mu):
    alpha, eta, mu = mp.mpf(alpha), mp.mpf(eta), mp.mpf(mu)
    g = lambda t: (1 / mu - t) * mp.sech(alpha * t)**eta * mp.e**(-mu * t)
    return mp.quad(g, [0, 1 / mu, 10 / mu, mp.inf])


def families():
    mus = [1.0, 0.1, 0.01]
    out = {
        "gaussian": [[m, f(gaussian_norm(m))] for m in mus + [10.0]],
        "bessel_const": [[1.0, m, f(bessel_const_norm(1.0, m))] for m in mus + [1e-3]],
        "su2_cos": [[L, 1.0, m, f(su2_cos_norm(L, 1.0, m))] for L in (2, 4, 8) for m in mus],
        "bessel_j0sq": [[1.0, m, f(bessel_j0sq_norm(1.0, m))] for m in mus],
        "xy_chain": [[m, f(xy_chain_norm(m))] for m in mus],
        "sech_quadrature": [[1.0, 1.0, m, f(sech_norm_quad(1, 1, m))] for m in mus]
                         + [[4.0, 5.0, m, f(sech_norm_quad(4, 5, m))] for m in (1.0, 0.1)],
    }
    # gaussian quadrature sanity at mu=1 (verifies the closed form once more)
    q = mp.quad(lambda t: (1 - t) * mp.e**(-t**2 / 2) * mp.e**(-t), [0, 1, 10, mp.inf])
    assert abs(q - gaussian_norm(1)) < mp.mpf("1e-25"), (q, gaussian_norm(1))
    # critical-Ising autocorrelation samples: C_d(t) = J_{2d}(2t)^2 - J_{2d+1}(2t) J_{2d-1}(2t)
    samples = []
    for d in (0, 1, 2):
        for t in (0.0, 0.5, 1.0, 2.5, 7.3):
            nu = 2 * d
            v = mp.besselj(nu, 2 * t)**2 - mp.besselj(nu + 1, 2 * t) * mp.besselj(nu - 1, 2 * t)
            samples.append([d, t, f(v)])
    out["ising_critical_samples"] = samples
    # moment-series cross-check values (operator convention = half the family value)
    out["gaussian_moment_series_mu10"] = {
        "series_order3": f(mp.mpf(1) / 10**4 - 2 * 3 / mp.mpf(10)**6 + 3 * 15 / mp.mpf(10)**8),
        "half_family_norm": f(gaussian_norm(10) / 2),
    }
    return out


# ---------------------------------------------------------------- dense spin models (numpy)
I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def kron_site(op, i, L):
    m = np.array([[1.0 + 0j]])
    for s in range(L):
        m = np.kron(m, op if s == i else I2)
    return m


def kron_two(op1, i, op2, j, L):
    m = np.array([[1.0 + 0j]])
    for s in range(L):
        m = np.kron(m, op1 if s == i else (op2 if s == j else I2))
    return m


def op_norm_sq(m):
    d = m.shape[0]
    return float(np.real(np.trace(m.conj().T @ m)) / d)


def exact_norm(H, dH, mu):
    """(1/D) sum_{m != n} w^2/(mu^2+w^2)^2 |<m|dH|n>|^2  (unnormalized deformation)."""
    E, V = np.linalg.eigh(H)
    M = V.conj().T @ dH @ V
    D = len(E)
    W = E[:, None] - E[None, :]
    P = np.abs(M)**2
    np.fill_diagonal(P, 0.0)
    num = W**2
    den = (mu**2 + W**2)**2
    den[den == 0] = 1.0
    wt = num / den
    return float(np.sum(wt * P) / D)


def spectral_nodes(H, O0):
    """frequency measure of the Liouvillian restricted to the Krylov space of O0.

    Returns (omegas, weights) of the merged discrete measure; sum(weights) = (O0|O0).
    """
    E, V = np.linalg.eigh(H)
    M = V.conj().T @ O0 @ V
    D = len(E)
    W = (E[:, None] - E[None, :]).ravel()
    P = (np.abs(M)**2).ravel() / D
    order = np.argsort(W, kind="stable")
    W, P = W[order], P[order]
    scale = max(np.max(np.abs(W)), 1.0)
    tol = 1e-12 * scale
    oms, wts = [], []
    i = 0
    n = len(W)
    while i < n:
        j = i
        acc_w, acc_om = 0.0, 0.0
        while j < n and W[j] - W[i] <= tol:
            acc_w += P[j]
            acc_om += W[j] * P[j]
            j += 1
        if acc_w > 0:
            oms.append(acc_om / acc_w)
            wts.append(acc_w)
        i = j
    oms = np.array(oms)
    wts = np.array(wts)
    keep = wts > 1e-24 * np.sum(wts)
    return oms[keep], wts[keep]


def spectral_lanczos(oms, wts, max_steps=None, tol=1e-8):
    """Lanczos on diag(oms) with start vector sqrt(wts) (normalized); full reorth."""
    v0 = np.sqrt(wts)
    v0 = v0 / np.linalg.norm(v0)
    basis = [v0]
    bs = []
    prev = None
    cur = v0
    bmax = 1.0
    steps = max_steps if max_steps is not None else len(oms) + 5
    for _ in range(steps):
        w = oms * cur
        if prev is not None:
            w = w - bs[-1] * prev
        B = np.array(basis)
        w = w - B.T @ (B @ w)
        w = w - B.T @ (B @ w)
        b = np.linalg.norm(w)
        if b <= tol * max(1.0, bmax):
            break
        bmax = max(bmax, b)
        bs.append(b)
        prev = cur
        cur = w / b
        basis.append(cur)
    return np.array(bs)


def solve_alpha(bs, mu, n_unknowns=None):
    K = len(bs)
    if K == 0:
        return np.zeros(0)
    bb = lambda i: bs[i - 1] if 1 <= i <= K else 0.0
    M = (K - 1) // 2 if K % 2 == 1 else K // 2 - 1
    n = (M + 1) if n_unknowns is None else n_unknowns
    T = np.zeros((n, n))
    for k in range(n):
        T[k, k] = bb(2 * k + 1)**2 + bb(2 * k + 2)**2 + mu**2
        if k + 1 < n:
            T[k, k + 1] = T[k + 1, k] = bb(2 * k + 2) * bb(2 * k + 3)
    rhs = np.zeros(n)
    rhs[0] = -bb(1)
    return np.linalg.solve(T, rhs)


def build_ising_periodic(L, h):
    H = np.zeros((2**L, 2**L), dtype=complex)
    for i in range(L):
        H += kron_two(SZ, i, SZ, (i + 1) % L, L)
        H += h * kron_site(SX, i, L)
    dH = sum(kron_site(SX, i, L) for i in range(L))
    return H, dH


def build_xxz_open(L, delta):
    H = np.zeros((2**L, 2**L), dtype=complex)
    dH = np.zeros((2**L, 2**L), dtype=complex)
    for i in range(L - 1):
        H += kron_two(SX, i, SX, i + 1, L) + kron_two(SY, i, SY, i + 1, L)
        zz = kron_two(SZ, i, SZ, i + 1, L)
        H += delta * zz
        dH += zz
    return H, dH


def build_chaotic_ising(L, hx, hz):
    H = np.zeros((2**L, 2**L), dtype=complex)
    for i in range(L):
        H += kron_two(SZ, i, SZ, (i + 1) % L, L)
        H += hx * kron_site(SX, i, L) + hz * kron_site(SZ, i, L)
    dH = sum(kron_site(SX, i, L) for i in range(L))
    return H, dH


def build_four_body(lam):
    L = 4
    H = np.zeros((16, 16), dtype=complex)
    for i in range(4):
        H += kron_two(SX, i, SX, (i + 1) % 4, L)
    H += lam * (kron_site(SZ, 1, L) + kron_site(SZ, 2, L))
    dH = kron_site(SZ, 1, L) + kron_site(SZ, 2, L)
    return H, dH


def build_lmg(S, J):
    d = int(round(2 * S)) + 1
    mvals = np.array([S - k for k in range(d)], dtype=float)
    Sz = np.diag(mvals).astype(complex)
    Sp = np.zeros((d, d), dtype=complex)
    for k in range(1, d):
        m = mvals[k]
        Sp[k - 1, k] = math.sqrt(S * (S + 1) - m * (m + 1))
    Sx = (Sp + Sp.conj().T) / 2
    X = Sx / S
    Z2 = (Sz / S) @ (Sz / S)
    H = X + 2 * J * Z2
    dH = Z2
    return H, dH


def lmg_structural_kdim(S, J, tol_rel=1e-10):
    """Exact-arithmetic Krylov dimension of Z^2 under the LMG Liouvillian.

    The Hamiltonian commutes with the spin-flip parity (pi rotation about x) and
    Z^2 is parity-even, so the frequency support consists of within-block gaps
    plus the zero mode.  Diagonalizing the parity blocks separately avoids the
    cross-block mixing that double-precision eigensolvers introduce for
    quasi-degenerate parity doublets.
    """
    d = int(round(2 * S)) + 1
    mvals = [S - k for k in range(d)]
    idx = {m: i for i, m in enumerate(mvals)}
    H, _ = build_lmg(S, J)
    even, odd = [], []
    for m in mvals:
        if m > 0:
            v = np.zeros(d)
            v[idx[m]] = v[idx[-m]] = 1 / math.sqrt(2)
            even.append(v)
            w = np.zeros(d)
            w[idx[m]], w[idx[-m]] = 1 / math.sqrt(2), -1 / math.sqrt(2)
            odd.append(w)
        elif m == 0:
            v = np.zeros(d)
            v[idx[0.0]] = 1
            even.append(v)
    oms = [0.0]
    for block in (np.array(even).T, np.array(odd).T):
        E = np.linalg.eigvalsh(np.real(block.T @ H @ block))
        for i in range(len(E)):
            for j in range(len(E)):
                if i != j:
                    oms.append(E[i] - E[j])
    oms = np.sort(np.array(oms))
    tol = tol_rel * max(1.0, np.max(np.abs(oms)))
    return int(1 + np.sum(np.diff(oms) > tol))


def models():
    out = {}

    # two_level exact norms on the (lambda, delta) grid, mu = 0
    grid = []
    for lam in (0.0, 0.5, 1.0, 1.5, 2.0):
        for dl in (0.0, 0.5, 1.0, 1.5, 2.0):
            if lam == 0 and dl == 0:
                continue
            H = lam * SZ + dl * SX
            grid.append([lam, dl, exact_norm(H, SZ, 0.0)])
    out["two_level_grid_mu0"] = grid

    # four_body: exact normalized norms and spectral Lanczos coefficients
    fb = {}
    for lam in (0.5, 1.0, 1.5):
        H, dH = build_four_body(lam)
        nrm2 = op_norm_sq(dH)
        O0 = dH / math.sqrt(nrm2)
        oms, wts = spectral_nodes(H, O0)
        bs = spectral_lanczos(oms, wts)
        a = solve_alpha(bs, 0.25)
        fb[str(lam)] = {
            "deformation_norm_sq": nrm2,
            "b": [float(x) for x in bs],
            "a": [float(x) for x in a],
            "norm_sq_normalized": float(np.sum(a**2)),
            "exact_norm_normalized": exact_norm(H, dH, 0.25) / nrm2,
        }
    out["four_body_mu025"] = fb

    # chain models at the default regulator: exact oracle norms
    chain = {}
    for (name, builder, L, kw) in [
        ("ising_periodic_L6", build_ising_periodic, 6, {"h": 1.0}),
        ("ising_periodic_L8", build_ising_periodic, 8, {"h": 1.0}),
        ("xxz_open_L6", build_xxz_open, 6, {"delta": 1.0}),
        ("xxz_open_L8", build_xxz_open, 8, {"delta": 1.0}),
        ("chaotic_ising_L6", build_chaotic_ising, 6,
         {"hx": 1.0, "hz": (math.sqrt(5) + 1) / 4}),
    ]:
        H, dH = builder(L, **kw)
        mu = L * 2.0**(-L)
        nrm2 = op_norm_sq(dH)
        chain[name] = {
            "L": L, "mu": mu,
            "deformation_norm_sq": nrm2,
            "exact_norm_unnormalized": exact_norm(H, dH, mu),
            "exact_norm_normalized": exact_norm(H, dH, mu) / nrm2,
        }
    out["chain_models"] = chain

    # integrable Ising: spectral Lanczos b-lists at L = 6, 8, 10 (h = 1)
    ising = {}
    for L in (6, 8, 10):
        H, dH = build_ising_periodic(L, 1.0)
        O0 = dH / math.sqrt(op_norm_sq(dH))
        oms, wts = spectral_nodes(H, O0)
        bs = spectral_lanczos(oms, wts)
        K = len(bs)
        Mcount = (K - 1) // 2 if K % 2 == 1 else K // 2 - 1
        ising[str(L)] = {"b": [float(x) for x in bs], "K": K, "k_dim": K + 1,
                         "M": Mcount, "n_nodes": int(len(oms))}
    out["ising_spectral"] = ising

    # LMG: calibration values
    lmg = {}
    for S in (10, 30):
        H0, dH = build_lmg(S, 0.25)
        z = math.sqrt(op_norm_sq(dH))
        entry = {"z": z, "mu": (2 * S + 1) * 2.0**(-(2 * S + 1))}
        for J in (0.25, 0.5, 1.0):
            H, dH = build_lmg(S, J)
            O0 = dH / z
            oms, wts = spectral_nodes(H, O0)
            bs2 = spectral_lanczos(oms, wts, max_steps=2)
            entry[f"b1_J{J}"] = float(bs2[0])
            entry[f"b2_J{J}"] = float(bs2[1])
            entry[f"n_nodes_J{J}"] = int(len(oms))
            entry[f"structural_kdim_J{J}"] = lmg_structural_kdim(S, J)
        # exact norm at J = 0.5 for oracle cross-validation
        H, dH = build_lmg(S, 0.5)
        entry["exact_norm_normalized_J05"] = exact_norm(H, dH, entry["mu"]) / z**2
        lmg[str(S)] = entry
    out["lmg"] = lmg
    return out


def main():
    data = {
        "_provenance": "special functions: mpmath dps=40; models: independent numpy dense implementation",
        "special_functions": special_functions(),
        "families": families(),
        "models": models(),
    }
    with open(OUT, "w") as fh:
        json.dump(data, fh, indent=1)
    print(f"wrote {OUT}")

    # ------------- verification summary (printed, not frozen) -------------
    fam = data["families"]
    g10 = dict((m, v) for m, v in fam["gaussian"])[10.0]
    ms = fam["gaussian_moment_series_mu10"]
    print(f"criterion-10 check: series(3)={ms['series_order3']:.9e}  half-quadrature={ms['half_family_norm']:.9e}"
          f"  diff={abs(ms['series_order3'] - ms['half_family_norm']):.2e} (last term 4.5e-7)")
    # scaling slopes
    def fit_slope(Ls, vals):
        x = np.array(Ls, dtype=float)
        y = np.log(np.array(vals))
        n = len(x) // 2
        x, y = x[n:], y[n:]
        A = np.vstack([x, np.ones_like(x)]).T
        return float(np.linalg.lstsq(A, y, rcond=None)[0][0])
    Ls = list(range(10, 17))
    gs = fit_slope(Ls, [f(gaussian_norm(L * 2.0**-L)) for L in Ls])
    print(f"gaussian scaling slope L=10..16: {gs:.4f} vs log2={math.log(2):.4f} "
          f"({abs(gs - math.log(2)) / math.log(2) * 100:.1f}% off)")
    sLs = [10, 12, 14, 16]
    ss = fit_slope(sLs, [f(su2_cos_norm(L, 1.0, L * 2.0**-L)) for L in sLs])
    print(f"su2_cos scaling slope: {ss:.4f} (threshold 0.5*log2 = {0.5 * math.log(2):.4f})")
    bc = f(bessel_const_norm(1.0, 1e-3))
    lead = 1 / 1e-3 - 1
    print(f"bessel_const mu=1e-3: {bc:.6f} vs leading {lead:.6f} "
          f"({abs(bc - lead) / lead * 100:.4f}%)")
    # model summaries
    isg = data["models"]["ising_spectral"]
    print("ising_periodic h=1: " + ", ".join(
        f"L={L}: K={isg[L]['K']} M={isg[L]['M']}" for L in ("6", "8", "10")))
    pref = min(isg[L]["K"] for L in ("6", "8", "10"))
    b6, b8, b10 = (np.array(isg[L]["b"][:pref]) for L in ("6", "8", "10"))
    print(f"  b prefix max dev 6v8: {np.max(np.abs(b6 - b8)):.2e}  8v10: {np.max(np.abs(b8 - b10)):.2e}")
    lmg = data["models"]["lmg"]
    for S in ("10", "30"):
        e = lmg[S]
        print(f"LMG S={S}: z={e['z']:.5f} b1(J=.25)={e['b1_J0.25']:.5f} "
              f"nodes(J=.25)={e['n_nodes_J0.25']} nodes(J=1)={e['n_nodes_J1.0']}")
        for J in (0.25, 0.5, 1.0):
            tab = math.sqrt(0.074 * J**2 + 0.027) if S == "10" else math.sqrt(0.0079 * J**2 + 0.0030)
            print(f"   b2(J={J}) = {e[f'b2_J{J}']:.5f}  (table {tab:.5f}, "
                  f"dev {abs(e[f'b2_J{J}'] - tab) / tab * 100:.1f}%)")
    fb = data["models"]["four_body_mu025"]
    for lam in ("0.5", "1.0", "1.5"):
        r = fb[lam]
        gap = abs(r["norm_sq_normalized"] - r["exact_norm_normalized"]) / r["exact_norm_normalized"]
        print(f"four_body lam={lam}: krylov-vs-exact gap {gap:.2e}")


if __name__ == "__main__":
    sys.exit(main())
