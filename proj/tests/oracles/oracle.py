# Copyright 2026 The catlink Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Reference values frozen into the C++ tests.

Built without any of the library's code paths: beam splitters are dense
matrix exponentials of the two-mode generator on a padded space,
displacements use closed-form Laguerre matrix elements, and homodyne
windows are integrated with adaptive quadrature.

    python3 tests/oracles/oracle.py [--check]
"""

import math
import sys

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, eval_hermite, erf

N = 12
D = N + 1
PAD = 12


def ket(n, d=D):
    v = np.zeros(d, complex)
    v[n] = 1.0
    return v


def coherent(alpha, d=D):
    c = np.array([np.exp(-abs(alpha) ** 2 / 2) * alpha ** n / math.sqrt(math.factorial(n)) for n in range(d)], complex)
    return c / np.linalg.norm(c)


def cat(alpha, parity):
    v = coherent(alpha) + parity * coherent(-alpha)
    return v / np.linalg.norm(v)


def squeezed(r, phase):
    c = np.zeros(D, complex)
    for n in range(0, N // 2 + 1):
        c[2 * n] = ((-np.exp(1j * phase) * np.tanh(r)) ** n * math.sqrt(math.factorial(2 * n))
                    / (2 ** n * math.factorial(n)) / math.sqrt(np.cosh(r)))
    return c / np.linalg.norm(c)


def tmss(r, phase=0.0):
    v = np.zeros((D, D), complex)
    for n in range(D):
        v[n, n] = (np.exp(1j * phase) * np.tanh(r)) ** n / np.cosh(r)
    return v / np.linalg.norm(v)


def displacement(beta):
    """<m|D(beta)|n> from the associated Laguerre closed form."""
    out = np.zeros((D, D), complex)
    for m in range(D):
        for n in range(D):
            if m >= n:
                out[m, n] = (math.sqrt(math.factorial(n) / math.factorial(m)) * beta ** (m - n)
                             * eval_genlaguerre(n, m - n, abs(beta) ** 2))
            else:
                out[m, n] = (math.sqrt(math.factorial(m) / math.factorial(n)) * (-np.conj(beta)) ** (n - m)
                             * eval_genlaguerre(m, n - m, abs(beta) ** 2))
            out[m, n] *= np.exp(-abs(beta) ** 2 / 2)
    return out


_BS = {}


def beam_splitter(T, phase=0.0):
    """Two-mode unitary on (D x D), truncated from a padded exponential.

    a1^dag -> sqrt(T) a1^dag + e^{i phase} sqrt(1-T) a2^dag.
    """
    key = (T, phase)
    if key not in _BS:
        d = D + PAD
        a = np.diag(np.sqrt(np.arange(1, d)), 1).astype(complex)
        i = np.eye(d)
        a1 = np.kron(a, i)
        a2 = np.kron(i, a)
        theta = math.acos(math.sqrt(T))
        g = theta * (np.exp(1j * phase) * a2.conj().T @ a1 - np.exp(-1j * phase) * a1.conj().T @ a2)
        u = expm(g)
        keep = [m * d + n for m in range(D) for n in range(D)]
        _BS[key] = u[np.ix_(keep, keep)]
    return _BS[key]


def apply_pair(psi, u, i, j):
    nm = psi.ndim
    perm = [i, j] + [k for k in range(nm) if k not in (i, j)]
    x = np.transpose(psi, perm)
    shape = x.shape
    x = (u @ x.reshape(D * D, -1)).reshape(shape)
    return np.transpose(x, np.argsort(perm))


def apply_one(psi, op, i):
    return np.moveaxis(np.tensordot(op, psi, axes=([1], [i])), 0, i)


def click(eta=1.0):
    return np.diag(1.0 - (1.0 - eta) ** np.arange(D))


def hermite_fn(n, x):
    return eval_hermite(n, x) * np.exp(-x * x / 2) / math.sqrt(2 ** n * math.factorial(n) * math.sqrt(math.pi))


def homodyne_window(delta, center=0.0):
    e = np.zeros((D, D))
    for m in range(D):
        for n in range(m, D):
            v = quad(lambda x: hermite_fn(m, x) * hermite_fn(n, x), center - delta, center + delta,
                     epsabs=1e-13, epsrel=1e-12, limit=200)[0]
            e[m, n] = e[n, m] = v
    return e.astype(complex)


def fid(rho, v):
    return float(np.real(v.conj() @ rho @ v))


# ------------------------------------------------------------ stage 1

def stage1(r1, beta, eta=1.0):
    psi = apply_one(tmss(r1), displacement(beta), 0)
    rho = np.einsum('nm,nk->mk', click(eta) @ psi, psi.conj())
    p = np.trace(rho).real
    return p, rho / p


def dv_qubit(rho):
    block = rho[:2, :2]
    weight = np.trace(block).real
    w, v = np.linalg.eigh(block / weight)
    q = v[:, -1]
    q = q * np.exp(-1j * np.angle(q[0])) if abs(q[0]) > 1e-12 else q * np.exp(-1j * np.angle(q[1]))
    return q, 1.0 - weight, block / weight


# ------------------------------------------------------------ stage 2

def hybrid(r2, rs, R, eta=1.0):
    psi = np.einsum('ab,c,d->abcd', tmss(r2), squeezed(rs, math.pi), ket(0))
    psi = apply_pair(psi, beam_splitter(1 - R), 2, 3)
    psi = apply_pair(psi, beam_splitter(0.5), 1, 3)
    rho = np.einsum('nm,akcm,bken->acbe', click(eta), psi, psi.conj()).reshape(D * D, D * D)
    p = np.trace(rho).real
    return p, rho / p


def subtracted(rs, R, eta=1.0):
    psi = np.einsum('a,b->ab', squeezed(rs, math.pi), ket(0))
    psi = apply_pair(psi, beam_splitter(1 - R), 0, 1)
    rho = np.einsum('nm,am,bn->ab', click(eta), psi, psi.conj())
    p = np.trace(rho).real
    return p, rho / p


def hybrid_target(alpha):
    v = np.kron(ket(0), cat(alpha, -1)) + np.kron(ket(1), cat(alpha, 1))
    return v / np.linalg.norm(v)


ALPHAS = [0.01 * k for k in range(1, 201)]


def best_alpha(score):
    best = (-1.0, 0.0)
    for a in ALPHAS:
        v = cat(a, 1)  # tail check mirrors the library: skip if |C+>/|C-> leak above N
        tail = sum(np.exp(-a * a) * a ** (2 * n) / math.factorial(n) for n in range(D, D + 60))
        if tail > 1e-6:
            continue
        f = score(a)
        if f > best[0]:
            best = (f, a)
    return best


# ------------------------------------------------------------ stage 3

def bsm_element(R, delta, ideal=False, other=True):
    u = beam_splitter(0.5)
    p_other = np.outer(ket(0), ket(0)) if other else np.eye(D)
    if ideal:
        e = np.kron(p_other, np.outer(ket(1), ket(1)))
        return u.conj().T @ e @ u
    tap = beam_splitter(1 - R)
    win = homodyne_window(delta)
    cols = []
    for k in range(D * D):
        v = u[:, k].reshape(D, D)
        w = np.einsum('pq,t->pqt', v, ket(0))
        cols.append(apply_pair(w, tap, 1, 2).ravel())
    w = np.array(cols).T
    e3 = np.kron(np.kron(p_other, win), click())
    return w.conj().T @ e3 @ w


def bsm(rho_in, rho_ac, m):
    mt = np.einsum('iajb,ji->ab', m.reshape(D, D, D, D), rho_in)
    out = np.einsum('ab,bcae->ce', mt, rho_ac.reshape(D, D, D, D))
    p = np.trace(out).real
    return p, out / p


def loss(rho, eta):
    out = np.zeros_like(rho)
    for k in range(D):
        K = np.zeros((D, D))
        for n in range(k, D):
            K[n - k, n] = math.sqrt(math.comb(n, k)) * eta ** ((n - k) / 2) * (1 - eta) ** (k / 2)
        out += K @ rho @ K.T
    return out


def suite(r1, r2, delta, eta_out, ideal=False, analytic=False):
    lam = math.tanh(r1)
    betas = [0, lam, -lam, 1j * lam, -1j * lam, 1.0]
    p2, rac = hybrid(r2, 0.3, 0.05)
    f_h, alpha = best_alpha(lambda a: fid(rac, hybrid_target(a)))
    if analytic:
        t = hybrid_target(alpha)
        rac, p2 = np.outer(t, t.conj()), 1.0
    m = bsm_element(0.05, delta, ideal=ideal)
    cp, cm = cat(alpha, 1), cat(alpha, -1)
    rows = []
    for b in betas:
        p1, ri = stage1(r1, b)
        q, leak, _ = dv_qubit(ri)
        p3, rc = bsm(ri, rac, m)
        rc = loss(rc, eta_out)
        t = q[0] * cp + q[1] * cm
        rows.append((b, fid(rc, t), p1 * p2 * p3, p1, p3))
    return alpha, f_h, p2, rows


FROZEN = {
    'stage1_r020_b015_probability': 0.0595150295925,
    'stage1_r020_b015_abs_c0': 0.606600009019,
    'stage1_r020_b015_abs_c1': 0.795007188054,
    'stage1_r020_b015_leakage': 0.0254942004678,
    'stage1_r012_b0_leakage': 0.0142628796352,
    'subtracted_probability': 0.00449028503028,
    'subtracted_odd_cat_fidelity': 0.966358194401,
    'subtracted_alpha': 0.93,
    'hybrid_r2_0_probability': 0.00228150250894,
    'hybrid_r2_0_cat_fidelity': 0.951222114374,
    'hybrid_probability': 0.00471843196405,
    'hybrid_fidelity': 0.950682218074,
    'hybrid_alpha': 0.65,
    'run_beta0_fidelity': 0.66152565989,
    'run_beta0_success': 5.81921684451e-07,
    'projector_beta0_fidelity': 0.922785646322,
}


def compute():
    v = {}
    p, rho = stage1(0.20, 0.15)
    q, leak, _ = dv_qubit(rho)
    v['stage1_r020_b015_probability'] = p
    v['stage1_r020_b015_abs_c0'] = abs(q[0])
    v['stage1_r020_b015_abs_c1'] = abs(q[1])
    v['stage1_r020_b015_leakage'] = leak
    v['stage1_r012_b0_leakage'] = dv_qubit(stage1(0.12, 0.0)[1])[1]

    p, rho = subtracted(0.30, 0.05)
    f, a = best_alpha(lambda al: fid(rho, cat(al, -1)))
    v['subtracted_probability'] = p
    v['subtracted_odd_cat_fidelity'] = f
    v['subtracted_alpha'] = a

    p, rho = hybrid(0.0, 0.30, 0.05)
    rc = np.einsum('acae->ce', rho.reshape(D, D, D, D))
    v['hybrid_r2_0_probability'] = p
    v['hybrid_r2_0_cat_fidelity'] = best_alpha(lambda al: fid(rc, cat(al, -1)))[0]

    p, rho = hybrid(0.07, 0.30, 0.05)
    f, a = best_alpha(lambda al: fid(rho, hybrid_target(al)))
    v['hybrid_probability'] = p
    v['hybrid_fidelity'] = f
    v['hybrid_alpha'] = a

    for delta in (0.5, 0.3):
        m = bsm_element(0.05, delta)
        r10 = np.outer(np.kron(ket(1), ket(0)), np.kron(ket(1), ket(0)))
        two = erf(delta) - 2 * delta * math.exp(-delta ** 2) / math.sqrt(math.pi)
        r11 = np.outer(np.kron(ket(1), ket(1)), np.kron(ket(1), ket(1)))
        assert abs(np.trace(m @ r10).real - 0.5 * 0.05 * erf(delta)) < 1e-9
        assert abs(np.trace(m @ r11).real - 0.5 * (0.05 ** 2 * erf(delta) + 2 * 0.05 * 0.95 * two)) < 1e-9

    rows = suite(0.12, 0.07, 0.5, 1.0)[3]
    v['run_beta0_fidelity'] = rows[0][1]
    v['run_beta0_success'] = rows[0][2]
    v['projector_beta0_fidelity'] = suite(0.12, 0.07, 0.5, 1.0, ideal=True)[3][0][1]
    for eta in (1.0, 0.9, 0.8, 0.7):
        rows = suite(0.12, 0.07, 0.5, eta)[3]
        v['suite_mean_fidelity_eta_%.1f' % eta] = float(np.mean([r[1] for r in rows]))
    return v


def main():
    values = compute()
    for key, value in values.items():
        print('%-36s %.12g' % (key, value))
    if '--check' in sys.argv:
        bad = [k for k, ref in FROZEN.items() if abs(values[k] - ref) > 1e-9 * max(1.0, abs(ref))]
        for k in bad:
            print('mismatch %s: oracle %.12g frozen %.12g' % (k, values[k], FROZEN[k]))
        sys.exit(1 if bad else 0)


if __name__ == '__main__':
    main()
