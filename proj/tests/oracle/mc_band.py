#!/usr/bin/env python3
"""Monte-Carlo reference bands for the noisy synthetic-backend sanity check.

Simulates the same generative model the acceptance fixture uses:
per instance a latent SC value and two latent PQ values are drawn uniformly
from [0, 10]; the human side is the latent normalized and snapped to the
7-level three-rater-average grid {0, 1/6, ..., 1}; the metric side is each
latent plus an integer noise term uniform on [-2, 2], rounded and clamped to
[0, 10], min-aggregated and normalized. Task-level value is the Fisher-Z mean
of per-model Spearman correlations (3 models x 50 instances).

Run:  python3 mc_band.py
Output: 99% band (0.5% / 99.5% quantiles) per aspect over 1000 reps,
frozen into tests/acceptance.cpp.
"""
import numpy as np
from scipy.stats import spearmanr

REPS = 1000
MODELS = 3
N = 50
NOISE = 2
rng = np.random.default_rng(20240613)


def fisher_mean(rs):
    rs = np.clip(rs, -(1 - 1e-7), 1 - 1e-7)
    return np.tanh(np.mean(np.arctanh(rs)))


def one_rep():
    sc_r, pq_r, ov_r = [], [], []
    for _ in range(MODELS):
        l_sc = rng.uniform(0, 10, N)
        l_p1 = rng.uniform(0, 10, N)
        l_p2 = rng.uniform(0, 10, N)
        h_sc = np.round(6 * l_sc / 10) / 6
        h_pq = np.round(6 * np.minimum(l_p1, l_p2) / 10) / 6
        h_ov = np.sqrt(h_sc * h_pq)
        m_sc = np.clip(np.round(l_sc) + rng.integers(-NOISE, NOISE + 1, N), 0, 10) / 10
        b1 = np.clip(np.round(l_p1) + rng.integers(-NOISE, NOISE + 1, N), 0, 10)
        b2 = np.clip(np.round(l_p2) + rng.integers(-NOISE, NOISE + 1, N), 0, 10)
        m_pq = np.minimum(b1, b2) / 10
        m_ov = np.sqrt(m_sc * m_pq)
        sc_r.append(spearmanr(m_sc, h_sc).statistic)
        pq_r.append(spearmanr(m_pq, h_pq).statistic)
        ov_r.append(spearmanr(m_ov, h_ov).statistic)
    return fisher_mean(sc_r), fisher_mean(pq_r), fisher_mean(ov_r)


vals = np.array([one_rep() for _ in range(REPS)])
for i, name in enumerate(["SC", "PQ", "Overall"]):
    lo, hi = np.quantile(vals[:, i], [0.005, 0.995])
    print(f"{name}: 99% band [{lo:.6f}, {hi:.6f}]  median {np.median(vals[:, i]):.4f}")
