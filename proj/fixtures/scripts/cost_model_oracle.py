#!/usr/bin/env python3
# Copyright 2026 The ladder360 Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Closed-form timing/quality predictions for the simulated backend.

Prints the per-tier and average BD-PSNR, BDET, dT_S and dT_P values of every
reuse variant against ERP-Default for a 64x32, 2-frame input with the default
cost model as CSV. The acceptance suite reads the frozen copy in
fixtures/data/simulated_predictions.csv.
"""
import numpy as np
from scipy.interpolate import PchipInterpolator

KAPPA, RHO, R0, QA, QB, EPS = 1.0, 0.5, 40000.0, 50.0, 0.5, 0.1
FRAMES = 2
QPS = [22, 27, 32, 37, 42]
ERP_TIERS = [(16, 8), (32, 16), (64, 32)]


def full_time(w, h, q):
    return KAPPA * (w * h / 1e6) * FRAMES * (1 + (51 - q) / 51)


def rate(w, h, q):
    return R0 * (w * h / 1e6) * 2 ** (-q / 6)


def anchor_q(policy):
    return {"hq": min(QPS), "lq": max(QPS), "mq": QPS[(len(QPS) - 1) // 2]}[policy]


def nodes(variant, policy):
    """(tier, q, load, depth) for one tile."""
    out = []
    a = anchor_q(policy)
    n = len(ERP_TIERS)
    if variant == "default":
        return [(t, q, False, 0) for t in range(n) for q in QPS]
    for t in range(n):
        if variant == "crc":
            # anchor chain: tier 0 full, tier t anchor loads tier t-1 anchor;
            # the top tier only loads.
            anchor_depth = t
            if t == n - 1:
                out += [(t, q, True, t) for q in QPS]
                continue
            out.append((t, a, t > 0, anchor_depth))
            out += [(t, q, True, anchor_depth + 1) for q in QPS if q != a]
        else:  # pra
            out.append((t, a, False, 0))
            out += [(t, q, True, 1) for q in QPS if q != a]
    return out


def tier_geometry(cmp, t):
    w, h = ERP_TIERS[t]
    return (h // 2, h // 2, 6) if cmp else (w, h, 1)


def representation_table(variant, policy, cmp):
    """Per tier: list of (q, rate, quality, time) and list of node times."""
    table = {}
    for t in range(len(ERP_TIERS)):
        fw, fh, tiles = tier_geometry(cmp, t)
        reps, times = [], []
        for (tt, q, load, depth) in nodes(variant, policy):
            if tt != t:
                continue
            tau = full_time(fw, fh, q) * (RHO if load else 1.0)
            reps.append((q, tiles * rate(fw, fh, q), QA - QB * q - EPS * depth,
                         tiles * tau))
            times += [tau] * tiles
        reps.sort(key=lambda r: -r[0])
        table[t] = (reps, times)
    return table


def pchip_mean_diff(xr, yr, xt, yt):
    lo, hi = max(min(xr), min(xt)), min(max(xr), max(xt))
    ir = PchipInterpolator(xr, yr).integrate(lo, hi)
    it = PchipInterpolator(xt, yt).integrate(lo, hi)
    return (it - ir) / (hi - lo)


def bd_psnr(ref, test):
    return pchip_mean_diff(np.log10([r[1] for r in ref]), [r[2] for r in ref],
                           np.log10([r[1] for r in test]), [r[2] for r in test])


def bdet(ref, test):
    m = pchip_mean_diff([r[2] for r in ref], np.log10([r[3] for r in ref]),
                        [r[2] for r in test], np.log10([r[3] for r in test]))
    return (10 ** m - 1) * 100


def main():
    print("method,ref,resolution,bd_psnr_db,bdet_psnr_pct,delta_ts_pct,delta_tp_pct")
    ref = representation_table("default", "hq", False)
    for cmp in (False, True):
        for variant in ("crc", "pra"):
            for policy in ("hq", "mq", "lq"):
                test = representation_table(variant, policy, cmp)
                rows = []
                for t in range(len(ERP_TIERS)):
                    rr, rt = ref[t]
                    tr, tt = test[t]
                    rows.append((bd_psnr(rr, tr), bdet(rr, tr),
                                 (sum(tt) - sum(rt)) / sum(rt) * 100,
                                 (max(tt) - max(rt)) / max(rt) * 100))
                avg = tuple(np.mean([r[k] for r in rows]) for k in range(4))
                name = ("cmp-" if cmp else "erp-") + variant
                for label, r in zip(["HD", "4K", "8K", "Avg"], rows + [avg]):
                    vals = ",".join(f"{float(v):.17g}" for v in r)
                    print(f"{name},{policy},{label},{vals}")


if __name__ == "__main__":
    main()
