import sys

import numpy as np

from creditlab.tabular import load_profile, load_dataset
from creditlab.tabular.synth import generate_dataset, substream
from creditlab.learners import fit_logistic
from creditlab.tabular import fit_preprocess, apply_preprocess
from creditlab.reject.scenario import _stratified_sample

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
prof = load_profile("mini_homecredit")
path = generate_dataset(prof, "/root/pkg/data")
t = load_dataset(path, prof)
y = t.labels()
n = 20000
rng = substream(415027, "homecredit")
u1 = rng.standard_normal(n); u2 = rng.standard_normal(n)
s = u1 + u2
p_isl = np.where(s < -2.21, 0.035, 0.011) * ((s > -3.2) & (s < 2.0))
isl = rng.random(n) < p_isl
pol = s + 1.35 * isl

hold_idx = _stratified_sample(y, 0.2, substream(seed, "ri-holdout"))
rest_idx = np.setdiff1d(np.arange(n), hold_idx)
gate_local = _stratified_sample(y[rest_idx], 0.1, substream(seed, "ri-policy"))
gate_idx = rest_idx[gate_local]
pool_idx = np.setdiff1d(rest_idx, gate_idx)

pol_cols = list(prof.policy_features)
gate_t = t.select_rows(gate_idx).select_features(pol_cols)
plan = fit_preprocess(gate_t)
Xg, names = apply_preprocess(plan, gate_t)
yg = gate_t.labels()
Xp, _ = apply_preprocess(plan, t.select_rows(pool_idx).select_features(pol_cols))
pp = pol[pool_idx]; ip = isl[pool_idx]; yp = y[pool_idx]
pg = pol[gate_idx]

B = -0.86
lo_g = pg < B
print(f"seed {seed} gate sample: n={len(yg)} bads={int(yg.sum())} lo n={int(lo_g.sum())} "
      f"lo bads={int(yg[lo_g].sum())} hi bads={int(yg[~lo_g].sum())}")

counts = np.bincount(yg.astype(np.int64), minlength=2).astype(np.float64)
wg = (len(yg) / (2.0 * counts))[yg.astype(np.int64)]
m = fit_logistic(Xg, yg, w=wg)
order = np.argsort(-np.abs(m.coefficients))
print("  coefs: " + "  ".join(f"{names[j]}={m.coefficients[j]:+.2f}" for j in order))

sc = m.predict_proba(Xp)
acc = sc < 0.4
lo = pp < B
acc_def = yp[acc].mean(); rej_def = yp[~acc].mean()
print(f"  logistic gate: accept={acc.mean():.4f} acc_lo={acc[lo].mean():.4f} "
      f"acc_hi={acc[~lo].mean():.4f} P(lo)={lo.mean():.4f} isl_acc={acc[ip].mean():.3f}")
print(f"  acc_def={acc_def:.4f} rej_def={rej_def:.4f}")
bands = [(-3.5, -1.2), (-1.2, -0.86), (-0.86, -0.6), (-0.6, -0.3),
         (-0.3, 0.0), (0.0, 0.6), (0.6, 1.4), (1.4, 3.6)]
for a, b in bands:
    mm = (pp >= a) & (pp < b)
    if not mm.any():
        continue
    print(f"  pool pol[{a:+.2f},{b:+.2f}): n={int(mm.sum())} acc={acc[mm].mean():.3f} "
          f"score q10={np.quantile(sc[mm], 0.1):.3f} q50={np.quantile(sc[mm], 0.5):.3f} "
          f"q90={np.quantile(sc[mm], 0.9):.3f}")
leak = acc & ~lo
if leak.any():
    med = {nm: np.median(Xp[leak, j]) - np.median(Xp[~lo, j]) for j, nm in enumerate(names)}
    top = sorted(med.items(), key=lambda kv: -abs(kv[1]))[:5]
    print("  leak-row median shift vs hi-side: " +
          "  ".join(f"{k}={v:+.3f}" for k, v in top))
