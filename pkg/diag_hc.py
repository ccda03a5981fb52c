import numpy as np
from creditlab.tabular import load_profile, load_dataset
from creditlab.tabular.synth import generate_dataset, substream
from creditlab.reject import (simulate_rejection, acceptance_model, label_spreading,
                              baseline_training_set)
from creditlab.learners import fit_boost, BoostConfig
from creditlab.metrics import auc

prof = load_profile("mini_homecredit")
path = generate_dataset(prof, "/root/pkg/data")
t = load_dataset(path, prof)
y = t.labels()

# reconstruct latent coordinates the same way the generator draws them
rng = substream(415027, "homecredit")
n = 20000
u1 = rng.standard_normal(n)
u2 = rng.standard_normal(n)
s = u1 + u2
p_isl = np.where(s < -2.21, 0.035, 0.011) * ((s > -3.2) & (s < 2.0))
isl = rng.random(n) < p_isl
pod = isl & (s < -2.21)
body = isl & ~pod
print(f"island mass={isl.mean():.4f} island bad rate={y[isl].mean():.3f} "
      f"bulk bad rate={y[~isl].mean():.3f} island share of bads={(y[isl].sum()/y.sum()):.3f}")
print(f"pod n={pod.sum()} rate={y[pod].mean():.3f}; body n={body.sum()} rate={y[body].mean():.3f}")

sc = simulate_rejection(t, policy_features=list(prof.policy_features), seed=0)
print("summary:", {k: round(v, 4) if isinstance(v, float) else v for k, v in sc.summary.items()})

from creditlab.reject.scenario import _stratified_sample
hold_idx = _stratified_sample(y, 0.2, substream(0, "ri-holdout"))
rest_idx = np.setdiff1d(np.arange(n), hold_idx)
gate_local = _stratified_sample(y[rest_idx], 0.1, substream(0, "ri-policy"))
pool_idx = np.setdiff1d(rest_idx, rest_idx[gate_local])
assert len(pool_idx) == sc.n_pool
isl_pool = isl[pool_idx]
s_pool = s[pool_idx]
acc = sc.accept_mask
y_pool = y[pool_idx]
n_anchor_isl = int((isl_pool & acc).sum())
ib_rate = y_pool[isl_pool & acc].mean() if n_anchor_isl else float('nan')
print(f"island acceptance rate={acc[isl_pool].mean():.3f} overall accept={acc.mean():.3f}; "
      f"island anchors={n_anchor_isl} bad rate={ib_rate:.3f}")

# acceptance model spread on rejects: island rejects should look ordinary
am = acceptance_model(sc)
pa = am.predict_proba(sc.X_rejected)
isl_rej = isl_pool[~acc]
print(f"acc-model p(accept) rejects: bulk q50={np.quantile(pa[~isl_rej],0.5):.3f} "
      f"island q50={np.quantile(pa[isl_rej],0.5):.3f} island q10={np.quantile(pa[isl_rej],0.1):.3f}")

# label spreading flips
res = label_spreading(sc)
fl = res.reject_labels == 1
rej_pool = pool_idx[~acc]
true_rej = y[rej_pool]
fr = true_rej[fl].mean() if fl.any() else float('nan')
fi = isl_rej[fl].mean() if fl.any() else float('nan')
print(f"LS flips: {fl.sum()} of {len(fl)} rejects; flipped true bad rate={fr:.3f}; "
      f"flipped in island={fi:.3f}; island rejects={isl_rej.sum()}, "
      f"island rejects flipped={fl[isl_rej].mean():.3f}; converged={res.converged} iters={res.n_iter}")

# neighbor composition for island rejects in the LS graph
from creditlab.reject.strategies import _knn_rbf_graph
Xp = sc.X_pool
W = _knn_rbf_graph(Xp, 7, 1.0 / Xp.shape[1]).tocsr()
isl_pool_rej = isl_pool & ~acc
frac_anchor, frac_isl, anchor_bad = [], [], []
for i in np.flatnonzero(isl_pool_rej):
    cols = W.indices[W.indptr[i]:W.indptr[i + 1]]
    if len(cols) == 0:
        continue
    frac_anchor.append(acc[cols].mean())
    frac_isl.append(isl_pool[cols].mean())
    a = cols[acc[cols]]
    anchor_bad.append(y_pool[a].mean() if len(a) else np.nan)
print(f"island rejects={isl_pool_rej.sum()}; nbr frac anchor={np.mean(frac_anchor):.3f}; "
      f"nbr frac island={np.mean(frac_isl):.3f}; anchor-nbr bad rate={np.nanmean(anchor_bad):.3f}")

# where do BM's bottom-600 rows sit?
bm = baseline_training_set(sc)
model = fit_boost(bm.X, bm.y, bm.weights, config=BoostConfig(n_trees=80, max_depth=3))
sh = model.predict_proba(sc.X_holdout)
vol = 600
bottom = np.argsort(sh, kind="stable")[:vol]
yh = sc.y_holdout
isl_h = isl[hold_idx]
s_h = s[hold_idx]
bb = yh[bottom]
ib = isl_h[bottom]
print(f"BM bottom-600: bads={int(bb.sum())} island rows={int(ib.sum())} island bads={int((bb*ib).sum())} "
      f"holdout auc={auc(yh, sh):.4f}")
deep = s_h < -1.8
mid = (~isl_h) & (np.abs(s_h) < 0.5)
pod_h = isl_h & (s_h < -2.21)
body_h = isl_h & ~pod_h
cutoff = np.sort(sh, kind="stable")[vol - 1]
print(f"BM mean score: pod={sh[pod_h].mean():.4f} (n={pod_h.sum()}) "
      f"body={sh[body_h].mean():.4f} (n={body_h.sum()}) "
      f"bulk deep={sh[~isl_h & deep].mean():.4f} bulk mid={sh[mid].mean():.4f} cutoff600={cutoff:.4f}")
print(f"body holdout in 600: {int(ib.sum() - (isl_h & pod_h)[bottom].sum())}; "
      f"body holdout bads={int(yh[body_h].sum())} of {int(body_h.sum())}")
