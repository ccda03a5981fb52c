import sys
import time
import numpy as np
from creditlab.tabular import load_profile, load_dataset, fit_preprocess, apply_preprocess, split, SplitSpec
from creditlab.tabular.synth import generate_dataset
from creditlab.learners import fit_logistic, fit_forest, ForestConfig
from creditlab.metrics import auc, EvalFrame, fairness_report

t0 = time.time()
prof = load_profile("synth_german")
path = generate_dataset(prof, "/root/pkg/data")
t = load_dataset(path, prof)
y = t.labels()
z = t.sensitive()
print(f"rows={t.n_rows} pos_rate={y.mean():.4f} z1_share={z.mean():.4f} gen_time={time.time()-t0:.1f}s")

aucs, aucs_aware, eods_un, eods_aw = [], [], [], []
for rep, (tr, va, te) in enumerate(split(t, SplitSpec(seed=17, fractions=(0.8, 0.1, 0.1), n_repeats=10))):
    ttr, tte = t.select_rows(tr), t.select_rows(te)
    plan = fit_preprocess(ttr)
    Xtr, _ = apply_preprocess(plan, ttr)
    Xte, _ = apply_preprocess(plan, tte)
    m = fit_logistic(Xtr, y[tr])
    s = m.predict_proba(Xte)
    aucs.append(auc(y[te], s))
    rep_un = fairness_report(EvalFrame(s, y[te], z[te]))
    eods_un.append(rep_un.eod)
    plan_a = fit_preprocess(ttr, include_sensitive=True)
    Xtr_a, _ = apply_preprocess(plan_a, ttr)
    Xte_a, _ = apply_preprocess(plan_a, tte)
    ma = fit_logistic(Xtr_a, y[tr])
    sa = ma.predict_proba(Xte_a)
    aucs_aware.append(auc(y[te], sa))
    rep_aw = fairness_report(EvalFrame(sa, y[te], z[te]))
    eods_aw.append(rep_aw.eod)

print(f"LR unaware AUC mean={np.mean(aucs):.4f} sd={np.std(aucs):.4f}  aware={np.mean(aucs_aware):.4f}")
print(f"EOD unaware={np.mean(eods_un):.4f} aware={np.mean(eods_aw):.4f} aware>unaware in {sum(a> u for a, u in zip(eods_aw, eods_un))}/10 folds")

# forest single split sanity
tr, va, te = split(t, SplitSpec(seed=5, fractions=(0.8, 0.1, 0.1)))[0]
ttr = t.select_rows(tr)
plan = fit_preprocess(ttr)
Xtr, _ = apply_preprocess(plan, ttr)
Xte, _ = apply_preprocess(plan, t.select_rows(te))
rf = fit_forest(Xtr, y[tr], config=ForestConfig(n_trees=150, max_depth=12, seed=3))
print(f"RF single-split AUC={auc(y[te], rf.predict_proba(Xte)):.4f} (want 0.70-0.78)")

# fairness-protocol split: group-good counts in a 15% validation slice
tr, va, te = split(t, SplitSpec(seed=11, fractions=(0.7, 0.15, 0.15)))[0]
gv, yv = z[va], y[va]
for g in (0, 1):
    print(f"valid group {g}: n={np.sum(gv == g)} good={np.sum((gv == g) & (yv == 0))}")
print(f"total {time.time()-t0:.1f}s")
