import time
import numpy as np
from creditlab.tabular import load_profile, load_dataset, fit_preprocess, apply_preprocess, split, SplitSpec
from creditlab.tabular.synth import generate_dataset
from creditlab.learners import fit_logistic, fit_forest, ForestConfig, fit_boost, BoostConfig
from creditlab.metrics import auc

t0 = time.time()
prof = load_profile("synth_taiwan")
path = generate_dataset(prof, "/root/pkg/data")
t = load_dataset(path, prof)
y = t.labels()
print(f"rows={t.n_rows} pos_rate={y.mean():.4f} gen+load={time.time()-t0:.1f}s")

gbm_aucs, rf_aucs, lr_aucs = [], [], []
for rep, (tr, va, te) in enumerate(split(t, SplitSpec(seed=17, fractions=(0.8, 0.1, 0.1), n_repeats=3))):
    ttr, tte = t.select_rows(tr), t.select_rows(te)
    plan = fit_preprocess(ttr)
    Xtr, _ = apply_preprocess(plan, ttr)
    Xte, _ = apply_preprocess(plan, tte)
    tA = time.time()
    gbm = fit_boost(Xtr, y[tr], config=BoostConfig(seed=rep))
    tB = time.time()
    rf = fit_forest(Xtr, y[tr], config=ForestConfig(seed=rep))
    tC = time.time()
    lr = fit_logistic(Xtr, y[tr])
    gbm_aucs.append(auc(y[te], gbm.predict_proba(Xte)))
    rf_aucs.append(auc(y[te], rf.predict_proba(Xte)))
    lr_aucs.append(auc(y[te], lr.predict_proba(Xte)))
    print(f"rep{rep}: gbm={gbm_aucs[-1]:.4f} ({tB-tA:.0f}s) rf={rf_aucs[-1]:.4f} ({tC-tB:.0f}s) lr={lr_aucs[-1]:.4f}")

print(f"GBM mean={np.mean(gbm_aucs):.4f}  RF mean={np.mean(rf_aucs):.4f}  LR mean={np.mean(lr_aucs):.4f}")
print(f"total {time.time()-t0:.1f}s")
