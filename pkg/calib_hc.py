import sys
import time
import numpy as np
from creditlab.tabular import load_profile, load_dataset
from creditlab.tabular.synth import generate_dataset
from creditlab.reject import simulate_rejection, evaluate_ri, standard_strategies

t0 = time.time()
prof = load_profile("mini_homecredit")
path = generate_dataset(prof, "/root/pkg/data")
t = load_dataset(path, prof)
y = t.labels()
print(f"rows={t.n_rows} pos_rate={y.mean():.4f} gen+load={time.time()-t0:.1f}s")

n_seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 1
rows = {}
for seed in range(n_seeds):
    sc = simulate_rejection(t, policy_features=list(prof.policy_features), seed=seed)
    s = sc.summary
    print(f"seed{seed}: reject_share={s['reject_share']:.3f} accept_def={s['accept_default_rate']:.3f} "
          f"reject_def={s['reject_default_rate']:.3f} pool={s['n_pool']} ({time.time()-t0:.0f}s)")
    reports = evaluate_ri(sc, standard_strategies(sc))
    for r in reports:
        rows.setdefault(r.name, []).append((r.auc, r.kickout))
    print("   " + "  ".join(f"{r.name}:a{r.auc:.3f}/k{r.kickout:.3f}" for r in reports))

print(f"\n=== means over {n_seeds} seeds ===")
for name, vals in rows.items():
    a = np.mean([v[0] for v in vals]); k = np.mean([v[1] for v in vals])
    print(f"{name:4s} auc={a:.4f} kickout={k:.4f}")
print(f"total {time.time()-t0:.1f}s")
