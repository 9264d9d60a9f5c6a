# %% [markdown]
# # How large is S(N) for N <= q^(1-gamma)?
#
# The survey records max S(N)/(sqrt q log q) over the range for each
# character and gamma, and tables it per parity against c(1/3 - gamma + eps).
# This runs a small slice; ``pvshort survey theorem`` runs the full default.

# %%
import csv
import tempfile

from pvshort.survey import SurveyConfig, emit_plot_data, run_theorem_survey

out = tempfile.mkdtemp()
cfg = SurveyConfig(q_range=(500, 900), characters_per_modulus=10, output_dir=out, worker_count=1)
records, path = run_theorem_survey(cfg)
print(len(records), "records in", path)

with open(emit_plot_data(records, "ratio_vs_gamma", out)) as fh:
    for row in csv.DictReader(fh):
        print(f"gamma={float(row['gamma']):.1f} {row['parity']:4s} "
              f"max ratio {float(row['max_ratio']):.4f}  bound {float(row['bound']):.4f}")

# %% [markdown]
# Shrinking the range can only lower the maximum, one character at a time.

# %%
by = {}
for r in records:
    by.setdefault(r.label, []).append(r.max_ratio)
print(all(v == sorted(v, reverse=True) for v in by.values()))
