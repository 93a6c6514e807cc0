"""
The whole pipeline, from a curve file to typed blocks
=====================================================
"""

# %%
import subprocess
import sys
import tempfile
from pathlib import Path

from symcong.corpus import CorpusBuilder, random_curves, theorem_j0_family, write_allcurves
from symcong.pipeline import ingest, run_pipeline, summary_tsv

cb = CorpusBuilder()
for b in (1, -1, 3):
    first, second = theorem_j0_family(b)
    cb.add_class(first)
    cb.add_class(second)
for E in random_curves(10, seed=9, avoid_conductors=cb.conductors()):
    cb.add_class([E])

tmp = Path(tempfile.mkdtemp())
write_allcurves(cb.records, tmp / "curves.txt")

# %%
records = ingest(tmp / "curves.txt")
res = run_pipeline(records, 7)
for sr in res.sets:
    print(sr.set_id, sr.cset.classes, "->", " | ".join(",".join(b) for b in sr.partition.blocks))
print(summary_tsv([res]))

# %% [markdown]
# The same through the command line.

# %%
out = subprocess.run([sys.executable, "-m", "symcong.cli", "classify", str(tmp / "curves.txt"), "--p", "7", "--jobs", "2"], capture_output=True, text=True)
print(out.stdout)
