"""Config-driven sweeps, CSV output and the oracle cross-check on a tiny surface."""

# %%
import dataclasses
import importlib.resources
import tempfile
from pathlib import Path

from softhomology import enumerate_classes
from softhomology.cli import main
from softhomology.experiments import load_config, prepare, read_rows_csv, run_alpha_sweep
from softhomology.homology import format_class_key

configs = importlib.resources.files("softhomology") / "configs"
# output_dir is cleared so the in-process sweep below writes nothing
cfg = dataclasses.replace(load_config(configs / "tiny_two_holes.json"), output_dir=None)
print(cfg.name, "alphas:", cfg.alphas[:4], "...", "algorithms:", cfg.algorithms)

# %%
# Every class a search lands in is one of the classes found by exhaustive enumeration.
setup = prepare(cfg)
table = enumerate_classes(setup.surface, setup.basis, setup.source, setup.dest)
for key, entry in sorted(table.classes.items(), key=lambda kv: kv[1].shortest_length):
    print(f"class {format_class_key(key):>22}  shortest {entry.shortest_length:.3f}  paths {entry.member_count}")
rows = run_alpha_sweep(cfg, setup=setup)
print("all rows in known classes:",
      {r.class_key for r in rows} <= {format_class_key(k) for k in table.classes})

# %%
# The same sweep through the command line writes rows.csv, JSON artefacts and SVG plots.
with tempfile.TemporaryDirectory() as tmp:
    main(["sweep", "--config", str(configs / "tiny_two_holes.json"), "--out", tmp])
    print(sorted(p.name for p in Path(tmp).iterdir()))
    for r in read_rows_csv(Path(tmp) / "rows.csv")[:5]:
        print(r.algorithm, r.alpha, round(r.path_length, 3), r.nodes_visited, r.class_key)
