"""Compare handler performance across the shipped models.

Per (model, handler) this times the full generation call, handler setup
included, averages a trimmed mean over several runs, and prints a table
plus the sorted per-handler times that a cactus plot would consume.  The
conjunction handler pays per check; the traversal handlers pay once up
front to build the partial-test-case BDD and then answer each check with a
single walk, which wins once checks dominate.
"""

from pathlib import Path

from citbdd import parse_model
from citbdd.cli import bench_instance

MODELS = Path(__file__).resolve().parents[1] / "models"
HANDLERS = ("bdd-and", "bdd-partial-up", "bdd-partial-down")


def main():
    records = []
    for path in sorted(MODELS.glob("*.model")):
        model = parse_model(path.read_text(encoding="utf-8"))
        for kind in HANDLERS:
            records.append(bench_instance(path.stem, model, 3, kind,
                                          repeats=4, trim=1, timeout=600.0))

    print(f"{'instance':14s} " + " ".join(f"{h:>16s}" for h in HANDLERS))
    instances = sorted({r.instance for r in records})
    for instance in instances:
        cells = []
        for kind in HANDLERS:
            rec = next(r for r in records
                       if r.instance == instance and r.handler == kind)
            cells.append("NA" if rec.seconds is None else f"{rec.seconds:.4f}s")
        print(f"{instance:14s} " + " ".join(f"{c:>16s}" for c in cells))

    print("\ncactus data (k-th fastest solved instance per handler):")
    for kind in HANDLERS:
        times = sorted(r.seconds for r in records
                       if r.handler == kind and r.seconds is not None)
        shown = " ".join(f"{s:.3f}" for s in times)
        print(f"  {kind}: {shown}")


if __name__ == "__main__":
    main()
