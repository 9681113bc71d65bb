"""End-to-end run-directory workflow through the command-line interface.

Writes a config, solves into a run directory (snapshots.csv, curves.csv,
report.txt, run_config.ini), re-verifies the directory from the CSVs
alone, traces an extra characteristic, and prints the report.  The same
flow works from a shell:

    membrane validate run.ini
    membrane --out RUN solve run.ini
    membrane verify RUN
    membrane trace RUN --family zero --foot 1.2
    membrane report RUN
"""
import tempfile
from pathlib import Path

from membrane.cli import main as cli


def run(args):
    print(f"\n$ membrane {' '.join(args)}")
    rc = cli(args)
    print(f"(exit {rc})")
    return rc


def main():
    with tempfile.TemporaryDirectory() as tmp:
        cfg = Path(tmp) / "run.ini"
        cfg.write_text("[datum]\nkind = family\n"
                       "[solver]\ngrid_n = 256\nsnapshot_stride = 4\n")
        out = str(Path(tmp) / "run")
        run(["validate", str(cfg)])
        run(["--out", out, "solve", str(cfg)])
        print("\nrun directory contents:")
        for p in sorted(Path(out).iterdir()):
            print(f"  {p.name}  ({p.stat().st_size} bytes)")
        run(["verify", out])
        run(["trace", out, "--family", "zero", "--foot", "1.2"])
        run(["report", out])


if __name__ == "__main__":
    main()
