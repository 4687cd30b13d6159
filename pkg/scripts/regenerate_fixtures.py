"""Rewrite the bundled SMALL FACTORY files and the DOT golden files.

Run after changing the builders in ``desreconf.factory``; review the diff of
tests/golden by hand before committing it.
"""

import argparse
from pathlib import Path

from desreconf.factory import components, data_dir, write_small_factory
from desreconf.io import to_dot
from desreconf.manifest import load_manifest

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data", type=Path, default=data_dir())
    ap.add_argument("--golden", type=Path, default=ROOT / "tests" / "golden")
    args = ap.parse_args()

    manifest = write_small_factory(args.data)
    print(f"wrote {manifest}")
    args.golden.mkdir(parents=True, exist_ok=True)
    rs = load_manifest(manifest).build_rs()
    (args.golden / "small_factory_rs.dot").write_text(to_dot(rs.automaton))
    (args.golden / "M1.dot").write_text(to_dot(components()[0]))
    print(f"wrote golden DOT files to {args.golden}")


if __name__ == "__main__":
    main()
