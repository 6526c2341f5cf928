"""Write the catalog matrices as JSON files usable with the CLI.

Usage: python3 scripts/export_catalog.py [outdir]
"""
import sys
from pathlib import Path

from intsparse.algebraic import build_algebraic_matrix
from intsparse.catalog import BOUND_DEMOS, CUBE_ROOT_TWO, CUBE_ROOT_TWO_B, TERNARY_3X6
from intsparse.exact import as_exact
from intsparse.forge import SensingMatrix
from intsparse.io import save_field, save_matrix


def main(outdir="catalog"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    save_matrix(TERNARY_3X6.certified(), out / "ternary_3x6.json")
    save_matrix(SensingMatrix(CUBE_ROOT_TWO_B), out / "cube_root_two_B.json")
    save_field(CUBE_ROOT_TWO, out / "cube_root_two_field.json")
    save_matrix(build_algebraic_matrix(CUBE_ROOT_TWO_B, CUBE_ROOT_TWO),
                out / "cube_root_two.json")
    for name, (A, published, completion) in BOUND_DEMOS.items():
        save_matrix(SensingMatrix(A), out / f"{name}.json")
        save_matrix(SensingMatrix(completion), out / f"{name}_completion.json")
        save_matrix(as_exact(published), out / f"{name}_right_inverse.json")
    for path in sorted(out.iterdir()):
        print(path)


if __name__ == "__main__":
    main(*sys.argv[1:])
