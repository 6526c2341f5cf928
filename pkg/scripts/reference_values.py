"""Print the reference quantities for the catalog matrices.

Usage: python3 scripts/reference_values.py
"""
import math

import numpy as np

from intsparse.algebraic import build_algebraic_matrix, realify, verify_norm_lower_bound
from intsparse.bounds import find_sparse_witness, sparse_minkowski_bound
from intsparse.catalog import BOUND_DEMOS, CUBE_ROOT_TWO, CUBE_ROOT_TWO_B, TERNARY_3X6
from intsparse.exact import min_singular_value, row_norms
from intsparse.forge import verify_plucker


def ternary():
    A = TERNARY_3X6
    cert = verify_plucker(A)
    print("ternary 3 x 6")
    print(f"  all maximal minors nonzero: {cert.all_nonzero}")
    print(f"  min singular value: {min_singular_value(A.array):.9f}")
    print(f"  min singular value, unit-norm rows: "
          f"{min_singular_value(A.array, normalize_rows=True):.9f}")
    print(f"  max row norm: {row_norms(A.array).max():.6f}")


def bounds():
    print("determinantal bounds (min-norm / completion / naive)")
    for name, (A, _, completion) in BOUND_DEMOS.items():
        weak = sparse_minkowski_bound(A)
        strong = sparse_minkowski_bound(A, completion=completion)
        print(f"  {name}: {weak.minkowski_bound:.4f} / {strong.minkowski_bound:.4f} / "
              f"{weak.naive_bound:.4f}")
        if name != "bound_demo_2":
            w = find_sparse_witness(A, strong.minkowski_bound)
            x = [int(v) for v in w.to_dense()]
            print(f"    witness x = {x}, ||Ax|| = {np.linalg.norm(np.array(A) @ x):.4f}")


def algebraic():
    A = build_algebraic_matrix(CUBE_ROOT_TWO_B, CUBE_ROOT_TWO)
    print("cube-root-of-two matrix")
    print(f"  entry bound: {A.entry_bound:.6f} (3 * 2^(1/3) = {3 * 2 ** (1 / 3):.6f})")
    print(f"  compact real form min singular value: "
          f"{min_singular_value(realify(A.entries, compact=True)):.6f}")
    check = verify_norm_lower_bound(A, s=3, box=10)
    print(f"  min ||Ax|| over 3-sparse x with |x_i| <= 10: {check.min_norm:.9f} "
          f"(sqrt(3) = {math.sqrt(3):.9f}) at {list(check.witness)}")


if __name__ == "__main__":
    ternary()
    bounds()
    algebraic()
