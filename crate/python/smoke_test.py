#!/usr/bin/env python3
"""Smoke test for the xsq extension module.

Builds the cdylib with cargo if needed, loads it, and exercises the main
operations: groups, coset enumeration, tensor products, crossed-square
verification, Lie tensors and session files.
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / "release" / "libxsq.so",
        ROOT / "target" / "debug" / "libxsq.so",
    ]
    lib = next((c for c in candidates if c.exists()), None)
    if lib is None:
        subprocess.run(
            ["cargo", "build", "--release", "-p", "xsq-py"], cwd=ROOT, check=True
        )
        lib = candidates[0]
    tmp = Path(tempfile.mkdtemp(prefix="xsq-py-"))
    shutil.copy(lib, tmp / "xsq.so")
    sys.path.insert(0, str(tmp))
    import xsq

    return xsq


def main():
    xsq = load_module()

    # groups and isomorphism testing
    s3 = xsq.standard_group("symmetric 3")
    assert s3.order() == 6 and not s3.is_abelian()
    d3 = xsq.standard_group("dihedral 3")
    assert xsq.are_isomorphic(s3, d3)
    c6 = xsq.standard_group("cyclic 6")
    assert not xsq.are_isomorphic(s3, c6)
    assert c6.abelian_invariants() == [6]

    # coset enumeration: the alternating group on 4 letters
    a4 = xsq.todd_coxeter(2, [[1, 1], [2, 2, 2], [1, 2, 1, 2, 1, 2]])
    assert a4.order() == 12

    # the tensor product A3 ⊗ A3 over S3 is cyclic of order 3
    three_cycle = next(x for x in range(6) if s3.element_order(x) == 3)
    a3 = xsq.subgroup_closure(s3, [three_cycle])
    assert a3.order() == 3 and a3.is_normal()
    incl = xsq.inclusion_xmod(s3, a3)
    t = xsq.tensor_group(incl, incl)
    assert t.order() == 3
    assert all(t.verify_square().values())

    # the image of the pairing equals the commutator, on the dihedral group of order 8
    d4 = xsq.standard_group("dihedral 4")
    m = xsq.subgroup_closure(d4, [1])
    n = xsq.subgroup_closure(d4, [2, 4])
    rep = xsq.h_image(d4, m, n)
    assert rep["equal"] and rep["image_order"] == 2

    # corner-group reconstruction
    cat2 = xsq.build_cat2(t)
    assert cat2["corner_order"] == 162 and cat2["normalization_matches"]

    # weak crossed-square axioms with the identity pairing
    assert all(xsq.verify_weak_identity(t).values())

    # Lie tensors: sl2 ⊗ sl2 has dimension 3; abelian pairs are full rank
    lt = xsq.lie_tensor_adjoint(xsq.sl2())
    assert lt.dim() == 3
    assert all(lt.verify_square().values())
    assert xsq.lie_tensor_abelian(2, 3).dim() == 6

    # session files end to end
    report = json.loads(
        xsq.run_session(
            json.dumps(
                {
                    "declare": {
                        "one": {"kind": "standard", "spec": "trivial"},
                        "k": {"kind": "standard", "spec": "klein"},
                        "mu": {"kind": "xmod", "variant": "zero", "kernel": "one", "base": "one"},
                        "nu": {"kind": "xmod", "variant": "zero", "kernel": "k", "base": "one"},
                        "p": {"kind": "pair", "mu": "mu", "nu": "nu"},
                    },
                    "tasks": [{"op": "tensor", "id": "t", "args": {"pair": "p"}}],
                }
            )
        )
    )
    assert report["all_passed"] and report["tasks"][0]["data"]["order"] == 1

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
