"""Voxel skylines: support-constrained towers, one layer per circuit.

Four rules say a voxel may be filled only on the ground or directly on top
of another filled voxel, so towers never float.  Layers are generated bottom
up; each 4x4 layer is one 16-qubit circuit conditioned on the layer below.
"""

from qcollapse import RandomSource, hwfc_generate, render_voxel_slices
from qcollapse.usecases import voxel_skyline_usecase


def main():
    uc = voxel_skyline_usecase(4, 4, 4)
    rng = RandomSource(31)
    inst = hwfc_generate(uc.adjacency, 2, uc.ruleset, uc.partitioning, rng)
    print(f"violations: {len(uc.validator(inst))}")
    print(render_voxel_slices(inst, uc.alphabet, uc.topology))
    heights = [
        sum(1 for z in range(4) if inst.mapping[z * 16 + s] == 2)
        for s in range(1, 17)
    ]
    print("column heights:")
    for row in range(4):
        print("  " + " ".join(str(h) for h in heights[row * 4:(row + 1) * 4]))


if __name__ == "__main__":
    main()
