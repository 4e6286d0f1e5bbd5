"""Pipes: closed plumbing networks from full-neighborhood rules.

Eight tiles carry ports on some of their four sides.  A rule exists for every
tile together with a fully specified compatible neighborhood, which comes to
8 * 4^4 = 2048 rules.  Ports must pair up across every interior edge, so the
generated boards never contain a dangling pipe end.

The grid is generated column by column: each column becomes one small circuit
conditioned on the column to its left.
"""

from qcollapse import RandomSource, hwfc_generate, render_ascii
from qcollapse.usecases import generate_pipes_ruleset, pipes_usecase


def main():
    print(f"ruleset size: {len(generate_pipes_ruleset())} rules")

    uc = pipes_usecase(12, 6)
    rng = RandomSource(5)
    for i in range(3):
        inst = hwfc_generate(uc.adjacency, 8, uc.ruleset, uc.partitioning, rng)
        problems = uc.validator(inst)
        print(f"\nboard {i} (validator violations: {len(problems)})")
        print(render_ascii(inst, uc.alphabet, uc.topology))


if __name__ == "__main__":
    main()
