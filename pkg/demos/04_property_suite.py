"""Machine-check the structural properties of a finished run.

Every inequality the blow-up argument relies on is evaluated on the
numerical solution: positivity of the transported quantities R~,
the maximum principle for u, conservation of r*v mass, speed bounds and
monotonicity along the bounding curves, the funnel estimate, and the
first-order refinement of the residual evaluators between two grids.
"""
from membrane.initdata import make_family
from membrane.solver import SolverParams, run
from membrane.verify import run_property_suite


def main():
    datum = make_family()
    print("solving at n = 512 and n = 1024 ...")
    coarse = run(datum, SolverParams(grid_n=512, snapshot_stride=2))
    fine = run(datum, SolverParams(grid_n=1024, snapshot_stride=2))

    rep = run_property_suite(coarse, alpha=1.0, fine=fine)
    print()
    print(rep.to_text())


if __name__ == "__main__":
    main()
