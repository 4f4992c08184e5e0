#!/usr/bin/env python3
"""Numerically certify the distance/fidelity inequalities behind the
security argument and emit a JSON report.
"""
import numpy as np

from qkdnet import analysis


def main():
    rng = np.random.default_rng(99)
    dims = [2, 3, 4, 8]
    reports = [
        analysis.fuchs_van_de_graaf_suite(500, dims, rng),
        analysis.pure_saturation_suite(500, dims, rng),
        analysis.double_concavity_suite(500, dims, rng),
        analysis.bures_triangle_suite(500, dims, rng),
        analysis.entanglement_fidelity_suite(10, rng),
        analysis.composed_bound_suite(10, rng),
    ]
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        print(f"{status}  {rep.inequality_id:32s} "
              f"worst margin {rep.max_violation:+.3e}")
    print()
    print(analysis.reports_to_csv(reports))


if __name__ == "__main__":
    main()
