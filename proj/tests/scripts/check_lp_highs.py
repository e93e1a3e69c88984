#!/usr/bin/env python3
"""Solve an LP-format model with HiGHS and print its optimal objective."""

import sys

import highspy


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: check_lp_highs.py model.lp", file=sys.stderr)
        return 2
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 1e-9)
    if h.readModel(sys.argv[1]) != highspy.HighsStatus.kOk:
        print("error reading model")
        return 1
    h.run()
    status = h.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        print("status", h.modelStatusToString(status))
        return 1
    print("objective %.12f" % h.getInfo().objective_function_value)
    return 0


if __name__ == "__main__":
    sys.exit(main())
