#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
span_opt benchmark launcher, same commands as the ``bench`` console script.

    python main.py run configs/synthetic_quadratic.conf
    python main.py plot loss_vs_iter results/quad/span.csv results/quad/gd.csv -o iter.csv
    python main.py scale --dims 100,400,1600 configs/scaling.conf
"""

import sys

from span_opt.bench.main_bench import main

if __name__ == "__main__":
    sys.exit(main())
