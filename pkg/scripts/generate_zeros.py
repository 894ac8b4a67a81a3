import os
import sys

sys.path.append(os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src"))

import argparse
import logging
from pathlib import Path
from typing import List

import mpmath
import numpy as np

from models import ZeroSet
from zeros.table import dump_zeros

logger = logging.getLogger(__name__)


def zero_ordinates(height: float, dps: int = 30) -> List[float]:
    """Ordinates of the nontrivial zeros with 0 < γ <= height, via mpmath.zetazero."""
    mpmath.mp.dps = dps
    gammas: List[float] = []
    n = 1
    while True:
        gamma = float(mpmath.zetazero(n).imag)
        if gamma > height:
            break
        gammas.append(gamma)
        n += 1
        if n % 50 == 0:
            logger.info(f"{n} zeros so far, γ = {gamma:.3f}")
    return gammas


def main() -> int:
    parser = argparse.ArgumentParser(description="Write a zeta zero table for the rsp CLI")
    parser.add_argument("--height", type=float, required=True, help="Largest ordinate to include")
    parser.add_argument("--output", type=Path, required=True)
    parser.add_argument("--dps", type=int, default=30, help="mpmath working precision")
    args = parser.parse_args()

    logging.basicConfig(
        level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    gammas = zero_ordinates(args.height, args.dps)
    zeros = ZeroSet(
        gammas=np.array(gammas), source=f"mpmath.zetazero, height {args.height:g}"
    )
    dump_zeros(zeros, args.output)
    logger.info(f"Wrote {zeros.count} zeros to {args.output}")
    return 0


if __name__ == "__main__":
    exit(main())
