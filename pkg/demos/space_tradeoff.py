"""Peak work bits of three reachability strategies on growing random graphs.

    python3 demos/space_tradeoff.py [--trials 5]
"""

import argparse
import math
import random

from sublin.instances import gen_random
from sublin.spacebound import MeteredWorkspace, reach_space


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    sizes = (8, 16, 32)  # savitch needs n^O(log n) steps; 64 exceeds the default budget
    print(f"{'n':>4} {'bfs':>6} {'savitch':>8} {'hybrid':>8}  (max peak bits over {args.trials} graphs)")
    for n in sizes:
        rng = random.Random(f"{args.seed}:{n}")
        tau = f"hybrid:{math.isqrt(n)}"
        peaks = {"bfs": 0, "savitch": 0, tau: 0}
        for _ in range(args.trials):
            g = gen_random("dstcon", {"n": n, "m": n, "degree_cap": 3}, rng.randrange(2**32))
            answers = set()
            for name in peaks:
                ws = MeteredWorkspace()
                answers.add(reach_space(g, name, ws))
                peaks[name] = max(peaks[name], ws.peak_bits)
            assert len(answers) == 1
        print(f"{n:>4} {peaks['bfs']:>6} {peaks['savitch']:>8} {peaks[tau]:>8}  tau={math.isqrt(n)}")


if __name__ == "__main__":
    main()
