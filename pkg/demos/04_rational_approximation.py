"""Continued fractions drive everything quantitative here.

The convergent denominators q_n of alpha control how evenly the orbit
<k*alpha> fills the circle (every point is within 3/(2q_n) of the first q_n
orbit points) and index the recurrence estimates converging to the
stationary value 2a/(1+a).
"""

import math

from foldmap import (contfrac_expand, convergent_denominators, convergents,
                     find_close_k, is_small_vertex, z_estimate)

ALPHA = math.sqrt(0.5)


def main():
    quotients = contfrac_expand(ALPHA, 12)
    print(f"1/sqrt2 = [0; {', '.join(map(str, quotients[1:]))}, ...]")
    print(f"{'n':>2} {'p/q':>12} {'error * 2q^2':>14}")
    for c in convergents(quotients):
        print(f"{c.index:2d} {f'{c.p}/{c.q}':>12} {abs(ALPHA - c.value) * 2 * c.q ** 2:14.4f}")

    q = 17
    print(f"\nclose returns at q = {q} (bound 3/(2q) = {1.5 / q:.4f}):")
    for x in (0.5, 0.123456, 0.999):
        hit = find_close_k(ALPHA, x, q)
        print(f"  x = {x:<8} k = {hit['k']:2d}  <x - k*alpha> = {hit['value']:.5f}")
        assert hit["value"] < 1.5 / q

    target = 2 * ALPHA / (1 + ALPHA)
    print(f"\nrecurrence estimates along small-vertex denominators, target {target:.10f}:")
    for q in convergent_denominators(ALPHA, 10 ** 4):
        if not is_small_vertex(ALPHA, q):
            continue
        z = z_estimate(ALPHA, q)
        print(f"  q = {q:5d}  z = {z:.10f}  |err| = {abs(z - target):.2e}")
    assert abs(z_estimate(ALPHA, 3363) - target) < 1e-6


if __name__ == "__main__":
    main()
