#!/usr/bin/env python3
"""Walkthrough: when does block fading beat a constant compound channel?

With many candidate states per user (J1, J2 >= M) the constant model
leaves no null space and the confidential slope region collapses to the
origin, while the fading scheme still protects the min(J, M-1) leading
states of each block. The symmetric equal-power point sticks out past the
time-sharing segment exactly when its rational margin is positive.
"""

from compound_bcc import (
    dominates,
    ergodic_sdof_region,
    gaussian_confidential_region,
    nontrivial_vertices,
    symmetric_point_margin,
)


def show(M, J1, J2):
    print(f"\nM={M}, J1={J1}, J2={J2}")
    erg = ergodic_sdof_region(M, J1, J2)
    gau = gaussian_confidential_region(M, 1, 1, J1, J2)
    for name, region in (("fading", erg), ("constant", gau)):
        pts = nontrivial_vertices(region) or ((0, 0),)
        desc = ", ".join("(" + ", ".join(str(c) for c in v) + ")" for v in pts)
        print(f"  {name:9s} vertices: {desc}")
    if J1 >= M and J2 >= M:
        margin, advantage = symmetric_point_margin(M, J1, J2)
        word = "joins" if advantage else "is dominated by"
        print(f"  symmetric point margin f = {margin}; the equal-power point "
              f"{word} the time-sharing segment")
    strictly = dominates(erg, gau) and not dominates(gau, erg)
    print(f"  fading region strictly larger: {strictly}")


def main():
    # plenty of antennas: both schemes fill the unit square
    show(4, 2, 2)
    # user 2 has too many states for the constant model, fading still pays
    show(3, 2, 4)
    # both users oversubscribed, positive margin: symmetric point wins
    show(7, 8, 8)
    # both oversubscribed but the margin is negative: corners only
    show(2, 4, 4)


if __name__ == "__main__":
    main()
