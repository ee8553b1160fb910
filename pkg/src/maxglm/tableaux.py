"""Explicit Runge-Kutta Butcher tableaux for the collocated scheme.

Two integrators are shipped: the classical four-stage RK4, and the 12-stage
8th-order Dormand-Prince method (the propagating formula of the well known
8(5,3) pair; coefficients from Hairer, Norsett & Wanner, "Solving Ordinary
Differential Equations I", Springer).  The high-order method is what the
energy-conservation runs use: on the imaginary axis its stability modulus
satisfies |R(i theta)|^2 - 1 = O(theta^10), so the spurious energy drift per
step of a wave mode is far below the accumulation budget of a long run.
"""

import numpy as np


class ButcherTableau:
    """Coefficients (a, b, c) of an explicit s-stage Runge-Kutta method."""

    def __init__(self, name, a, b, c, order):
        self.name = name
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.c = np.asarray(c, dtype=float)
        self.order = int(order)
        self.validate()

    @property
    def stages(self):
        return len(self.b)

    def validate(self):
        s = self.stages
        if self.a.shape != (s, s) or self.c.shape != (s,):
            raise ValueError("inconsistent tableau shapes for %s" % self.name)
        if abs(self.b.sum() - 1.0) > 1e-13:
            raise ValueError("weights of %s do not sum to 1" % self.name)
        if np.max(np.abs(self.a.sum(axis=1) - self.c)) > 1e-13:
            raise ValueError("nodes of %s do not match row sums" % self.name)
        # explicit: strictly lower triangular coefficient matrix
        if np.any(np.triu(self.a) != 0.0):
            raise ValueError("%s is not explicit" % self.name)


def _lower(rows, s):
    a = np.zeros((s, s))
    for i, row in enumerate(rows):
        a[i, : len(row)] = row
    return a


RK4 = ButcherTableau(
    "rk4",
    a=_lower([[], [0.5], [0.0, 0.5], [0.0, 0.0, 1.0]], 4),
    b=[1 / 6, 1 / 3, 1 / 3, 1 / 6],
    c=[0.0, 0.5, 0.5, 1.0],
    order=4,
)


# Dormand-Prince 8th order, 12 stages (propagating formula of DOP853).
_DP8_C = [
    0.0,
    0.05260015195876773,
    0.0789002279381516,
    0.1183503419072274,
    0.2816496580927726,
    0.3333333333333333,
    0.25,
    0.3076923076923077,
    0.6512820512820513,
    0.6,
    0.8571428571428571,
    1.0,
]

_DP8_B = [
    0.054293734116568765,
    0.0,
    0.0,
    0.0,
    0.0,
    4.450312892752409,
    1.8915178993145003,
    -5.801203960010585,
    0.3111643669578199,
    -0.1521609496625161,
    0.20136540080403034,
    0.04471061572777259,
]

_DP8_A_ROWS = [
    [],
    [0.05260015195876773],
    [0.0197250569845379, 0.0591751709536137],
    [0.02958758547680685, 0.0, 0.08876275643042054],
    [0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792],
    [0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242],
    [0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596,
     -0.017578125],
    [0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328,
     -0.015319437748624402, 0.008273789163814023],
    [0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726,
     27.59209969944671, 20.154067550477894, -43.48988418106996],
    [0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843,
     21.230051448181193, 15.279233632882423, -33.28821096898486,
     -0.020331201708508627],
    [-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295,
     -8.149787010746927, -18.52006565999696, 22.739487099350505,
     2.4936055526796523, -3.0467644718982196],
    [2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625,
     -17.9589318631188, 27.94888452941996, -2.8589982771350235,
     -8.87285693353063, 12.360567175794303, 0.6433927460157636],
]

DP8 = ButcherTableau("dp8", a=_lower(_DP8_A_ROWS, 12), b=_DP8_B, c=_DP8_C, order=8)


TABLEAUX = {"rk4": RK4, "rk_high": DP8, "dp8": DP8}


def get_tableau(name):
    try:
        return TABLEAUX[name]
    except KeyError:
        raise ValueError("unknown tableau %r (have: %s)" % (name, ", ".join(sorted(TABLEAUX))))
