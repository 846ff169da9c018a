"""
Built-in demonstration systems.

Three 2*pi-periodic systems, one per response type, as spec-file text, with the
published initial values of their periodic solutions and the published bounds
on the periodicity defect.
"""

from enum import StrEnum


class DemoId(StrEnum):
    EXAMPLE1 = "example1"
    EXAMPLE2 = "example2"
    EXAMPLE3 = "example3"


DEMO_SPECS: dict[DemoId, str] = {
    DemoId.EXAMPLE1: """\
# Holling-Tanner system
variant = S2
omega = 2*pi
rho = 1+sin(5*t)
kappa = 2+sin(t)
mu = 1+cos(3*t)
alpha = 2-cos(3*t)
sigma = 1-cos(7*t)
eta = 1-sin(t)
""",
    DemoId.EXAMPLE2: """\
# type-3 functional response
variant = S3
omega = 2*pi
rho = 1+sin(t)
kappa = 2+sin(2*t)
mu = 2+cos(3*t)
alpha = 2+cos(2*t)
beta = 2-cos(3*t)
sigma = 1+cos(t)
eta = 1-sin(t)
""",
    DemoId.EXAMPLE3: """\
# Leslie-Gower system
variant = S1
omega = 2*pi
rho = 1+sin(2*t)
kappa = 2+sin(5*t)
mu = 1+cos(3*t)
sigma = 1-cos(t)
eta = 1-sin(t)
""",
}

# Published x(0), y(0) of the periodic solutions.
PUBLISHED_INITIAL_VALUES: dict[DemoId, tuple[float, float]] = {
    DemoId.EXAMPLE1: (0.8416874693971644, 0.5259233975099778),
    DemoId.EXAMPLE2: (0.6406510789582541, 0.4091984714503302),
    DemoId.EXAMPLE3: (0.6504022496685088, 0.3825388660004428),
}

# Published bounds on |x(0) - x(2 pi)| + |y(0) - y(2 pi)|.
PUBLISHED_DEFECT_BOUNDS: dict[DemoId, float] = {
    DemoId.EXAMPLE1: 1.5096e-11,
    DemoId.EXAMPLE2: 3.1943e-11,
    DemoId.EXAMPLE3: 3.3083e-11,
}
