"""Rate tables for the standard scenarios and the printed reference values.

Scenarios follow ``p = (1 + eta) m(mu)``.  For the compound Poisson tables
the intensity is ``beta = 1`` and the mean claim is 2, so ``p = 2 (1 + eta)``.
The gamma process and inverse Gaussian tables use ``GammaP(1/2, 1/2)`` and
``IGP(1)``, both with ``m(mu) = 1``.
"""

from dataclasses import dataclass

import numpy as np

from .levy import CompoundPoisson, Exponential, Gamma, GammaProcess, InverseGaussian, MixedExponential
from .rate import solve_rate
from .risk import RiskModel

SIGMAS = tuple(range(11))
ETAS_WIDE = (0.05, 0.1, 0.15, 0.2, 0.25, 0.3)
ETAS = (0.1, 0.2, 0.3)
# printed values carry 5 decimals
PRINTED_TOL = 1e-5

CLAIM_LAWS = {
    "Exp(1/2)": Exponential(0.5),
    "Gamma(2,1)": Gamma(2.0, 1.0),
    "MExp(3/4,3/4,1/4)": MixedExponential(0.75, 0.75, 0.25),
}
LEVY_MODELS = {
    "GammaP(1/2,1/2)": GammaProcess(0.5, 0.5),
    "IGP(1)": InverseGaussian(1.0),
}

# rows: sigma = 0..10; columns: ETAS_WIDE
PRINTED_TABLE1 = (
    (0.00082, 0.00319, 0.00704, 0.01227, 0.01881, 0.02658),
    (0.0007, 0.00277, 0.00613, 0.01073, 0.01653, 0.02345),
    (0.0005, 0.00197, 0.00439, 0.00775, 0.01201, 0.01716),
    (0.00033, 0.00132, 0.00297, 0.00526, 0.00819, 0.01174),
    (0.00023, 0.00091, 0.00204, 0.00361, 0.00563, 0.0081),
    (0.00016, 0.00064, 0.00145, 0.00257, 0.00402, 0.00578),
    (0.00012, 0.00048, 0.00107, 0.0019, 0.00297, 0.00427),
    (9e-05, 0.00036, 0.00082, 0.00145, 0.00227, 0.00327),
    (7e-05, 0.00029, 0.00064, 0.00114, 0.00178, 0.00257),
    (6e-05, 0.00023, 0.00052, 0.00092, 0.00144, 0.00207),
    (5e-05, 0.00019, 0.00042, 0.00075, 0.00118, 0.0017),
)

# rows: (sigma, eta) for sigma = 0..10, eta in ETAS; columns follow CLAIM_LAWS
PRINTED_TABLE2 = (
    (0.00238, 0.00319, 0.00177),
    (0.00911, 0.01227, 0.00668),
    (0.01965, 0.02658, 0.01426),
    (0.00214, 0.00277, 0.00163),
    (0.00824, 0.01073, 0.00621),
    (0.01791, 0.02345, 0.01335),
    (0.00163, 0.00197, 0.00132),
    (0.00638, 0.00775, 0.00511),
    (0.01405, 0.01716, 0.01114),
    (0.00116, 0.00132, 0.001),
    (0.0046, 0.00526, 0.00392),
    (0.01024, 0.01174, 0.00865),
    (0.00083, 0.00091, 0.00074),
    (0.0033, 0.00361, 0.00294),
    (0.00737, 0.0081, 0.00654),
    (0.0006, 0.00064, 0.00056),
    (0.00241, 0.00257, 0.00222),
    (0.00541, 0.00578, 0.00496),
    (0.00045, 0.00048, 0.00043),
    (0.00181, 0.0019, 0.0017),
    (0.00407, 0.00427, 0.00382),
    (0.00035, 0.00036, 0.00033),
    (0.0014, 0.00145, 0.00134),
    (0.00315, 0.00327, 0.003),
    (0.00028, 0.00029, 0.00027),
    (0.00111, 0.00114, 0.00107),
    (0.0025, 0.00257, 0.0024),
    (0.00022, 0.00023, 0.00022),
    (0.0009, 0.00092, 0.00087),
    (0.00202, 0.00207, 0.00196),
    (0.00019, 0.00019, 0.00018),
    (0.00074, 0.00075, 0.00072),
    (0.00167, 0.0017, 0.00162),
)

# rows as in PRINTED_TABLE2; columns follow LEVY_MODELS
PRINTED_TABLE3 = (
    (0.02617, 0.05),
    (0.05442, 0.1),
    (0.08441, 0.15),
    (0.01809, 0.0271),
    (0.03882, 0.05806),
    (0.06189, 0.09238),
    (0.00921, 0.01104),
    (0.02013, 0.02412),
    (0.03272, 0.03923),
    (0.00503, 0.00552),
    (0.01101, 0.01207),
    (0.01794, 0.01965),
    (0.00307, 0.00324),
    (0.00671, 0.00709),
    (0.01094, 0.01153),
    (0.00204, 0.00212),
    (0.00447, 0.00463),
    (0.00727, 0.00753),
    (0.00145, 0.00149),
    (0.00317, 0.00325),
    (0.00516, 0.00529),
    (0.00108, 0.0011),
    (0.00236, 0.0024),
    (0.00384, 0.00391),
    (0.00083, 0.00085),
    (0.00182, 0.00185),
    (0.00296, 0.00301),
    (0.00066, 0.00067),
    (0.00145, 0.00146),
    (0.00236, 0.00238),
    (0.00054, 0.00054),
    (0.00118, 0.00119),
    (0.00192, 0.00193),
)


def loaded_model(jumps, eta, sigma):
    """Model with premium ``(1 + eta) m(mu)`` and constant volatility ``sigma``."""
    return RiskModel((1.0 + eta) * jumps.mean, float(sigma), jumps)


def compound_poisson_model(claims, eta, sigma, intensity=1.0):
    return loaded_model(CompoundPoisson(intensity, claims), eta, sigma)


@dataclass(frozen=True)
class TableCell:
    table: str
    model: str
    sigma: float
    eta: float
    k: float
    lam: float
    printed: float


def table1():
    cells = []
    for i, s in enumerate(SIGMAS):
        for j, eta in enumerate(ETAS_WIDE):
            r = solve_rate(compound_poisson_model(CLAIM_LAWS["Gamma(2,1)"], eta, s))
            cells.append(TableCell("table1", "Gamma(2,1)", s, eta, r.k, r.lam, PRINTED_TABLE1[i][j]))
    return cells


def _by_sigma_eta(name, models, printed, build):
    cells = []
    row = 0
    for s in SIGMAS:
        for eta in ETAS:
            for c, (label, obj) in enumerate(models.items()):
                r = solve_rate(build(obj, eta, s))
                cells.append(TableCell(name, label, s, eta, r.k, r.lam, printed[row][c]))
            row += 1
    return cells


def table2():
    return _by_sigma_eta("table2", CLAIM_LAWS, PRINTED_TABLE2, compound_poisson_model)


def table3():
    return _by_sigma_eta("table3", LEVY_MODELS, PRINTED_TABLE3, loaded_model)


def discrepancy(cell, tol=PRINTED_TOL):
    return abs(cell.k - cell.printed) > tol


def rate_curve(jumps_or_claims, eta, sigmas, compound=True):
    """``k`` as a function of sigma at fixed eta, for figure data."""
    build = compound_poisson_model if compound else loaded_model
    return np.array([solve_rate(build(jumps_or_claims, eta, s)).k for s in sigmas])


def rate_curve_eta(jumps_or_claims, etas, sigma, compound=True):
    """``k`` as a function of eta at fixed sigma, for figure data."""
    build = compound_poisson_model if compound else loaded_model
    return np.array([solve_rate(build(jumps_or_claims, e, sigma)).k for e in etas])
