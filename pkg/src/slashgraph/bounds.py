"""Lower bounds on L1 distortion from isoperimetric and spectral constants."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .config import DEFAULT_CAPS, Caps
from .errors import DomainError
from .graph import collapsing_map_diamond, diamond_graph, power_sizes
from .isoperimetry import iso_dimension, power_conditions
from .measures import standard_metric, uniform_edge_measure
from .spectral import base_function_diamond, build_spectral_family, is_base_function, profile_report, proof_constants


@dataclass(frozen=True)
class BoundInputs:
    c_iso: float
    c_one: float
    c_inf: float
    c_gamma: float
    delta_iso: float
    delta_spec: float
    beta: float

    def __post_init__(self):
        for name in ("c_iso", "c_one", "c_inf", "c_gamma"):
            val = float(getattr(self, name))
            if not (val > 0 and math.isfinite(val)):
                raise DomainError(f"{name} must be a positive finite number")
        if not float(self.delta_iso) >= 2:
            raise DomainError("the isoperimetric dimension must be at least 2")
        if not float(self.delta_spec) >= 1:
            raise DomainError("the spectral dimension must be at least 1")
        if not float(self.beta) >= 1:
            raise DomainError("the bandwidth must be at least 1")


def growth_integral(delta_spec: float, delta_iso: float, beta: float) -> float:
    """``integral_1^beta s**(delta_spec - delta_iso - 1) ds`` in closed form."""
    gap = float(delta_spec) - float(delta_iso)
    if gap == 0:
        return math.log(beta)
    return (beta**gap - 1) / gap


def kislyakov_bound(b: BoundInputs) -> float:
    """Distortion lower bound ``D_min`` built from the seven inputs."""
    di = float(b.delta_iso)
    integral = growth_integral(b.delta_spec, di, float(b.beta))
    front = 1 / (2 * float(b.c_iso) * float(b.c_one) ** 2 * float(b.c_inf))
    return front * (di / float(b.c_gamma)) ** (1 / di) * integral ** (1 / di)


@dataclass(frozen=True)
class BoundReport:
    """``value`` is the bound; ``comparison`` is ``(ln |V|) ** (1 / delta)``.

    ``provenance`` says for each constant whether it is the published
    envelope (``"paper"``) or was certified by computation in this run
    (``"certified"``); ``measured`` holds the sharper values observed on
    the actual family when it was built.
    """

    k: int
    m: int
    n: int
    constants: str
    inputs: BoundInputs
    value: float
    n_vertices: int
    comparison: float
    provenance: dict[str, str]
    measured: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["inputs"] = asdict(self.inputs)
        return out


def envelope_constants(k: int, m: int) -> dict[str, float]:
    return {"c_iso": m / 2, "c_one": 6.0, "c_inf": 1.0, "c_gamma": float(2 * k * k * m * m)}


def certified_constants(k: int, m: int, caps: Caps = DEFAULT_CAPS) -> tuple[dict[str, float], float]:
    """Constants whose hypotheses are checked exactly on ``D_{k,m}``.

    The isoperimetric constant is ``1 / c`` once both power conditions
    hold; the spectral constants follow from an exactly verified base
    function. Returns the constants and the isoperimetric dimension.
    """
    g = diamond_graph(k, m)
    nu = uniform_edge_measure(g)
    d = standard_metric(g)
    delta = iso_dimension(nu, d)
    cond = power_conditions(g, delta, nu, d, caps)
    if not cond.holds:
        raise DomainError("power conditions fail, so no uniform isoperimetric constant is certified")
    pi = collapsing_map_diamond(k, m)
    phi = base_function_diamond(k, m)
    if not is_base_function(phi, pi, nu):
        raise DomainError("diamond base function failed its exact check")
    pc = proof_constants(phi, g)
    consts = {
        "c_iso": float(1 / cond.c),
        "c_one": float(pc["c_one"]),
        "c_inf": float(pc["c_inf"]),
        "c_gamma": float(pc["c_gamma"]),
    }
    return consts, delta


def diamond_bound(
    k: int,
    m: int,
    n: int,
    constants: str = "paper",
    caps: Caps = DEFAULT_CAPS,
    measure_family_up_to: int = 256,
) -> BoundReport:
    """Bound for ``D_{k,m}^n`` with bandwidth ``k**n``.

    The spectral family is built and measured only when ``G^n`` has at most
    ``measure_family_up_to`` edges.
    """
    if n < 1:
        raise DomainError("power must be at least 1")
    if constants == "paper":
        consts = envelope_constants(k, m)
        diamond_graph(k, m)  # validates k and m
        delta = 1 + math.log(m) / math.log(k)
    elif constants == "certified":
        consts, delta = certified_constants(k, m, caps)
    else:
        raise ValueError("constants must be 'paper' or 'certified'")
    beta = float(k**n)
    inputs = BoundInputs(delta_iso=float(delta), delta_spec=float(delta), beta=beta, **consts)
    nv, ne = power_sizes((k - 1) * m + 2, k * m, n)
    measured = {}
    if constants == "certified" and ne <= measure_family_up_to:
        fam = build_spectral_family(diamond_graph(k, m), collapsing_map_diamond(k, m), base_function_diamond(k, m), n, caps=caps)
        rep = profile_report(fam, float(delta), beta)
        measured = {
            "c_one": float(rep.c_one),
            "c_inf": float(rep.c_inf),
            "c_gamma": rep.c_gamma,
            "c_gamma_continuum": rep.c_gamma_continuum,
        }
    return BoundReport(
        k=k,
        m=m,
        n=n,
        constants=constants,
        inputs=inputs,
        value=kislyakov_bound(inputs),
        n_vertices=nv,
        comparison=math.log(nv) ** (1 / float(delta)),
        provenance={name: constants for name in ("c_iso", "c_one", "c_inf", "c_gamma")},
        measured=measured,
    )

