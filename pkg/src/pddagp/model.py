"""
Scenario description, channel generation and effective channels.

Channels are stored as stacked arrays, one leading index per receiver:

=========  =====================  ============
attribute  shape                  link
=========  =====================  ============
``h_s``    (n_s, n_b)             BS -> IRS
``h_i``    (m_i, n_i, n_b)        BS -> IR
``h_e``    (m_e, n_e, n_b)        BS -> ER
``g_i``    (m_i, n_i, n_s)        IRS -> IR
``g_e``    (m_e, n_e, n_s)        IRS -> ER
=========  =====================  ============

After noise normalization the three BS-side channels are divided by the
noise standard deviation, which puts every received power in units of the
noise floor.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import AlreadyNormalized, ConfigInvalid, DegenerateGeometry, DimensionMismatch

__all__ = ['PathLoss', 'Fading', 'ScenarioConfig', 'ChannelSet',
           'EffectiveChannels', 'noise_power', 'generate_channels',
           'effective_channels', 'rician_matrix', 'dbm_to_watt']

UNIT_MODULUS_TOL = 1e-9


def dbm_to_watt(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass
class PathLoss:
    """Log-distance path loss ``PL(d) = C0 * d**(-exponent)`` with d in metres."""
    ref_loss_db: float = -30.0
    bs_irs: float = 2.2
    irs_ir: float = 2.2
    irs_er: float = 2.2
    bs_ir: float = 3.6
    bs_er: float = 3.6

    def gain(self, link, d):
        return 10.0 ** (self.ref_loss_db / 10.0) * d ** (-getattr(self, link))


@dataclass
class Fading:
    """Linear Rician K-factors per link; 0 is Rayleigh, ``inf`` is pure LoS."""
    bs_irs: float = 10 ** 0.3
    irs_ir: float = 10 ** 0.3
    irs_er: float = 10 ** 0.3
    bs_ir: float = 0.0
    bs_er: float = 0.0


@dataclass
class ScenarioConfig:
    n_b: int = 4
    n_i: int = 2
    n_e: int = 2
    n_s: int = 100
    m_i: int = 2
    m_e: int = 4
    p_b_dbm: float = 30.0
    p_th_mw: float = 0.2
    eta: float = 0.5
    omega: Optional[list] = None
    alpha: Optional[list] = None
    noise_psd_dbm_hz: float = -160.0
    bandwidth_hz: float = 1e6
    bs_pos: tuple = (0.0, 0.0)
    irs_pos: tuple = (5.0, 2.0)
    ir_center: tuple = (400.0, 0.0)
    ir_radius: float = 4.0
    er_center_x: float = 5.0
    er_radius: float = 1.0
    pathloss: PathLoss = field(default_factory=PathLoss)
    fading: Fading = field(default_factory=Fading)
    seed: int = 0

    def __post_init__(self):
        if self.omega is None:
            self.omega = [1.0] * self.m_i
        if self.alpha is None:
            self.alpha = [1.0] * self.m_e
        if isinstance(self.pathloss, dict):
            self.pathloss = PathLoss(**self.pathloss)
        if isinstance(self.fading, dict):
            self.fading = Fading(**self.fading)
        self.omega = [float(v) for v in self.omega]
        self.alpha = [float(v) for v in self.alpha]
        self.bs_pos = tuple(float(v) for v in self.bs_pos)
        self.irs_pos = tuple(float(v) for v in self.irs_pos)
        self.ir_center = tuple(float(v) for v in self.ir_center)
        self.validate()

    def validate(self):
        for name in ('n_b', 'n_i', 'n_e', 'm_i', 'm_e'):
            if getattr(self, name) < 1:
                raise ConfigInvalid(f"{name} must be >= 1")
        # an empty surface is allowed so the no-IRS case is expressible
        if self.n_s < 0:
            raise ConfigInvalid("n_s must be >= 0")
        if not 0 < self.eta <= 1:
            raise ConfigInvalid("eta must lie in (0, 1]")
        if self.p_th_mw <= 0:
            raise ConfigInvalid("p_th_mw must be positive")
        if self.bandwidth_hz <= 0:
            raise ConfigInvalid("bandwidth_hz must be positive")
        if len(self.omega) != self.m_i or len(self.alpha) != self.m_e:
            raise ConfigInvalid("omega/alpha lengths must match m_i/m_e")
        # alpha = 0 is admitted: it switches an ER off
        if any(w <= 0 for w in self.omega) or any(a < 0 for a in self.alpha):
            raise ConfigInvalid("weights must be positive")
        if self.ir_radius < 0 or self.er_radius < 0:
            raise ConfigInvalid("radii must be non-negative")

    @property
    def p_b(self):
        """Transmit power budget in watts."""
        return dbm_to_watt(self.p_b_dbm)

    @property
    def noise_power(self):
        return noise_power(self)

    @property
    def p_th_norm(self):
        """Harvest threshold divided by the noise power (both in watts)."""
        return self.p_th_mw * 1e-3 / noise_power(self)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        return dataclasses.asdict(self)

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigInvalid(f"unknown scenario fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def noise_power(cfg):
    """Noise power in watts from the PSD (dBm/Hz) and bandwidth (Hz)."""
    return 10.0 ** ((cfg.noise_psd_dbm_hz - 30.0) / 10.0) * cfg.bandwidth_hz


@dataclass(frozen=True, eq=False)
class ChannelSet:
    h_s: np.ndarray
    h_i: np.ndarray
    h_e: np.ndarray
    g_i: np.ndarray
    g_e: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        n_s, n_b = self.h_s.shape
        m_i, n_i, _ = self.g_i.shape
        m_e, n_e, _ = self.g_e.shape
        if (self.h_i.shape != (m_i, n_i, n_b) or self.h_e.shape != (m_e, n_e, n_b)
                or self.g_i.shape[2] != n_s or self.g_e.shape[2] != n_s):
            raise DimensionMismatch(
                f"inconsistent channel shapes: h_s {self.h_s.shape}, h_i {self.h_i.shape},"
                f" h_e {self.h_e.shape}, g_i {self.g_i.shape}, g_e {self.g_e.shape}")
        for a in (self.h_s, self.h_i, self.h_e, self.g_i, self.g_e):
            a.setflags(write=False)

    @property
    def dims(self):
        n_s, n_b = self.h_s.shape
        m_i, n_i, _ = self.h_i.shape
        m_e, n_e, _ = self.h_e.shape
        return dict(n_b=n_b, n_i=n_i, n_e=n_e, n_s=n_s, m_i=m_i, m_e=m_e)

    def normalize(self, sigma):
        """Divide the BS-side channels by the noise standard deviation."""
        if self.normalized:
            raise AlreadyNormalized("channel set is already noise-normalized")
        return ChannelSet(self.h_s / sigma, self.h_i / sigma, self.h_e / sigma,
                          self.g_i, self.g_e, normalized=True)

    def without_irs(self):
        """Same channels with the reflected paths removed."""
        return dataclasses.replace(self, g_i=np.zeros_like(self.g_i),
                                   g_e=np.zeros_like(self.g_e))

    def fingerprint(self):
        h = hashlib.sha256()
        for a in (self.h_s, self.h_i, self.h_e, self.g_i, self.g_e):
            h.update(np.ascontiguousarray(a, dtype=complex).tobytes())
        return h.hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class EffectiveChannels:
    z: np.ndarray
    xi: np.ndarray
    channels: Optional[ChannelSet] = None


def rician_matrix(rng, shape, gain, k_factor):
    """
    ``sqrt(gain) * (sqrt(K/(K+1)) * LoS + sqrt(1/(K+1)) * NLoS)``.

    The LoS part is the outer product of two unit-modulus vectors with
    uniform random phases; the NLoS part is i.i.d. CN(0, 1). Both are always
    drawn so the generator stream does not depend on ``k_factor``.
    """
    rows, cols = shape
    a = np.exp(2j * np.pi * rng.random(rows))
    b = np.exp(2j * np.pi * rng.random(cols))
    los = np.outer(a, b.conj())
    nlos = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    if math.isinf(k_factor):
        w_los, w_nlos = 1.0, 0.0
    else:
        w_los = math.sqrt(k_factor / (k_factor + 1.0))
        w_nlos = math.sqrt(1.0 / (k_factor + 1.0))
    return math.sqrt(gain) * (w_los * los + w_nlos * nlos)


def _uniform_in_disc(rng, center, radius, count):
    r = radius * np.sqrt(rng.random(count))
    t = 2 * np.pi * rng.random(count)
    return np.column_stack([center[0] + r * np.cos(t), center[1] + r * np.sin(t)])


def _distance(p, q):
    d = float(np.hypot(p[0] - q[0], p[1] - q[1]))
    if d == 0.0:
        raise DegenerateGeometry(f"nodes at {tuple(p)} and {tuple(q)} coincide")
    return d


def generate_channels(cfg, rng=None, normalize=True):
    """
    Draw one channel realization for ``cfg``.

    Receiver positions are drawn first (IRs, then ERs), followed by the
    links in the order BS-IRS, BS-IR, IRS-IR, BS-ER, IRS-ER.

    Parameters
    ----------
    cfg : ScenarioConfig
    rng : numpy.random.Generator, optional
        Defaults to ``np.random.default_rng(cfg.seed)``.
    normalize : bool
        Divide the BS-side channels by the noise standard deviation.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    pl, fd = cfg.pathloss, cfg.fading
    bs, irs = cfg.bs_pos, cfg.irs_pos
    ir_pos = _uniform_in_disc(rng, cfg.ir_center, cfg.ir_radius, cfg.m_i)
    er_pos = _uniform_in_disc(rng, (cfg.er_center_x, 0.0), cfg.er_radius, cfg.m_e)

    h_s = rician_matrix(rng, (cfg.n_s, cfg.n_b), pl.gain('bs_irs', _distance(bs, irs)), fd.bs_irs)
    h_i = np.empty((cfg.m_i, cfg.n_i, cfg.n_b), dtype=complex)
    g_i = np.empty((cfg.m_i, cfg.n_i, cfg.n_s), dtype=complex)
    for m, pos in enumerate(ir_pos):
        h_i[m] = rician_matrix(rng, (cfg.n_i, cfg.n_b), pl.gain('bs_ir', _distance(bs, pos)), fd.bs_ir)
        g_i[m] = rician_matrix(rng, (cfg.n_i, cfg.n_s), pl.gain('irs_ir', _distance(irs, pos)), fd.irs_ir)
    h_e = np.empty((cfg.m_e, cfg.n_e, cfg.n_b), dtype=complex)
    g_e = np.empty((cfg.m_e, cfg.n_e, cfg.n_s), dtype=complex)
    for l, pos in enumerate(er_pos):
        h_e[l] = rician_matrix(rng, (cfg.n_e, cfg.n_b), pl.gain('bs_er', _distance(bs, pos)), fd.bs_er)
        g_e[l] = rician_matrix(rng, (cfg.n_e, cfg.n_s), pl.gain('irs_er', _distance(irs, pos)), fd.irs_er)

    ch = ChannelSet(h_s, h_i, h_e, g_i, g_e)
    if normalize:
        ch = ch.normalize(math.sqrt(noise_power(cfg)))
    return ch


def effective_channels(ch, phi, check_unit=True):
    """
    Direct-plus-reflected channels ``Z_m = H_mI + G_mI diag(phi) H_S`` and
    ``Xi_l = H_lE + G_lE diag(phi) H_S``.

    ``check_unit=False`` skips the unit-modulus check, which gradient
    checks need when perturbing ``phi`` off the circle.
    """
    phi = np.asarray(phi)
    if phi.shape != (ch.h_s.shape[0],):
        raise DimensionMismatch(f"phi has shape {phi.shape}, expected ({ch.h_s.shape[0]},)")
    if check_unit and phi.size and np.max(np.abs(np.abs(phi) - 1.0)) > UNIT_MODULUS_TOL:
        raise ValueError("phi is not unit-modulus")
    # diag(phi) H_S scales the rows of H_S, so the cost is linear in n_s
    reflected = phi[:, None] * ch.h_s
    z = ch.h_i + ch.g_i @ reflected
    xi = ch.h_e + ch.g_e @ reflected
    return EffectiveChannels(z, xi, ch)
