"""
Simplified half-car suspension evaluator.

The same configuration is built at the front and at the rear of the car.
The chassis is a rigid body with heave and pitch about its centre c1,
each wheel follows its prescribed vertical road input and may camber
about the x axis. Free joints are point masses with three translational
degrees of freedom. Beams and shock absorbers are axial spring-dampers,
welded joints add angular springs between every pair of incident beams.
The model is linearized about the rest pose, preload and gravity are ignored.

This is a lumped stand-in for a flexible multibody solver
and is labeled as simplified in every output.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from assembly import ProblemSpec, Solution, active_component_count, active_joint_count, is_feasible
from .core import DivergedSimulation, Evaluator, FitnessError
from .dynamics import LumpedNetwork, integrate

log = logging.getLogger(__name__)

# joint and component type codes used by suspension problem files
WELDED = 1
SPHERICAL = 2
BEAM = 1
SHOCK = 2

INSTANCES = ("front", "rear")
BODY_ROLES = ("chassis", "wheel")
DAMPING_INTERPRETATIONS = ("coefficient", "ratio")
COUNT_TERMS = ("components", "joints")

# chassis degrees of freedom, wheel camber follows, then free joints
HEAVE = 0
PITCH = 1
N_BODY_DOFS = 2 + len(INSTANCES)

# beam pairs closer to collinear than this get no weld spring
MIN_WELD_SINE = 1e-6


def _get(raw: dict, path: str):
    node = raw
    for key in path.split("."):
        if not isinstance(node, dict) or key not in node:
            raise FitnessError("Missing simulation parameter %s" % path)
        node = node[key]
    return node


def _number(raw: dict, path: str, positive=True) -> float:
    value = _get(raw, path)
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise FitnessError("%s must be a number, got %r" % (path, value))
    if positive and not value > 0:
        raise FitnessError("%s must be positive, got %r" % (path, value))
    if not positive and not value >= 0:
        raise FitnessError("%s must be non-negative, got %r" % (path, value))
    return value


def _vector(raw: dict, path: str) -> np.ndarray:
    try:
        v = np.asarray(_get(raw, path), dtype=float)
    except (TypeError, ValueError):
        raise FitnessError("%s must be a 3-vector" % path)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise FitnessError("%s must be a 3-vector" % path)
    return v


def _choice(raw: dict, path: str, options, default):
    try:
        value = _get(raw, path)
    except FitnessError:
        return default
    if value not in options:
        raise FitnessError("%s must be one of %s, got %r" % (path, ", ".join(options), value))
    return value


@dataclass(frozen=True)
class WheelParams:
    mass: float
    inertia: np.ndarray
    center: np.ndarray
    # vertical road input: amplitude * sin(omega * t) at the centre
    amplitude: float
    omega: float

    def input(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Displacement and velocity of the road input"""
        return (
            self.amplitude * np.sin(self.omega * t),
            self.amplitude * self.omega * np.cos(self.omega * t),
        )


@dataclass(frozen=True)
class FitnessWeights:
    # displacement weight
    w1: float = 5000.0
    # component (or joint) count weight
    w2: float = 100.0

    def __post_init__(self):
        if not (self.w1 >= 0 and self.w2 >= 0):
            raise FitnessError("Fitness weights must be non-negative")

    @classmethod
    def from_params(cls, raw: dict) -> "FitnessWeights":
        return cls(_number(raw, "weights.w1", False), _number(raw, "weights.w2", False))


@dataclass(frozen=True)
class SimParams:
    # joint positions per instance, row i - 1 is joint i
    joints: Dict[str, np.ndarray]
    shock_stiffness: float
    shock_length: float
    shock_damping: float
    damping_interpretation: str
    beam_area: float
    beam_density: float
    beam_modulus: float
    # kept for completeness, the axial model has no bending or torsion
    beam_shear_modulus: float
    beam_second_moments: Tuple[float, float]
    beam_polar_moment: float
    beam_damping_ratio: float
    chassis_mass: float
    chassis_inertia: np.ndarray
    # c1, q1..q3, b1..b3
    chassis_points: Dict[str, np.ndarray]
    wheels: Dict[str, WheelParams]
    joint_mass: float
    weld_stiffness: float
    dt: float
    duration: float
    count_term: str = "components"
    signed_acceleration: bool = False
    # envo name -> "chassis" or "wheel"
    envo_bodies: Optional[Dict[str, str]] = None

    @property
    def steps(self) -> int:
        return int(round(self.duration / self.dt))

    @property
    def pitch_inertia(self) -> float:
        return float(self.chassis_inertia[1])

    def shock_damping_coefficient(self) -> float:
        if self.damping_interpretation == "coefficient":
            return self.shock_damping
        # damping ratio of a quarter of the chassis on one shock
        return 2.0 * self.shock_damping * np.sqrt(self.shock_stiffness * self.chassis_mass / 4)

    def beam_stiffness(self, length: float) -> float:
        return self.beam_modulus * self.beam_area / length

    def beam_mass(self, length: float) -> float:
        return self.beam_density * self.beam_area * length

    def beam_damping(self, length: float) -> float:
        k = self.beam_stiffness(length)
        return 2.0 * self.beam_damping_ratio * np.sqrt(k * self.joint_mass)

    @classmethod
    def from_params(cls, raw: dict, n_joints: Optional[int] = None) -> "SimParams":
        """Parses and validates the fitness.params block of a problem file"""
        joints = {}
        for name in INSTANCES:
            try:
                rows = np.asarray(_get(raw, "joints." + name), dtype=float)
            except (TypeError, ValueError):
                raise FitnessError("joints.%s must be a list of 3-vectors" % name)
            if rows.ndim != 2 or rows.shape[1] != 3:
                raise FitnessError("joints.%s must be a list of 3-vectors" % name)
            if n_joints is not None and rows.shape[0] != n_joints:
                raise FitnessError(
                    "joints.%s has %d positions, expected %d" % (name, rows.shape[0], n_joints)
                )
            joints[name] = rows
        wheels = {}
        for name in INSTANCES:
            p = "wheels.%s." % name
            inertia = _vector(raw, p + "inertia")
            if np.any(inertia <= 0):
                raise FitnessError(p + "inertia must be positive")
            wheels[name] = WheelParams(
                mass=_number(raw, p + "mass"),
                inertia=inertia,
                center=_vector(raw, p + "center"),
                amplitude=_number(raw, p + "amplitude", False),
                omega=_number(raw, p + "omega"),
            )
        chassis_inertia = _vector(raw, "chassis.inertia")
        if np.any(chassis_inertia <= 0):
            raise FitnessError("chassis.inertia must be positive")
        bodies = raw.get("envo_bodies")
        if bodies is not None:
            bad = [v for v in bodies.values() if v not in BODY_ROLES]
            if bad:
                raise FitnessError("Unknown envo body %r" % bad[0])
        params = cls(
            joints=joints,
            shock_stiffness=_number(raw, "shock.spring_constant"),
            shock_length=_number(raw, "shock.initial_length"),
            shock_damping=_number(raw, "shock.damping"),
            damping_interpretation=_choice(
                raw, "shock.damping_interpretation", DAMPING_INTERPRETATIONS, "coefficient"
            ),
            beam_area=_number(raw, "beam.area"),
            beam_density=_number(raw, "beam.density"),
            beam_modulus=_number(raw, "beam.elastic_modulus"),
            beam_shear_modulus=_number(raw, "beam.shear_modulus"),
            beam_second_moments=(
                _number(raw, "beam.second_moment_y"),
                _number(raw, "beam.second_moment_z"),
            ),
            beam_polar_moment=_number(raw, "beam.polar_moment"),
            beam_damping_ratio=_number(raw, "beam.damping_ratio", False),
            chassis_mass=_number(raw, "chassis.mass"),
            chassis_inertia=chassis_inertia,
            chassis_points={
                k: _vector(raw, "chassis." + k) for k in ("c1", "q1", "q2", "q3", "b1", "b2", "b3")
            },
            wheels=wheels,
            joint_mass=_number(raw, "joint_mass"),
            weld_stiffness=_number(raw, "weld_angular_stiffness"),
            dt=_number(raw, "sim.dt"),
            duration=_number(raw, "sim.duration"),
            count_term=_choice(raw, "count_term", COUNT_TERMS, "components"),
            signed_acceleration=bool(raw.get("signed_acceleration", False)),
            envo_bodies=dict(bodies) if bodies is not None else None,
        )
        if params.steps < 1:
            raise FitnessError("Simulation duration is shorter than one time step")
        return params


@dataclass
class Trajectory:
    time: np.ndarray
    a_z_q1: np.ndarray
    d_q2: np.ndarray
    d_q3: np.ndarray

    def __len__(self):
        return len(self.time)


def body_roles(spec: ProblemSpec, params: SimParams) -> Dict[int, str]:
    """joint -> "chassis" or "wheel" for every envo joint"""
    mapping = params.envo_bodies or {e.name: e.name for e in spec.envos}
    roles = {}
    for i, m in spec.envo_of.items():
        name = spec.envos[m].name
        role = mapping.get(name)
        if role not in BODY_ROLES:
            raise FitnessError("Envo %s is not mapped to a chassis or a wheel" % name)
        roles[i] = role
    return roles


class SuspensionModel:
    """Degrees of freedom and displacement maps of one assembly"""

    def __init__(self, spec: ProblemSpec, s: Solution, params: SimParams):
        self.spec = spec
        self.params = params
        self.values = s.values
        self.roles = body_roles(spec, params)
        # (i, j, code) of every used component
        self.elements = [
            v.pair + (self.values[v.flat_index],)
            for v in spec.components
            if self.values[v.flat_index] != 0
        ]
        # free joints carrying components become point masses
        carrying = {i for i, j, _ in self.elements} | {j for i, j, _ in self.elements}
        self.free = [i for i in spec.free_joints if i in carrying]
        self.dof_of: Dict[Tuple[str, int], int] = {}
        for instance in INSTANCES:
            for i in self.free:
                self.dof_of[(instance, i)] = N_BODY_DOFS + 3 * len(self.dof_of)
        self.n = N_BODY_DOFS + 3 * len(self.dof_of)
        self.m = len(INSTANCES)

    def position(self, instance: str, i: int) -> np.ndarray:
        return self.params.joints[instance][i - 1]

    def chassis_map(self, point: np.ndarray):
        """Displacement of a chassis point: (theta dz, 0, h - theta dx) about c1"""
        d = point - self.params.chassis_points["c1"]
        G = np.zeros((3, self.n))
        G[2, HEAVE] = 1.0
        G[0, PITCH] = d[2]
        G[2, PITCH] = -d[0]
        return G, np.zeros((3, self.m))

    def point_map(self, instance: str, i: int):
        """(G, H) with displacement = G q + H w for joint i of an instance"""
        p = self.position(instance, i)
        role = self.roles.get(i)
        if role == "chassis":
            return self.chassis_map(p)
        G = np.zeros((3, self.n))
        H = np.zeros((3, self.m))
        if role == "wheel":
            w = INSTANCES.index(instance)
            d = p - self.params.wheels[instance].center
            # camber about x through the wheel centre
            G[1, 2 + w] = -d[2]
            G[2, 2 + w] = d[1]
            H[2, w] = 1.0
            return G, H
        base = self.dof_of.get((instance, i))
        if base is None:
            raise FitnessError("Joint %d carries no component" % i)
        G[:, base : base + 3] = np.eye(3)
        return G, H

    def masses(self) -> np.ndarray:
        mass = np.zeros(self.n)
        mass[HEAVE] = self.params.chassis_mass
        mass[PITCH] = self.params.pitch_inertia
        for w, instance in enumerate(INSTANCES):
            mass[2 + w] = self.params.wheels[instance].inertia[0]
        for (instance, i), base in self.dof_of.items():
            m = self.params.joint_mass
            for a, b, code in self.elements:
                if code == BEAM and i in (a, b):
                    length = np.linalg.norm(self.position(instance, b) - self.position(instance, a))
                    m += 0.5 * self.params.beam_mass(length)
            mass[base : base + 3] = m
        return mass

    def network(self) -> LumpedNetwork:
        K = np.zeros((self.n, self.n))
        C = np.zeros((self.n, self.n))
        K_u = np.zeros((self.n, self.m))
        C_u = np.zeros((self.n, self.m))
        shock_c = self.params.shock_damping_coefficient()
        for instance in INSTANCES:
            for a, b, code in self.elements:
                pa = self.position(instance, a)
                pb = self.position(instance, b)
                length = np.linalg.norm(pb - pa)
                if length == 0:
                    raise FitnessError("Joints %d and %d coincide" % (a, b))
                e = (pb - pa) / length
                Ga, Ha = self.point_map(instance, a)
                Gb, Hb = self.point_map(instance, b)
                # elongation = B q + D w
                B = e @ (Gb - Ga)
                D = e @ (Hb - Ha)
                if code == BEAM:
                    k = self.params.beam_stiffness(length)
                    c = self.params.beam_damping(length)
                elif code == SHOCK:
                    k = self.params.shock_stiffness
                    c = shock_c
                else:
                    raise FitnessError("Unknown component type %d" % code)
                K += k * np.outer(B, B)
                K_u += k * np.outer(B, D)
                C += c * np.outer(B, B)
                C_u += c * np.outer(B, D)
            for i in range(1, self.spec.n_joints + 1):
                if self.values[self.spec.joint_var(i)] != WELDED:
                    continue
                for J, Jw in self.weld_rows(instance, i):
                    K += self.params.weld_stiffness * np.outer(J, J)
                    K_u += self.params.weld_stiffness * np.outer(J, Jw)
        return LumpedNetwork(self.masses(), K, C, K_u, C_u)

    def weld_rows(self, instance: str, i: int) -> List[Tuple[np.ndarray, np.ndarray]]:
        """Linearized angle between every pair of beams meeting at joint i"""
        others = [b if a == i else a for a, b, code in self.elements if code == BEAM and i in (a, b)]
        rows = []
        if len(others) < 2:
            return rows
        p0 = self.position(instance, i)
        G0, H0 = self.point_map(instance, i)
        for j, k in itertools.combinations(others, 2):
            d1 = self.position(instance, j) - p0
            d2 = self.position(instance, k) - p0
            l1 = np.linalg.norm(d1)
            l2 = np.linalg.norm(d2)
            u1 = d1 / l1
            u2 = d2 / l2
            cos = float(np.clip(u1 @ u2, -1.0, 1.0))
            sin = np.sqrt(1.0 - cos * cos)
            if sin < MIN_WELD_SINE:
                continue
            g1 = -(u2 - cos * u1) / (l1 * sin)
            g2 = -(u1 - cos * u2) / (l2 * sin)
            g0 = -(g1 + g2)
            G1, H1 = self.point_map(instance, j)
            G2, H2 = self.point_map(instance, k)
            rows.append((g0 @ G0 + g1 @ G1 + g2 @ G2, g0 @ H0 + g1 @ H1 + g2 @ H2))
        return rows


def simulate(spec: ProblemSpec, s: Solution, params: SimParams) -> Trajectory:
    """Integrates the assembly under the road inputs, raises DivergedSimulation"""
    violations = is_feasible(spec, s)
    if violations:
        raise FitnessError("Cannot simulate an infeasible assembly: %s" % violations[0])
    model = SuspensionModel(spec, s, params)
    net = model.network()
    steps = params.steps
    t = params.dt * np.arange(steps + 1)
    w = np.zeros((steps + 1, model.m))
    wdot = np.zeros((steps + 1, model.m))
    for k, instance in enumerate(INSTANCES):
        w[:, k], wdot[:, k] = params.wheels[instance].input(t)
    Q, V = integrate(net, params.dt, steps, w, wdot)
    acc = net.accelerations(Q[1:], V[1:], w[1:], wdot[1:])
    points = params.chassis_points
    a_z = acc[:, HEAVE] - acc[:, PITCH] * (points["q1"][0] - points["c1"][0])
    disp = []
    for name in ("q2", "q3"):
        G, _ = model.chassis_map(points[name])
        disp.append(np.linalg.norm(Q[1:] @ G.T, axis=1))
    if not (np.all(np.isfinite(a_z)) and np.all(np.isfinite(disp))):
        raise DivergedSimulation("Non-finite chassis response")
    return Trajectory(t[1:], a_z, disp[0], disp[1])


def count_term(s: Solution, params: SimParams) -> int:
    if params.count_term == "joints":
        return active_joint_count(s)
    return active_component_count(s)


def fitness_suspension(
    spec: ProblemSpec, s: Solution, params: SimParams, weights: FitnessWeights
) -> float:
    """Summed chassis response plus the weighted count, +inf if the simulation diverges"""
    try:
        traj = simulate(spec, s, params)
    except DivergedSimulation as e:
        log.warning("%s, scoring as infinite", e)
        return float("inf")
    acc = traj.a_z_q1 if params.signed_acceleration else np.abs(traj.a_z_q1)
    dynamic = float(np.sum(acc)) + weights.w1 * float(np.sum(traj.d_q2 + traj.d_q3))
    return dynamic + weights.w2 * count_term(s, params)


class SuspensionEvaluator(Evaluator):
    ID = "suspension"
    LABEL = "suspension (simplified lumped model)"

    def __init__(self, spec, params=None):
        super().__init__(spec, params)
        self.sim = SimParams.from_params(self.params, spec.n_joints)
        self.weights = FitnessWeights.from_params(self.params)
        # fail early on envos the model can't place
        roles = body_roles(spec, self.sim)
        if "chassis" not in roles.values():
            raise FitnessError("No envo is mapped to the chassis")

    def __call__(self, s):
        return fitness_suspension(self.spec, s, self.sim, self.weights)


EVALUATORS = [SuspensionEvaluator]
