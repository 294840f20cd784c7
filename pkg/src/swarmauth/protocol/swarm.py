from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..groupauth import ControlStation, Credential, GroupParams, PublicPair


class ConfigurationError(ValueError):
    pass


class DroneRole(str, Enum):
    GUARD = "guard"
    NETWORK = "network"
    SERVICE = "service"


_PREFIX = {DroneRole.GUARD: "guard", DroneRole.NETWORK: "net", DroneRole.SERVICE: "svc"}


@dataclass
class Drone:
    drone_id: str
    role: DroneRole
    credential: Credential
    group_key: int | None = None

    @property
    def public(self) -> PublicPair:
        return self.credential.public


@dataclass
class SwarmState:
    params: GroupParams
    drones: dict[str, Drone] = field(default_factory=dict)

    @property
    def roster(self) -> dict[str, tuple[DroneRole, PublicPair]]:
        return {d.drone_id: (d.role, d.public) for d in self.drones.values()}

    def by_role(self, role: DroneRole) -> list[Drone]:
        return sorted(
            (d for d in self.drones.values() if d.role is role),
            key=lambda d: d.credential.index,
        )

    def admit(self, drone: Drone) -> None:
        if drone.drone_id in self.drones:
            raise ConfigurationError(f"drone id {drone.drone_id!r} already in the swarm")
        self.drones[drone.drone_id] = drone

    def next_id(self, role: DroneRole) -> str:
        n = sum(1 for d in self.drones.values() if d.role is role)
        return f"{_PREFIX[role]}-{n + 1}"

    def keys_consistent(self) -> bool:
        """Every key holder's group key maps onto the verification point."""
        g = self.params.group
        return all(
            d.group_key is not None
            and g.mul(d.group_key, self.params.generator) == self.params.verification_point
            for d in self.drones.values()
        )


def build_swarm(
    station: ControlStation, guard_count: int, network_count: int, service_count: int = 0
) -> SwarmState:
    """Issue credentials to guards, then network drones, then service drones."""
    if min(guard_count, network_count, service_count) < 0:
        raise ConfigurationError("drone counts must be non-negative")
    swarm = SwarmState(station.params)
    for role, count in (
        (DroneRole.GUARD, guard_count),
        (DroneRole.NETWORK, network_count),
        (DroneRole.SERVICE, service_count),
    ):
        for cred in station.issue(count):
            swarm.admit(Drone(swarm.next_id(role), role, cred, station.group_key))
    return swarm
