from .availability import AvailabilityEstimate, estimate_availability
from .engine import SimConfig, SimResult, run_replication, run_simulation
from .rng import RngStream, exponential_from_uniform, rng_exponential
from .topology import Station, Topology, build_topology
