"""
Genetic search for Andrews-Curtis move sequences.

Two modes share one generational loop:

- trivialize: fitness is the total relator length; success is a tuple of
  distinct single letters, completed to the standard tuple exactly;
- equivalence: fitness is the sum of cyclic Hamming distances to a target,
  minimised over relator pairings; success at fitness 0 is completed with
  rotations (and the relator swap) so the certificate ends on the target.

Reproduction is mutation only: one elementary move per offspring, chosen by
kind (mul/inv/conj) from configured weights. Histories are shared linked
lists so that a population of long move sequences stays cheap to copy.

Every successful outcome carries a certificate that has been replayed and
verified before it is returned.
"""

import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, model_validator

from .error_handling import (
    CertificateFormatError,
    MoveIndexError,
    PreconditionError,
    RankMismatchError,
    SearchLimitError,
    StorageError,
)
from .presentation import (
    ACMove,
    Certificate,
    MoveKind,
    Presentation,
    apply_move,
    conjugator_words,
    enumerate_neighbors,
    read_certificate,
    replay,
    rotation_move,
    standard_presentation,
    swap_moves,
    total_length,
    verify_certificate,
    write_certificate,
)
from .word import cyclic_hamming

logger = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 2_000_000


class GAConfig(BaseModel):
    """Knobs of the genetic search. Defaults are this toolkit's own choices."""

    population_size: int = Field(200, ge=1, description="Individuals per generation")
    max_generations: int = Field(100_000, ge=1, description="Generation cap")
    tournament_size: int = Field(4, ge=1, description="Entrants per tournament")
    mul_weight: float = Field(0.5, ge=0.0, description="Relative probability of a mul move")
    inv_weight: float = Field(0.2, ge=0.0, description="Relative probability of an inv move")
    conj_weight: float = Field(0.3, ge=0.0, description="Relative probability of a conj move")
    conjugator_bound: int = Field(2, ge=1, description="Longest conjugator sampled")
    max_relator_length: int = Field(20, ge=1, description="Relator length cap for offspring")
    elitism: int = Field(4, ge=1, description="Best individuals copied unchanged")
    stagnation_restart_after: int = Field(300, ge=1, description="Generations without improvement before a restart")
    rng_seed: int = Field(0, description="Seed of the search's random generator")
    wall_clock_budget: Optional[float] = Field(30.0, gt=0, description="Seconds per search; None bounds by generations only")
    spot_check_rate: float = Field(0.01, ge=0.0, le=1.0, description="Per-generation probability of a history replay check")
    max_resamples: int = Field(8, ge=1, description="Mutation attempts before an individual is kept unchanged")

    @model_validator(mode="after")
    def check_consistency(self):
        if self.elitism > self.population_size:
            raise ValueError("elitism cannot exceed population_size")
        if self.mul_weight + self.inv_weight + self.conj_weight <= 0:
            raise ValueError("at least one move weight must be positive")
        return self


class SearchMode(str, Enum):
    TRIVIALIZE = "trivialize"
    EQUIVALENCE = "equiv"


class SearchStatus(str, Enum):
    SUCCESS = "success"
    BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass(frozen=True)
class History:
    """Linked move history, newest move first."""
    move: ACMove
    previous: Optional["History"]
    depth: int


@dataclass(frozen=True)
class Individual:
    current: Presentation
    history: Optional[History]
    fitness: int

    @property
    def depth(self) -> int:
        return self.history.depth if self.history else 0

    def moves(self) -> List[ACMove]:
        """History in application order."""
        moves: List[ACMove] = []
        node = self.history
        while node is not None:
            moves.append(node.move)
            node = node.previous
        moves.reverse()
        return moves

    def extended(self, move: ACMove, result: Presentation, fitness: int) -> "Individual":
        return Individual(result, History(move, self.history, self.depth + 1), fitness)


@dataclass
class SearchOutcome:
    status: SearchStatus
    certificate: Optional[Certificate]
    generations_used: int
    best_fitness_trace: List[int] = field(default_factory=list)
    restarts: int = 0
    island: int = 0
    elapsed: float = 0.0

    @property
    def succeeded(self) -> bool:
        return self.status == SearchStatus.SUCCESS


class OracleStatus(str, Enum):
    REACHABLE = "reachable"
    NOT_WITHIN_BOUNDS = "not-within-bounds"


@dataclass(frozen=True)
class OracleResult:
    status: OracleStatus
    min_moves: Optional[int]
    states_explored: int

    @property
    def reachable(self) -> bool:
        return self.status == OracleStatus.REACHABLE


def fitness_length(p: Presentation) -> int:
    return total_length(p)


def fitness_hamming(p: Presentation, target: Presentation) -> int:
    """Least total cyclic Hamming distance over relator pairings."""
    if p.rank != target.rank:
        raise RankMismatchError(p.rank, target.rank)
    return min(
        sum(cyclic_hamming(p.relators[i], target.relators[k]) for i, k in enumerate(order))
        for order in permutations(range(p.rank))
    )


def _best_pairing(p: Presentation, target: Presentation) -> Tuple[int, ...]:
    return min(
        permutations(range(p.rank)),
        key=lambda order: sum(cyclic_hamming(p.relators[i], target.relators[k]) for i, k in enumerate(order)),
    )


def is_basis_letters(p: Presentation) -> bool:
    """True iff the relators are single letters on distinct generators."""
    if any(len(w) != 1 for w in p.relators):
        return False
    return len({w.letters[0] >> 1 for w in p.relators}) == p.rank


def finish_to_standard(p: Presentation) -> List[ACMove]:
    """Moves taking a tuple of distinct single letters exactly to the standard tuple."""
    if not is_basis_letters(p):
        raise PreconditionError(f"{p} is not a tuple of distinct basis letters", operation="finish_to_standard")
    moves: List[ACMove] = []
    current = p
    # Selection sort by generator index, one six-move swap per transposition.
    for position in range(1, p.rank + 1):
        wanted = position - 1
        source = next(k for k in range(position, p.rank + 1) if current.relators[k - 1].letters[0] >> 1 == wanted)
        if source != position:
            swap = swap_moves(position, source)
            moves.extend(swap)
            current = replay(current, swap)
    for index, w in enumerate(current.relators, start=1):
        if w.letters[0] & 1:
            moves.append(ACMove.inv(index))
    return moves


def finish_to_target(p: Presentation, target: Presentation) -> List[ACMove]:
    """Moves taking ``p`` to ``target`` exactly when they agree up to pairing and rotation."""
    order = list(_best_pairing(p, target))
    moves: List[ACMove] = []
    current = p
    for position in range(1, p.rank + 1):
        wanted = position - 1
        source = next(k for k in range(position, p.rank + 1) if order[k - 1] == wanted)
        if source != position:
            swap = swap_moves(position, source)
            moves.extend(swap)
            current = replay(current, swap)
            order[position - 1], order[source - 1] = order[source - 1], order[position - 1]
    for index in range(1, p.rank + 1):
        word, goal = current.relators[index - 1].letters, target.relators[index - 1].letters
        if word == goal:
            continue
        shift = next(
            (s for s in range(len(word)) if word[s:] + word[:s] == goal), None
        )
        if shift is None:
            raise PreconditionError(f"{current} is not a rotation of {target}", operation="finish_to_target")
        move = rotation_move(current, index, shift)
        moves.append(move)
        current = apply_move(current, move)
    return moves


class _Search:
    """State of one generational run."""

    def __init__(self, seed: Presentation, mode: SearchMode, cfg: GAConfig, target: Optional[Presentation]):
        self.seed = seed
        self.mode = mode
        self.cfg = cfg
        self.target = target
        self.rng = random.Random(cfg.rng_seed)

    def fitness(self, p: Presentation) -> int:
        if self.mode == SearchMode.TRIVIALIZE:
            return fitness_length(p)
        return fitness_hamming(p, self.target)

    def is_success(self, ind: Individual) -> bool:
        if self.mode == SearchMode.TRIVIALIZE:
            return ind.fitness == ind.current.rank and is_basis_letters(ind.current)
        return ind.fitness == 0

    def certificate(self, ind: Individual) -> Certificate:
        if self.mode == SearchMode.TRIVIALIZE:
            tail = finish_to_standard(ind.current)
            goal = standard_presentation(self.seed.rank)
        else:
            tail = finish_to_target(ind.current, self.target)
            goal = self.target
        cert = Certificate(self.seed, tuple(ind.moves() + tail), goal)
        if not verify_certificate(cert):
            raise RuntimeError(f"emitted certificate for {self.seed} does not replay to {goal}")
        return cert


def sample_move(rng: random.Random, rank: int, cfg: GAConfig, conjugators: Sequence) -> ACMove:
    """One elementary move drawn by kind weight; rank 1 draws only inv and conj."""
    kinds = [MoveKind.MUL, MoveKind.INV, MoveKind.CONJ]
    weights = [cfg.mul_weight, cfg.inv_weight, cfg.conj_weight]
    if rank < 2:
        kinds, weights = kinds[1:], weights[1:]
        if not any(weights):
            raise PreconditionError("a rank-1 search needs a positive inv or conj weight", operation="sample_move")
    kind = rng.choices(kinds, weights=weights)[0]
    i = rng.randint(1, rank)
    if kind == MoveKind.MUL:
        j = rng.randint(1, rank - 1)
        return ACMove.mul(i, j if j < i else j + 1)
    if kind == MoveKind.INV:
        return ACMove.inv(i)
    return ACMove.conj(i, rng.choice(conjugators))


def mutate(ind: Individual, rng: random.Random, cfg: Optional[GAConfig] = None,
           fitness: Optional[Callable[[Presentation], int]] = None) -> Individual:
    """Apply one sampled move, resampling while a relator would exceed the cap.

    After ``cfg.max_resamples`` rejected samples ``ind`` is returned unchanged.
    """
    cfg = cfg or GAConfig()
    fitness = fitness or fitness_length
    rank = ind.current.rank
    conjugators = conjugator_words(cfg.conjugator_bound, rank)
    for _ in range(cfg.max_resamples):
        move = sample_move(rng, rank, cfg, conjugators)
        result = apply_move(ind.current, move)
        if all(len(w) <= cfg.max_relator_length for w in result.relators):
            return ind.extended(move, result, fitness(result))
    return ind


def _tournament(population: List[Individual], rng: random.Random, size: int) -> Individual:
    best = None
    for _ in range(size):
        entrant = population[rng.randrange(len(population))]
        if best is None or entrant.fitness < best.fitness:
            best = entrant
    return best


def evolve(seed: Presentation, mode: SearchMode, cfg: Optional[GAConfig] = None,
           target: Optional[Presentation] = None, island: int = 0) -> SearchOutcome:
    """Run the genetic search from ``seed``.

    Budget exhaustion is reported as an outcome and says nothing about
    AC-equivalence.
    """
    cfg = cfg or GAConfig()
    mode = SearchMode(mode)
    if mode == SearchMode.EQUIVALENCE:
        if target is None:
            raise PreconditionError("equivalence search needs a target", operation="evolve")
        if target.rank != seed.rank:
            raise RankMismatchError(seed.rank, target.rank)
        if not all(w.is_cyclically_reduced for w in target.relators):
            raise PreconditionError("target relators must be cyclically reduced", operation="evolve")
    if seed.rank < 2 and cfg.inv_weight + cfg.conj_weight <= 0:
        raise PreconditionError("a rank-1 search needs a positive inv or conj weight", operation="evolve")

    search = _Search(seed, mode, cfg, target)
    rng = search.rng
    start = time.monotonic()
    origin = Individual(seed, None, search.fitness(seed))
    best = origin
    trace = [origin.fitness]

    def success(ind: Individual, generation: int, restarts: int) -> SearchOutcome:
        cert = search.certificate(ind)
        logger.info(f"{mode.value} search on {seed} succeeded in generation {generation} "
                    f"with {len(cert.moves)} moves")
        return SearchOutcome(SearchStatus.SUCCESS, cert, generation, trace, restarts, island,
                             time.monotonic() - start)

    if search.is_success(origin):
        return success(origin, 0, 0)

    population = [origin] * cfg.population_size
    stagnant = 0
    restarts = 0
    generation = 0
    while generation < cfg.max_generations:
        if cfg.wall_clock_budget is not None and time.monotonic() - start > cfg.wall_clock_budget:
            break
        generation += 1
        ranked = sorted(population, key=lambda ind: (ind.fitness, ind.depth))
        offspring = ranked[:cfg.elitism]
        while len(offspring) < cfg.population_size:
            parent = _tournament(population, rng, cfg.tournament_size)
            child = mutate(parent, rng, cfg, search.fitness)
            if search.is_success(child):
                trace.append(child.fitness)
                return success(child, generation, restarts)
            offspring.append(child)
        population = offspring

        leader = min(population, key=lambda ind: (ind.fitness, ind.depth))
        trace.append(leader.fitness)
        if leader.fitness < best.fitness:
            best = leader
            stagnant = 0
        else:
            stagnant += 1
        if stagnant >= cfg.stagnation_restart_after:
            logger.debug(f"restart after {stagnant} stagnant generations, best fitness {best.fitness}")
            population = [best] * cfg.population_size
            stagnant = 0
            restarts += 1

        if cfg.spot_check_rate and rng.random() < cfg.spot_check_rate:
            sample = population[rng.randrange(len(population))]
            if replay(seed, sample.moves()).relators != sample.current.relators:
                raise RuntimeError(f"history of an individual does not replay to {sample.current}")

    logger.info(f"{mode.value} search on {seed} exhausted its budget after {generation} generations "
                f"(best fitness {best.fitness})")
    return SearchOutcome(SearchStatus.BUDGET_EXHAUSTED, None, generation, trace, restarts, island,
                         time.monotonic() - start)


def _island_worker(args) -> SearchOutcome:
    seed, mode, cfg, target, island = args
    return evolve(seed, mode, cfg, target, island)


def evolve_islands(seed: Presentation, mode: SearchMode, cfg: Optional[GAConfig] = None,
                   target: Optional[Presentation] = None, islands: int = 1) -> SearchOutcome:
    """Independent searches seeded ``rng_seed + island``; the lowest successful island wins."""
    cfg = cfg or GAConfig()
    if islands < 1:
        raise PreconditionError("islands must be >= 1", operation="evolve_islands")
    if islands == 1:
        return evolve(seed, mode, cfg, target)
    jobs = [
        (seed, mode, cfg.model_copy(update={"rng_seed": cfg.rng_seed + k}), target, k)
        for k in range(islands)
    ]
    with ProcessPoolExecutor(max_workers=islands) as pool:
        outcomes = list(pool.map(_island_worker, jobs))
    for outcome in outcomes:
        if outcome.succeeded:
            return outcome
    return outcomes[0]


def bfs_oracle(p: Presentation, move_bound: int, length_cap: int, conjugator_bound: int,
               max_states: int = DEFAULT_MAX_STATES) -> OracleResult:
    """Exhaustive breadth-first search for the standard tuple.

    Only states whose relators all have length <= ``length_cap`` are kept.
    Raises SearchLimitError once more than ``max_states`` states are stored.
    """
    if move_bound < 0 or length_cap < 1 or conjugator_bound < 0 or max_states < 1:
        raise PreconditionError("oracle bounds must be positive", operation="bfs_oracle")
    goal = standard_presentation(p.rank).relators
    if p.relators == goal:
        return OracleResult(OracleStatus.REACHABLE, 0, 1)
    seen = {p.relators}
    frontier = [p]
    for depth in range(1, move_bound + 1):
        next_frontier = []
        for state in frontier:
            for _, neighbor in enumerate_neighbors(state, conjugator_bound):
                relators = neighbor.relators
                if relators in seen or any(len(w) > length_cap for w in relators):
                    continue
                if relators == goal:
                    return OracleResult(OracleStatus.REACHABLE, depth, len(seen))
                seen.add(relators)
                if len(seen) > max_states:
                    raise SearchLimitError(f"BFS oracle exceeded {max_states} states", states=len(seen))
                next_frontier.append(neighbor)
        frontier = next_frontier
        if not frontier:
            break
    return OracleResult(OracleStatus.NOT_WITHIN_BOUNDS, None, len(seen))


class CertificateCache:
    """Directory of certificates keyed by record id; entries are replayed before use."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)

    def path(self, key: str) -> Path:
        return self.directory / f"{key}.txt"

    def lookup(self, key: str, base: Optional[Presentation] = None) -> Optional[Certificate]:
        path = self.path(key)
        if not path.exists():
            return None
        try:
            cert = read_certificate(path)
            valid = verify_certificate(cert)
        except (CertificateFormatError, MoveIndexError, RankMismatchError, OSError) as e:
            logger.warning(f"Ignoring unreadable cached certificate {path}: {e}")
            return None
        if not valid or (base is not None and cert.base.relators != base.relators):
            logger.warning(f"Ignoring cached certificate {path}: it does not replay from {base}")
            return None
        return cert

    def store(self, key: str, cert: Certificate) -> Path:
        path = self.path(key)
        try:
            write_certificate(path, cert)
        except OSError as e:
            raise StorageError(f"cannot write certificate {path}: {e}", path=str(path)) from e
        return path


__all__ = [
    "GAConfig",
    "SearchMode",
    "SearchStatus",
    "History",
    "Individual",
    "SearchOutcome",
    "OracleStatus",
    "OracleResult",
    "fitness_length",
    "fitness_hamming",
    "is_basis_letters",
    "finish_to_standard",
    "finish_to_target",
    "sample_move",
    "mutate",
    "evolve",
    "evolve_islands",
    "bfs_oracle",
    "CertificateCache",
    "DEFAULT_MAX_STATES",
]
