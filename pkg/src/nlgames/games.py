"""Linear games, probability boxes, and the Fourier correlator machinery.

A linear game asks two players questions (u, v) drawn from q(u, v); they
answer with group elements a, b and win when a + b = f(u, v).  Games are
evaluated on boxes, conditional distributions P(a, b | u, v).  Correlators
are the Fourier transform of a box over the answer group; they diagonalize
the win probability and feed the spectral bound.

Conventions: questions are indexed 0..mA-1 and 0..mB-1; answers are indexed
by their canonical position in the group's element list.  Boxes are numpy
arrays of shape (mA, mB, |G|, |G|) with axes (u, v, a, b).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .algebra import FiniteField, Group
from .rng import SplitMix64

__all__ = [
    "GameValidationError",
    "GameFormatError",
    "LinearGame",
    "Box",
    "CorrelatorTable",
    "game_from_tables",
    "chsh_d",
    "uniform_box",
    "strategy_box",
    "random_xor_game",
    "evaluate_box",
    "correlators_from_box",
    "box_from_correlators",
    "win_prob_from_correlators",
    "game_from_json",
    "game_to_json",
]

NORMALIZATION_TOL = 1e-12
NO_SIGNALING_TOL = 1e-10

# Above this common denominator the exact representation of q is dropped and
# only the float table is kept.
_MAX_EXACT_DENOMINATOR = 10**15


class GameValidationError(ValueError):
    """A game, box, or correlator table violates a structural invariant."""


class GameFormatError(ValueError):
    """A JSON document does not match the documented game schema."""


@dataclass(frozen=True)
class LinearGame:
    """Validated linear game; immutable after construction.

    `q` is the float input distribution; when every input weight was given
    exactly, `q_num`/`q_den` additionally hold integer numerators over a
    common denominator so downstream optima can be reported as exact
    rationals.  `f_idx` holds the winning element's canonical index per
    question pair.
    """

    group: Group
    q: np.ndarray
    f_idx: np.ndarray
    q_num: np.ndarray | None
    q_den: int | None

    def __post_init__(self):
        self.q.setflags(write=False)
        self.f_idx.setflags(write=False)
        if self.q_num is not None:
            self.q_num.setflags(write=False)

    @property
    def mA(self) -> int:
        return self.q.shape[0]

    @property
    def mB(self) -> int:
        return self.q.shape[1]

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def has_exact_q(self) -> bool:
        return self.q_num is not None

    def f_element(self, u: int, v: int):
        return self.group.elements[self.f_idx[u, v]]

    def q_fraction(self, u: int, v: int) -> Fraction | None:
        if self.q_num is None:
            return None
        return Fraction(int(self.q_num[u, v]), self.q_den)

    def is_uniform_q(self, tol: float = NORMALIZATION_TOL) -> bool:
        if self.q_num is not None:
            num = int(self.q_num[0, 0])
            return bool(np.all(self.q_num == num)) and num * self.mA * self.mB == self.q_den
        return float(np.max(np.abs(self.q - 1.0 / (self.mA * self.mB)))) <= tol


def _parse_weight(entry) -> Fraction | float:
    """Interpret one q entry; Fractions, ints and (num, den) pairs stay exact."""
    if isinstance(entry, Fraction):
        return entry
    if isinstance(entry, bool):
        raise GameValidationError(f"invalid probability entry {entry!r}")
    if isinstance(entry, (int, np.integer)):
        return Fraction(int(entry))
    if isinstance(entry, (float, np.floating)):
        return float(entry)
    if isinstance(entry, (tuple, list)) and len(entry) == 2:
        num, den = entry
        if isinstance(num, (int, np.integer)) and isinstance(den, (int, np.integer)):
            return Fraction(int(num), int(den))
    raise GameValidationError(f"invalid probability entry {entry!r}")


def game_from_tables(group: Group, q, f) -> LinearGame:
    """Build and validate a linear game from an input distribution and win table.

    `q` is an mA x mB table whose entries may be floats, ints, Fractions, or
    (num, den) pairs; the exact rational form is kept when every entry is
    exact.  `f` is an mA x mB table of group elements (element objects, int
    indices, or coordinate sequences).
    """
    rows = [list(row) for row in q]
    if not rows or any(len(row) != len(rows[0]) for row in rows):
        raise GameValidationError("q must be a rectangular, nonempty table")
    m_a, m_b = len(rows), len(rows[0])
    if m_b == 0:
        raise GameValidationError("q must have at least one column")

    weights = [[_parse_weight(entry) for entry in row] for row in rows]
    exact = all(isinstance(w, Fraction) for row in weights for w in row)

    q_num = None
    q_den = None
    if exact:
        den = lcm(*(w.denominator for row in weights for w in row))
        if den > _MAX_EXACT_DENOMINATOR:
            exact = False
        else:
            nums = [[int(w * den) for w in row] for row in weights]
            if any(n < 0 for row in nums for n in row):
                raise GameValidationError("input probabilities must be nonnegative")
            if sum(n for row in nums for n in row) != den:
                total = sum(Fraction(n, den) for row in nums for n in row)
                raise GameValidationError(f"input distribution sums to {total}, not 1")
            q_num = np.array(nums, dtype=np.int64)
            q_den = den

    q_float = np.array([[float(w) for w in row] for row in weights], dtype=np.float64)
    if np.any(q_float < 0):
        raise GameValidationError("input probabilities must be nonnegative")
    total = float(q_float.sum())
    if not exact and abs(total - 1.0) > NORMALIZATION_TOL:
        raise GameValidationError(f"input distribution sums to {total!r}, not 1")

    f_rows = [list(row) for row in f]
    if len(f_rows) != m_a or any(len(row) != m_b for row in f_rows):
        raise GameValidationError("f table shape does not match q")
    try:
        f_idx = np.array(
            [[group.index(group.element(entry)) for entry in row] for row in f_rows],
            dtype=np.int64,
        )
    except (TypeError, ValueError) as exc:
        raise GameValidationError(f"invalid winning-function entry: {exc}") from exc

    return LinearGame(group=group, q=q_float, f_idx=f_idx, q_num=q_num, q_den=q_den)


def chsh_d(p: int, r: int = 1) -> LinearGame:
    """CHSH game over GF(p^r): f(u, v) = u*v in the field, uniform questions.

    Answers live in the additive group of the field, so the characters used
    by the spectral bound are the trace characters.
    """
    field = FiniteField(p, r)
    group = field.additive_group()
    d = field.size
    weight = Fraction(1, d * d)
    q = [[weight] * d for _ in range(d)]
    f = [[field.mul(x, y) for y in field.elements] for x in field.elements]
    return game_from_tables(group, q, f)


def random_xor_game(rng: SplitMix64, d: int, m_a: int, m_b: int | None = None) -> LinearGame:
    """Uniform-input game over Z_d with i.i.d. uniform f entries.

    Entries are drawn row-major (u outer, v inner), one `randbelow(d)` call
    each, so a given seed always produces the same game.
    """
    from .algebra import FiniteAbelianGroup

    if m_b is None:
        m_b = m_a
    group = FiniteAbelianGroup([d])
    weight = Fraction(1, m_a * m_b)
    q = [[weight] * m_b for _ in range(m_a)]
    f = [[rng.randbelow(d) for _ in range(m_b)] for _ in range(m_a)]
    return game_from_tables(group, q, f)


@dataclass(frozen=True)
class Box:
    """Conditional distribution P(a, b | u, v) as an (mA, mB, n, n) array.

    Construction validates nonnegativity and per-question normalization.
    No-signaling is a computable property, not an invariant: boxes that
    signal are representable and simply report a nonzero defect.
    """

    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.float64)
        if t.ndim != 4 or t.shape[2] != t.shape[3]:
            raise GameValidationError(f"box table must have shape (mA, mB, n, n), got {t.shape}")
        if np.any(t < -NORMALIZATION_TOL):
            raise GameValidationError("box probabilities must be nonnegative")
        sums = t.sum(axis=(2, 3))
        if np.max(np.abs(sums - 1.0)) > NORMALIZATION_TOL:
            raise GameValidationError("box distributions must sum to 1 for every question pair")
        object.__setattr__(self, "table", t)
        t.setflags(write=False)

    @property
    def mA(self) -> int:
        return self.table.shape[0]

    @property
    def mB(self) -> int:
        return self.table.shape[1]

    @property
    def order(self) -> int:
        return self.table.shape[2]

    def alice_marginals(self) -> np.ndarray:
        """P(a | u, v) = sum_b P(a, b | u, v), shape (mA, mB, n)."""
        return self.table.sum(axis=3)

    def bob_marginals(self) -> np.ndarray:
        return self.table.sum(axis=2)

    def signaling_defect(self) -> float:
        """Largest variation of either marginal across the other party's input."""
        pa = self.alice_marginals()
        pb = self.bob_marginals()
        dev_a = np.max(pa.max(axis=1) - pa.min(axis=1)) if self.mB > 1 else 0.0
        dev_b = np.max(pb.max(axis=0) - pb.min(axis=0)) if self.mA > 1 else 0.0
        return float(max(dev_a, dev_b))

    def is_no_signaling(self, tol: float = NO_SIGNALING_TOL) -> bool:
        return self.signaling_defect() <= tol


def uniform_box(m_a: int, m_b: int, n: int) -> Box:
    """Box with the flat distribution 1/n^2 on every question pair."""
    return Box(np.full((m_a, m_b, n, n), 1.0 / (n * n)))


def strategy_box(game: LinearGame, alice, bob) -> Box:
    """Deterministic box from assignments a: Q_A -> G and b: Q_B -> G."""
    a_idx = [game.group.index(game.group.element(x)) for x in alice]
    b_idx = [game.group.index(game.group.element(x)) for x in bob]
    if len(a_idx) != game.mA or len(b_idx) != game.mB:
        raise GameValidationError("strategy length does not match question sets")
    n = game.order
    table = np.zeros((game.mA, game.mB, n, n))
    for u, ia in enumerate(a_idx):
        for v, ib in enumerate(b_idx):
            table[u, v, ia, ib] = 1.0
    return Box(table)


def _check_shapes(game: LinearGame, box: Box) -> None:
    expected = (game.mA, game.mB, game.order, game.order)
    if box.table.shape != expected:
        raise GameValidationError(
            f"box shape {box.table.shape} does not match game shape {expected}"
        )


def evaluate_box(game: LinearGame, box: Box) -> float:
    """Game value sum_{u,v} q(u,v) * P(a + b = f(u,v) | u,v) of a box."""
    _check_shapes(game, box)
    n = game.order
    sub = game.group.subtraction_table()
    # Winning partner index: b = f(u, v) - a.
    b_idx = sub[game.f_idx[:, :, None], np.arange(n)[None, None, :]]
    u_ix = np.arange(game.mA)[:, None, None]
    v_ix = np.arange(game.mB)[None, :, None]
    a_ix = np.arange(n)[None, None, :]
    wins = box.table[u_ix, v_ix, a_ix, b_idx].sum(axis=2)
    return float((game.q * wins).sum())


@dataclass(frozen=True)
class CorrelatorTable:
    """Generalized correlators <A_u^x B_v^y>, shape (mA, mB, n, n), axes (u, v, x, y).

    Entry (u, v, e, e) is the normalization of the underlying distribution
    and must equal 1; every entry has modulus at most 1.
    """

    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.values, dtype=np.complex128)
        if t.ndim != 4 or t.shape[2] != t.shape[3]:
            raise GameValidationError(
                f"correlator table must have shape (mA, mB, n, n), got {t.shape}"
            )
        if np.max(np.abs(t[:, :, 0, 0] - 1.0)) > 1e-9:
            raise GameValidationError("correlator normalization entries must equal 1")
        if np.max(np.abs(t)) > 1.0 + 1e-9:
            raise GameValidationError("correlator moduli must not exceed 1")
        object.__setattr__(self, "values", t)
        t.setflags(write=False)


def correlators_from_box(game: LinearGame, box: Box) -> CorrelatorTable:
    """Fourier transform of each conditional distribution over G x G.

    <A_u^x B_v^y> = sum_{a,b} conj(chi_x(a)) conj(chi_y(b)) P(a, b | u, v).
    """
    _check_shapes(game, box)
    chars = game.group.character_table()
    values = np.einsum("xa,yb,uvab->uvxy", chars.conj(), chars.conj(), box.table)
    return CorrelatorTable(values)


def box_from_correlators(game: LinearGame, table: CorrelatorTable) -> Box:
    """Invert the correlator transform back to a probability box.

    P(a, b | u, v) = (1/n^2) sum_{x,y} chi_a(x) chi_b(y) <A_u^x B_v^y>.
    """
    n = game.order
    chars = game.group.character_table()
    raw = np.einsum("xa,yb,uvxy->uvab", chars, chars, table.values) / (n * n)
    if np.max(np.abs(raw.imag)) > 1e-9:
        raise GameValidationError("correlator table does not invert to a real box")
    return Box(raw.real)


def win_prob_from_correlators(game: LinearGame, table: CorrelatorTable, u: int, v: int) -> float:
    """P(a + b = f(u,v) | u,v) = (1/n) sum_x chi_f(u,v)(x) <A_u^x B_v^x>."""
    n = game.order
    chars = game.group.character_table()
    diag = table.values[u, v].diagonal()
    value = complex((chars[:, game.f_idx[u, v]] * diag).sum()) / n
    if abs(value.imag) > 1e-8:
        raise GameValidationError(f"win probability came out non-real: {value!r}")
    return float(value.real)


# ---------------------------------------------------------------------------
# JSON game format
# ---------------------------------------------------------------------------

_GAME_KEYS = {"group", "mA", "mB", "q", "f"}


def _reject_unknown_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise GameFormatError(f"unknown keys {sorted(unknown)} in {where}")


def _group_from_json(obj) -> Group:
    from .algebra import FiniteAbelianGroup

    if not isinstance(obj, dict):
        raise GameFormatError("'group' must be an object")
    if set(obj) == {"factors"}:
        factors = obj["factors"]
        if not isinstance(factors, list) or not factors:
            raise GameFormatError("'factors' must be a nonempty list of integers")
        try:
            return FiniteAbelianGroup(factors)
        except ValueError as exc:
            raise GameFormatError(str(exc)) from exc
    if set(obj) == {"field"}:
        field = obj["field"]
        if not isinstance(field, dict):
            raise GameFormatError("'field' must be an object")
        _reject_unknown_keys(field, {"p", "r"}, "'field'")
        if "p" not in field:
            raise GameFormatError("'field' requires key 'p'")
        try:
            return FiniteField(field["p"], field.get("r", 1)).additive_group()
        except ValueError as exc:
            raise GameFormatError(str(exc)) from exc
    raise GameFormatError("'group' must contain exactly one of 'factors' or 'field'")


def game_from_json(obj) -> LinearGame:
    """Parse the documented JSON game format; unknown keys are rejected."""
    if not isinstance(obj, dict):
        raise GameFormatError("game document must be a JSON object")
    _reject_unknown_keys(obj, _GAME_KEYS, "game document")
    missing = _GAME_KEYS - set(obj)
    if missing:
        raise GameFormatError(f"game document is missing keys {sorted(missing)}")
    group = _group_from_json(obj["group"])
    m_a, m_b = obj["mA"], obj["mB"]
    if not isinstance(m_a, int) or not isinstance(m_b, int) or m_a < 1 or m_b < 1:
        raise GameFormatError("'mA' and 'mB' must be positive integers")
    q, f = obj["q"], obj["f"]
    if not isinstance(q, list) or len(q) != m_a or any(
        not isinstance(row, list) or len(row) != m_b for row in q
    ):
        raise GameFormatError("'q' must be an mA x mB table")
    if not isinstance(f, list) or len(f) != m_a or any(
        not isinstance(row, list) or len(row) != m_b for row in f
    ):
        raise GameFormatError("'f' must be an mA x mB table")
    try:
        return game_from_tables(group, q, f)
    except GameValidationError:
        raise
    except ValueError as exc:
        raise GameFormatError(str(exc)) from exc


def game_to_json(game: LinearGame) -> dict:
    """Canonical JSON form: exact q as [num, den] pairs, f as element indices."""
    if game.has_exact_q:
        q = [
            [[int(game.q_num[u, v]), game.q_den] for v in range(game.mB)]
            for u in range(game.mA)
        ]
    else:
        q = [[float(game.q[u, v]) for v in range(game.mB)] for u in range(game.mA)]
    return {
        "group": game.group.describe(),
        "mA": game.mA,
        "mB": game.mB,
        "q": q,
        "f": [[int(game.f_idx[u, v]) for v in range(game.mB)] for u in range(game.mA)],
    }
