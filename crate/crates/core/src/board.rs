//! Go rules kernel: board representation, move execution with captures,
//! legality (suicide, superko), block/liberty queries, incremental Zobrist
//! hashing.
//!
//! Rules fixed here: suicide is forbidden, and whole-board repetition with
//! the same player to move is illegal (superko). Two consecutive passes do
//! not end the game; termination is goal-based and handled by the callers.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::zone::Zone;

/// Largest supported board dimension.
pub const MAX_SIZE: u8 = 19;
/// Smallest supported board dimension.
pub const MIN_SIZE: u8 = 2;

/// A point on the board, stored as a row-major index in `[0, size²)`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Intersection(u16);

impl Intersection {
    #[inline]
    pub fn from_index(index: usize) -> Self {
        debug_assert!(index < (MAX_SIZE as usize) * (MAX_SIZE as usize));
        Intersection(index as u16)
    }

    #[inline]
    pub fn from_coords(col: usize, row: usize, size: u8) -> Self {
        debug_assert!(col < size as usize && row < size as usize);
        Intersection((row * size as usize + col) as u16)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn col(self, size: u8) -> usize {
        self.0 as usize % size as usize
    }

    #[inline]
    pub fn row(self, size: u8) -> usize {
        self.0 as usize / size as usize
    }

    /// Chebyshev distance to another point on the same board.
    pub fn chebyshev(self, other: Intersection, size: u8) -> usize {
        let dc = self.col(size).abs_diff(other.col(size));
        let dr = self.row(size).abs_diff(other.row(size));
        dc.max(dr)
    }
}

impl fmt::Debug for Intersection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i{}", self.0)
    }
}

/// Column letters for human-readable coordinates; `I` is skipped per Go
/// convention.
pub const COL_LETTERS: &[u8] = b"ABCDEFGHJKLMNOPQRST";

/// Human-readable coordinate like `C3` (requires the board size).
pub fn coord_label(i: Intersection, size: u8) -> String {
    let col = i.col(size);
    let row = i.row(size);
    format!("{}{}", COL_LETTERS[col] as char, size as usize - row)
}

/// Parse a label produced by [`coord_label`].
pub fn parse_coord_label(s: &str, size: u8) -> Option<Intersection> {
    let bytes = s.as_bytes();
    if bytes.len() < 2 {
        return None;
    }
    let c = bytes[0].to_ascii_uppercase();
    let col = COL_LETTERS.iter().position(|&l| l == c)?;
    let row_num: usize = s[1..].parse().ok()?;
    if col >= size as usize || row_num == 0 || row_num > size as usize {
        return None;
    }
    Some(Intersection::from_coords(col, size as usize - row_num, size))
}

/// Stone color.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Color {
    Black,
    White,
}

impl Color {
    #[inline]
    pub fn opponent(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Black => write!(f, "black"),
            Color::White => write!(f, "white"),
        }
    }
}

/// State of a single intersection.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
#[repr(u8)]
pub enum PointState {
    Empty = 0,
    Black = 1,
    White = 2,
}

impl PointState {
    #[inline]
    pub fn is_empty(self) -> bool {
        self == PointState::Empty
    }

    #[inline]
    pub fn color(self) -> Option<Color> {
        match self {
            PointState::Empty => None,
            PointState::Black => Some(Color::Black),
            PointState::White => Some(Color::White),
        }
    }
}

impl From<Color> for PointState {
    fn from(c: Color) -> Self {
        match c {
            Color::Black => PointState::Black,
            Color::White => PointState::White,
        }
    }
}

/// A move: either a real placement or a pass (which also doubles as the
/// null move in search).
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Move {
    Pass,
    Play(Intersection),
}

impl Move {
    #[inline]
    pub fn intersection(self) -> Option<Intersection> {
        match self {
            Move::Pass => None,
            Move::Play(i) => Some(i),
        }
    }

    /// Ordering key: real moves by index, pass after every real move.
    #[inline]
    pub fn order_key(self) -> usize {
        match self {
            Move::Play(i) => i.index(),
            Move::Pass => usize::MAX,
        }
    }
}

/// A maximal 4-connected set of same-colored stones together with its
/// liberty set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    pub color: Color,
    pub stones: Zone,
    pub liberties: Zone,
}

impl Block {
    pub fn liberty_count(&self) -> usize {
        self.liberties.len()
    }
}

/// Errors from move execution.
#[derive(Copy, Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum MoveError {
    #[error("point is occupied")]
    Occupied,
    #[error("move is suicide")]
    Suicide,
    #[error("move repeats a previous position (superko)")]
    Superko,
    #[error("point is off the board")]
    OffBoard,
}

/// Errors from position construction.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum SetupError {
    #[error("board size {0} out of supported range {MIN_SIZE}..={MAX_SIZE}")]
    BadSize(u8),
    #[error("setup stone on occupied point {0:?}")]
    Occupied(Intersection),
    #[error("setup leaves a block with no liberties at {0:?}")]
    DeadBlock(Intersection),
}

// ---------------------------------------------------------------------------
// Zobrist keys
// ---------------------------------------------------------------------------

/// Fixed seed for the Zobrist key table so hashes are reproducible across
/// runs and usable in test fixtures.
pub const ZOBRIST_SEED: u64 = 0x52_5a_53_2d_47_4f_01;

struct ZobristKeys {
    /// One key per (point-on-19×19-grid, color). Points of smaller boards
    /// map through their (col,row) so the table is shared across sizes.
    point: Vec<[u64; 2]>,
    to_move: u64,
    size: [u64; MAX_SIZE as usize + 1],
}

fn zobrist_keys() -> &'static ZobristKeys {
    static KEYS: OnceLock<ZobristKeys> = OnceLock::new();
    KEYS.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(ZOBRIST_SEED);
        let n = MAX_SIZE as usize * MAX_SIZE as usize;
        let mut point = Vec::with_capacity(n);
        for _ in 0..n {
            point.push([rng.gen::<u64>(), rng.gen::<u64>()]);
        }
        let to_move = rng.gen::<u64>();
        let mut size = [0u64; MAX_SIZE as usize + 1];
        for s in size.iter_mut() {
            *s = rng.gen::<u64>();
        }
        ZobristKeys {
            point,
            to_move,
            size,
        }
    })
}

#[inline]
fn point_key(i: Intersection, color: Color, size: u8) -> u64 {
    let keys = zobrist_keys();
    let grid_index = i.row(size) * MAX_SIZE as usize + i.col(size);
    keys.point[grid_index][color as usize & 1]
}

/// Secondary hash used by the transposition table as a collision check.
/// Derived from the same fixed-seed table but mixed differently, so it is
/// independent of the primary hash for any single-point change.
pub fn verification_hash(pos: &Position) -> u64 {
    let mut h: u64 = 0x9e37_79b9_7f4a_7c15 ^ (pos.size as u64);
    for idx in 0..pos.point_count() {
        let i = Intersection::from_index(idx);
        if let Some(c) = pos.state(i).color() {
            let k = point_key(i, c, pos.size).rotate_left(17) ^ 0xc2b2_ae3d_27d4_eb4f;
            h = (h ^ k).wrapping_mul(0x100_0000_01b3);
        }
    }
    if pos.to_move == Color::White {
        h ^= zobrist_keys().to_move.rotate_left(31);
    }
    h
}

// ---------------------------------------------------------------------------
// History (persistent list of prior position hashes, for superko)
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct HistoryNode {
    hash: u64,
    prev: Option<Arc<HistoryNode>>,
}

/// Hashes of every prior position in the current line. Shared between
/// positions via `Arc` so cloning a position is cheap.
#[derive(Clone, Debug, Default)]
pub struct History {
    head: Option<Arc<HistoryNode>>,
    len: u32,
}

impl History {
    fn push(&self, hash: u64) -> History {
        History {
            head: Some(Arc::new(HistoryNode {
                hash,
                prev: self.head.clone(),
            })),
            len: self.len + 1,
        }
    }

    pub fn contains(&self, hash: u64) -> bool {
        let mut cur = self.head.as_deref();
        while let Some(node) = cur {
            if node.hash == hash {
                return true;
            }
            cur = node.prev.as_deref();
        }
        false
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

// ---------------------------------------------------------------------------
// Position
// ---------------------------------------------------------------------------

/// Full board state with player to move, superko history and incremental
/// Zobrist hash. Immutable value: [`Position::play`] returns a new position.
#[derive(Clone)]
pub struct Position {
    size: u8,
    grid: Box<[PointState]>,
    to_move: Color,
    hash: u64,
    history: History,
    last_move: Option<Intersection>,
    consecutive_passes: u8,
}

impl Position {
    /// Empty board with Black to move.
    pub fn empty(size: u8) -> Result<Position, SetupError> {
        if !(MIN_SIZE..=MAX_SIZE).contains(&size) {
            return Err(SetupError::BadSize(size));
        }
        let n = size as usize * size as usize;
        let grid = vec![PointState::Empty; n].into_boxed_slice();
        let mut pos = Position {
            size,
            grid,
            to_move: Color::Black,
            hash: 0,
            history: History::default(),
            last_move: None,
            consecutive_passes: 0,
        };
        pos.hash = pos.recompute_hash();
        Ok(pos)
    }

    /// Build a position from setup stones, validating that no block is left
    /// without liberties. The history starts empty: setup positions are
    /// fresh roots.
    pub fn from_setup(
        size: u8,
        stones: &[(Intersection, Color)],
        to_move: Color,
    ) -> Result<Position, SetupError> {
        let mut pos = Position::empty(size)?;
        for &(i, c) in stones {
            if i.index() >= pos.point_count() {
                return Err(SetupError::BadSize(size));
            }
            if !pos.grid[i.index()].is_empty() {
                return Err(SetupError::Occupied(i));
            }
            pos.grid[i.index()] = c.into();
        }
        pos.to_move = to_move;
        pos.hash = pos.recompute_hash();
        for block in pos.blocks() {
            if block.liberties.is_empty() {
                let i = block.stones.iter().next().expect("non-empty block");
                return Err(SetupError::DeadBlock(i));
            }
        }
        Ok(pos)
    }

    #[inline]
    pub fn size(&self) -> u8 {
        self.size
    }

    #[inline]
    pub fn point_count(&self) -> usize {
        self.size as usize * self.size as usize
    }

    #[inline]
    pub fn state(&self, i: Intersection) -> PointState {
        self.grid[i.index()]
    }

    #[inline]
    pub fn to_move(&self) -> Color {
        self.to_move
    }

    #[inline]
    pub fn hash(&self) -> u64 {
        self.hash
    }

    #[inline]
    pub fn history(&self) -> &History {
        &self.history
    }

    #[inline]
    pub fn last_move(&self) -> Option<Intersection> {
        self.last_move
    }

    #[inline]
    pub fn consecutive_passes(&self) -> u8 {
        self.consecutive_passes
    }

    pub fn intersections(&self) -> impl Iterator<Item = Intersection> {
        (0..self.point_count()).map(Intersection::from_index)
    }

    /// Empty intersections in index order.
    pub fn empties(&self) -> impl Iterator<Item = Intersection> + '_ {
        self.intersections().filter(|&i| self.state(i).is_empty())
    }

    /// Full Zobrist recomputation over (grid, to_move). The incremental
    /// hash maintained by `play` must always agree with this.
    pub fn recompute_hash(&self) -> u64 {
        let mut h = zobrist_keys().size[self.size as usize];
        for idx in 0..self.point_count() {
            let i = Intersection::from_index(idx);
            if let Some(c) = self.grid[idx].color() {
                h ^= point_key(i, c, self.size);
            }
        }
        if self.to_move == Color::White {
            h ^= zobrist_keys().to_move;
        }
        h
    }

    /// 4-adjacent neighbors of a point.
    #[inline]
    pub fn neighbors(&self, i: Intersection) -> NeighborIter {
        NeighborIter::new(i, self.size, false)
    }

    /// The 8 surrounding points (orthogonal + diagonal).
    #[inline]
    pub fn neighbors8(&self, i: Intersection) -> NeighborIter {
        NeighborIter::new(i, self.size, true)
    }

    // -- move execution ----------------------------------------------------

    /// Simulate placing a stone for the side to move. Returns the captured
    /// stones and the resulting hash, or the rule violation.
    fn simulate(&self, i: Intersection) -> Result<SimResult, MoveError> {
        if i.index() >= self.point_count() {
            return Err(MoveError::OffBoard);
        }
        if !self.grid[i.index()].is_empty() {
            return Err(MoveError::Occupied);
        }
        let me = self.to_move;
        let opp = me.opponent();
        let opp_state: PointState = opp.into();
        let me_state: PointState = me.into();

        let mut captured: Vec<Intersection> = Vec::new();
        let mut captured_mask = Zone::empty(self.size);
        for n in self.neighbors(i) {
            if self.grid[n.index()] == opp_state && !captured_mask.contains(n) {
                let block = self.collect_block(n);
                // The placed stone fills one liberty; captured iff it was
                // the last one.
                if block.liberties.len() == 1 && block.liberties.contains(i) {
                    for s in block.stones.iter() {
                        captured_mask.insert(s);
                        captured.push(s);
                    }
                }
            }
        }

        // Suicide check: after removals, the placed stone's group needs a
        // liberty.
        if captured.is_empty() {
            let mut has_liberty = false;
            let mut visited = Zone::empty(self.size);
            let mut stack = vec![i];
            visited.insert(i);
            'fill: while let Some(p) = stack.pop() {
                for n in self.neighbors(p) {
                    let st = self.grid[n.index()];
                    if st.is_empty() && n != i {
                        has_liberty = true;
                        break 'fill;
                    }
                    if st == me_state && !visited.contains(n) {
                        visited.insert(n);
                        stack.push(n);
                    }
                }
            }
            if !has_liberty {
                return Err(MoveError::Suicide);
            }
        }

        let mut hash = self.hash ^ point_key(i, me, self.size) ^ zobrist_keys().to_move;
        for &c in &captured {
            hash ^= point_key(c, opp, self.size);
        }
        if self.history.contains(hash) {
            return Err(MoveError::Superko);
        }
        Ok(SimResult { captured, hash })
    }

    /// True iff the move may be played: the point is empty, the move is not
    /// suicide after captures, and the resulting position does not repeat a
    /// prior one. Pass is always legal.
    pub fn is_legal(&self, mov: Move) -> bool {
        match mov {
            Move::Pass => true,
            Move::Play(i) => self.simulate(i).is_ok(),
        }
    }

    /// Execute a move, returning the successor position. Zero-liberty
    /// opponent blocks are removed; the previous position's hash is added
    /// to the history.
    pub fn play(&self, mov: Move) -> Result<Position, MoveError> {
        match mov {
            Move::Pass => {
                let mut next = self.clone();
                next.history = self.history.push(self.hash);
                next.to_move = self.to_move.opponent();
                next.hash ^= zobrist_keys().to_move;
                next.last_move = None;
                next.consecutive_passes = self.consecutive_passes.saturating_add(1);
                Ok(next)
            }
            Move::Play(i) => {
                let sim = self.simulate(i)?;
                let mut next = self.clone();
                next.grid[i.index()] = self.to_move.into();
                for &c in &sim.captured {
                    next.grid[c.index()] = PointState::Empty;
                }
                next.history = self.history.push(self.hash);
                next.to_move = self.to_move.opponent();
                next.hash = sim.hash;
                next.last_move = Some(i);
                next.consecutive_passes = 0;
                debug_assert_eq!(next.hash, next.recompute_hash());
                Ok(next)
            }
        }
    }

    /// Stones an opponent move at `i` would capture (empty when the move is
    /// illegal or captures nothing).
    pub fn captures_of(&self, i: Intersection) -> Vec<Intersection> {
        self.simulate(i).map(|s| s.captured).unwrap_or_default()
    }

    // -- blocks ------------------------------------------------------------

    /// The block containing the stone at `i`, or `None` for an empty point.
    pub fn block_at(&self, i: Intersection) -> Option<Block> {
        self.grid[i.index()].color()?;
        Some(self.collect_block(i))
    }

    fn collect_block(&self, start: Intersection) -> Block {
        let color = self.grid[start.index()].color().expect("stone expected");
        let state: PointState = color.into();
        let mut stones = Zone::empty(self.size);
        let mut liberties = Zone::empty(self.size);
        let mut stack = vec![start];
        stones.insert(start);
        while let Some(p) = stack.pop() {
            for n in self.neighbors(p) {
                let st = self.grid[n.index()];
                if st == state {
                    if !stones.contains(n) {
                        stones.insert(n);
                        stack.push(n);
                    }
                } else if st.is_empty() {
                    liberties.insert(n);
                }
            }
        }
        Block {
            color,
            stones,
            liberties,
        }
    }

    /// Partition of all stones into maximal 4-connected monochrome blocks.
    pub fn blocks(&self) -> Vec<Block> {
        let mut seen = Zone::empty(self.size);
        let mut out = Vec::new();
        for idx in 0..self.point_count() {
            let i = Intersection::from_index(idx);
            if self.grid[idx].color().is_some() && !seen.contains(i) {
                let b = self.collect_block(i);
                seen.union_with(&b.stones);
                out.push(b);
            }
        }
        out
    }
}

struct SimResult {
    captured: Vec<Intersection>,
    hash: u64,
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Position {}x{} to_move={} hash={:016x}",
            self.size, self.size, self.to_move, self.hash
        )?;
        write!(f, "{}", self)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..self.size as usize {
            write!(f, "{:>2} ", self.size as usize - row)?;
            for col in 0..self.size as usize {
                let i = Intersection::from_coords(col, row, self.size);
                let ch = match self.grid[i.index()] {
                    PointState::Empty => '.',
                    PointState::Black => 'X',
                    PointState::White => 'O',
                };
                write!(f, "{} ", ch)?;
            }
            writeln!(f)?;
        }
        write!(f, "   ")?;
        for col in 0..self.size as usize {
            write!(f, "{} ", COL_LETTERS[col] as char)?;
        }
        Ok(())
    }
}

/// Iterator over the 4 or 8 neighbors of a point.
pub struct NeighborIter {
    points: [Intersection; 8],
    len: u8,
    at: u8,
}

impl NeighborIter {
    fn new(i: Intersection, size: u8, diagonal: bool) -> Self {
        let col = i.col(size) as isize;
        let row = i.row(size) as isize;
        let s = size as isize;
        let mut points = [Intersection(0); 8];
        let mut len = 0u8;
        let deltas: &[(isize, isize)] = if diagonal {
            &[
                (0, -1),
                (-1, 0),
                (1, 0),
                (0, 1),
                (-1, -1),
                (1, -1),
                (-1, 1),
                (1, 1),
            ]
        } else {
            &[(0, -1), (-1, 0), (1, 0), (0, 1)]
        };
        for &(dc, dr) in deltas {
            let (c, r) = (col + dc, row + dr);
            if c >= 0 && c < s && r >= 0 && r < s {
                points[len as usize] = Intersection::from_coords(c as usize, r as usize, size);
                len += 1;
            }
        }
        NeighborIter { points, len, at: 0 }
    }
}

impl Iterator for NeighborIter {
    type Item = Intersection;

    fn next(&mut self) -> Option<Intersection> {
        if self.at < self.len {
            let p = self.points[self.at as usize];
            self.at += 1;
            Some(p)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos_from(size: u8, black: &[(usize, usize)], white: &[(usize, usize)], to_move: Color) -> Position {
        let mut stones = Vec::new();
        for &(c, r) in black {
            stones.push((Intersection::from_coords(c, r, size), Color::Black));
        }
        for &(c, r) in white {
            stones.push((Intersection::from_coords(c, r, size), Color::White));
        }
        Position::from_setup(size, &stones, to_move).unwrap()
    }

    #[test]
    fn single_stone_center_has_four_liberties() {
        let pos = Position::empty(5).unwrap();
        let center = Intersection::from_coords(2, 2, 5);
        let next = pos.play(Move::Play(center)).unwrap();
        let block = next.block_at(center).unwrap();
        assert_eq!(block.color, Color::Black);
        assert_eq!(block.stones.len(), 1);
        assert_eq!(block.liberty_count(), 4);
    }

    #[test]
    fn capture_removes_stone() {
        // White stone at (1,0) with one liberty at (1,1); Black fills it.
        let pos = pos_from(5, &[(0, 0), (2, 0)], &[(1, 0)], Color::Black);
        let fill = Intersection::from_coords(1, 1, 5);
        let next = pos.play(Move::Play(fill)).unwrap();
        assert_eq!(
            next.state(Intersection::from_coords(1, 0, 5)),
            PointState::Empty
        );
    }

    #[test]
    fn superko_forbids_immediate_recapture() {
        // Classic ko in the middle of a 5x5 board.
        //    . X O .
        //    X . X O   <- white plays at the gap capturing the marked stone
        //    . X O .
        let pos = pos_from(
            5,
            &[(1, 0), (0, 1), (2, 1), (1, 2)],
            &[(2, 0), (3, 1), (2, 2)],
            Color::White,
        );
        let take = Intersection::from_coords(1, 1, 5);
        let kopoint = Intersection::from_coords(2, 1, 5);
        let after = pos.play(Move::Play(take)).unwrap();
        assert_eq!(after.state(kopoint), PointState::Empty);
        // Black retaking at the ko point would recreate the original
        // position with White to move.
        assert_eq!(after.play(Move::Play(kopoint)), Err(MoveError::Superko));
        assert!(!after.is_legal(Move::Play(kopoint)));
    }

    #[test]
    fn pass_is_always_legal_and_flips_to_move() {
        let pos = Position::empty(5).unwrap();
        assert!(pos.is_legal(Move::Pass));
        let next = pos.play(Move::Pass).unwrap();
        assert_eq!(next.to_move(), Color::White);
        assert_eq!(next.consecutive_passes(), 1);
        assert_eq!(next.history().len(), 1);
        // Same grid, different player to move: hashes differ.
        assert_ne!(next.hash(), pos.hash());
    }

    #[test]
    fn occupied_point_is_illegal() {
        let pos = pos_from(5, &[(2, 2)], &[], Color::White);
        assert!(!pos.is_legal(Move::Play(Intersection::from_coords(2, 2, 5))));
    }

    #[test]
    fn suicide_is_illegal() {
        // White surrounded corner point: black stones at (1,0) and (0,1).
        let pos = pos_from(5, &[(1, 0), (0, 1)], &[], Color::White);
        let corner = Intersection::from_coords(0, 0, 5);
        assert_eq!(pos.play(Move::Play(corner)), Err(MoveError::Suicide));
        // Filling one's own last liberty with no capture is also suicide.
        let pos = pos_from(
            5,
            &[(1, 0), (1, 1), (0, 2)],
            &[(0, 0)],
            Color::White,
        );
        let fill = Intersection::from_coords(0, 1, 5);
        assert_eq!(pos.play(Move::Play(fill)), Err(MoveError::Suicide));
    }

    #[test]
    fn diagonal_stones_are_two_blocks() {
        let pos = pos_from(5, &[(1, 1), (2, 2)], &[], Color::White);
        assert_eq!(pos.blocks().len(), 2);
    }

    #[test]
    fn l_shaped_corner_chain_is_one_block_with_four_liberties() {
        // Stones (0,4),(1,4),(1,3) in the lower-left corner of a 5x5 grid
        // (row 4 = bottom). Liberties by hand: (0,3),(2,4),(2,3),(1,2).
        let pos = pos_from(5, &[(0, 4), (1, 4), (1, 3)], &[], Color::White);
        let blocks = pos.blocks();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].stones.len(), 3);
        let mut libs: Vec<_> = blocks[0].liberties.iter().collect();
        libs.sort();
        let mut expected = vec![
            Intersection::from_coords(0, 3, 5),
            Intersection::from_coords(2, 4, 5),
            Intersection::from_coords(2, 3, 5),
            Intersection::from_coords(1, 2, 5),
        ];
        expected.sort();
        assert_eq!(libs, expected);
    }

    #[test]
    fn empty_board_has_no_blocks() {
        assert!(Position::empty(9).unwrap().blocks().is_empty());
    }

    #[test]
    fn transpositions_hash_equal() {
        let a = Intersection::from_coords(1, 1, 5);
        let b = Intersection::from_coords(3, 3, 5);
        let x = Intersection::from_coords(1, 3, 5);
        let y = Intersection::from_coords(3, 1, 5);
        let p = Position::empty(5).unwrap();
        let one = p
            .play(Move::Play(a))
            .unwrap()
            .play(Move::Play(x))
            .unwrap()
            .play(Move::Play(b))
            .unwrap()
            .play(Move::Play(y))
            .unwrap();
        let two = p
            .play(Move::Play(b))
            .unwrap()
            .play(Move::Play(y))
            .unwrap()
            .play(Move::Play(a))
            .unwrap()
            .play(Move::Play(x))
            .unwrap();
        assert_eq!(one.hash(), two.hash());
        assert_eq!(one.hash(), one.recompute_hash());
    }

    #[test]
    fn to_move_changes_hash() {
        let stones = [(Intersection::from_coords(2, 2, 5), Color::Black)];
        let b = Position::from_setup(5, &stones, Color::Black).unwrap();
        let w = Position::from_setup(5, &stones, Color::White).unwrap();
        assert_ne!(b.hash(), w.hash());
    }

    #[test]
    fn setup_rejects_dead_block() {
        let stones = [
            (Intersection::from_coords(0, 0, 5), Color::White),
            (Intersection::from_coords(1, 0, 5), Color::Black),
            (Intersection::from_coords(0, 1, 5), Color::Black),
        ];
        assert!(matches!(
            Position::from_setup(5, &stones, Color::Black),
            Err(SetupError::DeadBlock(_))
        ));
    }

    #[test]
    fn coord_labels_round_trip() {
        for size in [5u8, 9, 19] {
            for idx in 0..(size as usize * size as usize) {
                let i = Intersection::from_index(idx);
                let label = coord_label(i, size);
                assert_eq!(parse_coord_label(&label, size), Some(i));
            }
        }
    }
}
