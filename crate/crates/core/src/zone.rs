//! Relevance-zone algebra: the zone bitset, zone patterns, terminal zones
//! from life proofs, and the propagation rules that grow zones along
//! proof edges.
//!
//! A zone is a region of intersections such that any position agreeing
//! with a proven position on every zone point (with the same player to
//! move) is won by the same player. The propagation rules here
//! over-approximate: they may enlarge zones beyond the minimum, which
//! costs search speed but never correctness.

use std::fmt;

use crate::board::{Block, Color, Intersection, Move, PointState, Position};
use crate::life::UcaProof;
use crate::problems::GoalId;

const WORDS: usize = 6; // 6 * 64 = 384 >= 19*19

/// A set of intersections on a board of a fixed size, stored as a bitset.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Zone {
    size: u8,
    words: [u64; WORDS],
}

impl Zone {
    pub fn empty(size: u8) -> Zone {
        Zone {
            size,
            words: [0; WORDS],
        }
    }

    /// Every intersection of the board.
    pub fn full(size: u8) -> Zone {
        let mut z = Zone::empty(size);
        for i in 0..(size as usize * size as usize) {
            z.insert(Intersection::from_index(i));
        }
        z
    }

    pub fn from_points(size: u8, points: impl IntoIterator<Item = Intersection>) -> Zone {
        let mut z = Zone::empty(size);
        for p in points {
            z.insert(p);
        }
        z
    }

    #[inline]
    pub fn size(&self) -> u8 {
        self.size
    }

    #[inline]
    pub fn insert(&mut self, i: Intersection) {
        let idx = i.index();
        self.words[idx / 64] |= 1u64 << (idx % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: Intersection) {
        let idx = i.index();
        self.words[idx / 64] &= !(1u64 << (idx % 64));
    }

    #[inline]
    pub fn contains(&self, i: Intersection) -> bool {
        let idx = i.index();
        (self.words[idx / 64] >> (idx % 64)) & 1 != 0
    }

    #[inline]
    pub fn union_with(&mut self, other: &Zone) {
        debug_assert_eq!(self.size, other.size);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    pub fn union(&self, other: &Zone) -> Zone {
        let mut out = *self;
        out.union_with(other);
        out
    }

    pub fn intersects(&self, other: &Zone) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    pub fn is_subset_of(&self, other: &Zone) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    /// Number of points in the zone.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Iterate points in ascending index order.
    pub fn iter(&self) -> ZoneIter {
        ZoneIter {
            zone: *self,
            word: 0,
        }
    }

    /// Canonical serialization: the sorted list of intersection indices.
    pub fn to_indices(&self) -> Vec<u16> {
        self.iter().map(|i| i.index() as u16).collect()
    }

    pub fn from_indices(size: u8, indices: &[u16]) -> Zone {
        Zone::from_points(
            size,
            indices.iter().map(|&i| Intersection::from_index(i as usize)),
        )
    }
}

impl fmt::Debug for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Zone{:?}", self.to_indices())
    }
}

pub struct ZoneIter {
    zone: Zone,
    word: usize,
}

impl Iterator for ZoneIter {
    type Item = Intersection;

    fn next(&mut self) -> Option<Intersection> {
        while self.word < WORDS {
            let w = self.zone.words[self.word];
            if w != 0 {
                let bit = w.trailing_zeros() as usize;
                self.zone.words[self.word] &= w - 1;
                return Some(Intersection::from_index(self.word * 64 + bit));
            }
            self.word += 1;
        }
        None
    }
}

/// The stone configuration inside a relevance zone: the reusable unit of
/// the pattern table. `winning_move` is present iff the player to move is
/// the winner.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RZPattern {
    pub zone: Zone,
    /// State for exactly the zone's intersections, sorted by index.
    pub stones: Vec<(Intersection, PointState)>,
    pub to_move: Color,
    pub winner: Color,
    pub goal_id: GoalId,
    pub winning_move: Option<Intersection>,
    pub proven_depth: u32,
}

impl RZPattern {
    /// Capture the zone-restricted configuration of `position`.
    pub fn from_position(
        position: &Position,
        zone: Zone,
        winner: Color,
        goal_id: GoalId,
        winning_move: Option<Intersection>,
        proven_depth: u32,
    ) -> RZPattern {
        let stones = zone.iter().map(|i| (i, position.state(i))).collect();
        let pattern = RZPattern {
            zone,
            stones,
            to_move: position.to_move(),
            winner,
            goal_id,
            winning_move,
            proven_depth,
        };
        debug_assert!(pattern.validate());
        pattern
    }

    /// Structural invariants: stones cover exactly the zone, and a winning
    /// move exists iff the winner is to move (and lies inside the zone).
    pub fn validate(&self) -> bool {
        if self.stones.len() != self.zone.len() {
            return false;
        }
        let mut prev: Option<usize> = None;
        for &(i, _) in &self.stones {
            if !self.zone.contains(i) {
                return false;
            }
            if let Some(p) = prev {
                if i.index() <= p {
                    return false;
                }
            }
            prev = Some(i.index());
        }
        match self.winning_move {
            Some(m) => self.to_move == self.winner && self.zone.contains(m),
            None => self.to_move != self.winner,
        }
    }
}

/// True iff `position` agrees with the pattern on every zone point and has
/// the pattern's player to move. Out-of-zone points are unconstrained.
pub fn matches(position: &Position, pattern: &RZPattern) -> bool {
    if position.size() != pattern.zone.size() || position.to_move() != pattern.to_move {
        return false;
    }
    pattern
        .stones
        .iter()
        .all(|&(i, s)| position.state(i) == s)
}

/// Errors from zone construction.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum ZoneError {
    #[error("life proof is empty or contains no crucial block")]
    NoProof,
}

/// Zone certifying an unconditional-life terminal: the stones of the
/// smallest proof subset containing a crucial block, plus all points of
/// those blocks' vital regions.
///
/// The subset is closed under the proof's dependency relation: a block
/// pulls in its vital regions, and a region pulls in every block bordering
/// it. The closure is self-certifying, so positions agreeing on the zone
/// keep the crucial block unconditionally alive.
pub fn terminal_zone(
    position: &Position,
    proof: &UcaProof,
    crucial: &[Intersection],
) -> Result<Zone, ZoneError> {
    let size = position.size();
    let candidates: Vec<usize> = proof
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| crucial.iter().any(|&c| e.block.stones.contains(c)))
        .map(|(k, _)| k)
        .collect();
    if candidates.is_empty() {
        return Err(ZoneError::NoProof);
    }

    let mut best: Option<Zone> = None;
    for &start in &candidates {
        let zone = dependency_closure(proof, start, size);
        let better = match &best {
            None => true,
            Some(b) => {
                let (zl, bl) = (zone.len(), b.len());
                zl < bl || (zl == bl && zone.to_indices() < b.to_indices())
            }
        };
        if better {
            best = Some(zone);
        }
    }
    Ok(best.expect("candidate exists"))
}

fn dependency_closure(proof: &UcaProof, start: usize, size: u8) -> Zone {
    let mut in_blocks = vec![false; proof.entries.len()];
    let mut zone = Zone::empty(size);
    let mut queue = vec![start];
    in_blocks[start] = true;
    while let Some(b) = queue.pop() {
        let entry = &proof.entries[b];
        zone.union_with(&entry.block.stones);
        for region in &entry.vital_regions {
            zone.union_with(&region.points);
            // Every block bordering a surviving region is itself in the
            // proof; pull it into the closure.
            for (k, other) in proof.entries.iter().enumerate() {
                if !in_blocks[k] && other.block.stones.intersects(&region.border) {
                    in_blocks[k] = true;
                    queue.push(k);
                }
            }
        }
    }
    zone
}

/// All points 4-adjacent to any stone of the block (liberties plus
/// adjacent stones of either color).
pub fn block_adjacency(position: &Position, block: &Block) -> Zone {
    let mut adj = Zone::empty(position.size());
    for s in block.stones.iter() {
        for n in position.neighbors(s) {
            if !block.stones.contains(n) {
                adj.insert(n);
            }
        }
    }
    adj
}

/// Zone for a winner move edge: the child zone, the move itself, a
/// conservative legality dilation around the move, and the full footprint
/// of anything the move captured.
///
/// The dilation guarantees that in any position agreeing on the result,
/// the move is still playable with identical captures: captured blocks are
/// pinned stones-and-surroundings so they cannot gain outside liberties,
/// and the played stone keeps a visible liberty. A single-stone capture
/// additionally pins the full 8-neighborhood so ko legality context stays
/// inside the zone.
pub fn or_propagate(
    child_zone: &Zone,
    mov: Intersection,
    parent: &Position,
    child: &Position,
) -> Zone {
    let mut zone = *child_zone;
    zone.insert(mov);

    let mut had_empty_neighbor = false;
    for n in parent.neighbors(mov) {
        zone.insert(n);
        if parent.state(n).is_empty() {
            had_empty_neighbor = true;
        }
    }

    let captured = parent.captures_of(mov);
    let mut seen = Zone::empty(parent.size());
    for &c in &captured {
        if seen.contains(c) {
            continue;
        }
        let block = parent.block_at(c).expect("captured stone exists in parent");
        seen.union_with(&block.stones);
        zone.union_with(&block.stones);
        zone.union_with(&block_adjacency(parent, &block));
    }
    if captured.len() == 1 {
        for n in parent.neighbors8(mov) {
            zone.insert(n);
        }
    }

    // Replay safety: if the move's liberty after placement is only visible
    // through the rest of its own block, pin that block.
    if !had_empty_neighbor && captured.is_empty() {
        let own = child.block_at(mov).expect("played stone exists in child");
        zone.union_with(&own.stones);
        zone.union_with(&own.liberties);
    }

    debug_assert!(child_zone.is_subset_of(&zone));
    zone
}

/// Zone for a refuted loser node: the union of all child zones plus the
/// refuted moves themselves. The caller (the search fixpoint) is
/// responsible for having covered the null move and every legal loser move
/// inside the result.
pub fn and_propagate(children: &[(Option<Intersection>, Zone)]) -> Zone {
    let mut zone = children
        .first()
        .map(|(_, z)| Zone::empty(z.size()))
        .unwrap_or_else(|| Zone::empty(crate::board::MIN_SIZE));
    for (mov, z) in children {
        zone.union_with(z);
        if let Some(m) = mov {
            zone.insert(*m);
        }
    }
    zone
}

/// Conservative closure applied to a loser node's working zone so that the
/// zone is self-certifying against out-of-zone play:
///
/// - a winner block with a stone in the zone is pinned entirely (stones and
///   liberties), unless it is already unconditionally alive, so no
///   out-of-zone move can capture in-zone winner stones;
/// - an in-zone empty point where the loser's move is suicide gets its
///   suffocating context pinned (its neighbors plus adjacent loser blocks
///   with their liberties), so the move stays illegal under out-of-zone
///   perturbation.
///
/// Iterates to a fixpoint. Growing the zone may expose new legal loser
/// moves; the search fixpoint re-checks those after every call.
pub fn refutation_closure(position: &Position, zone: &Zone, winner: Color) -> Zone {
    let mut out = *zone;
    let uca = crate::life::benson_uca(position, winner);
    let mut pass_alive = Zone::empty(position.size());
    for e in &uca.entries {
        pass_alive.union_with(&e.block.stones);
    }
    let loser = winner.opponent();
    loop {
        let before = out.len();

        let mut seen = Zone::empty(position.size());
        for idx in 0..position.point_count() {
            let i = Intersection::from_index(idx);
            if position.state(i).color() == Some(winner)
                && out.contains(i)
                && !seen.contains(i)
                && !pass_alive.contains(i)
            {
                let block = position.block_at(i).expect("stone");
                seen.union_with(&block.stones);
                out.union_with(&block.stones);
                out.union_with(&block.liberties);
            }
        }

        let snapshot = out;
        for i in snapshot.iter() {
            if !position.state(i).is_empty() {
                continue;
            }
            if suicide_for(position, i, loser) {
                let mut blocks_seen = Zone::empty(position.size());
                for n in position.neighbors(i) {
                    out.insert(n);
                    if position.state(n).color() == Some(loser) && !blocks_seen.contains(n) {
                        let block = position.block_at(n).expect("stone");
                        blocks_seen.union_with(&block.stones);
                        out.union_with(&block.stones);
                        out.union_with(&block.liberties);
                    }
                }
            }
        }

        if out.len() == before {
            return out;
        }
    }
}

/// Whether a move at `i` by `color` would be suicide (ignores superko and
/// whose turn it actually is).
fn suicide_for(position: &Position, i: Intersection, color: Color) -> bool {
    let opp_state: PointState = color.opponent().into();
    // Any empty neighbor: not suicide.
    for n in position.neighbors(i) {
        if position.state(n).is_empty() {
            return false;
        }
    }
    // Any adjacent opponent block in atari at exactly `i`: capture, not
    // suicide.
    for n in position.neighbors(i) {
        if position.state(n) == opp_state {
            let block = position.block_at(n).expect("stone");
            if block.liberties.len() == 1 && block.liberties.contains(i) {
                return false;
            }
        }
    }
    // Any adjacent own block with a spare liberty: survives.
    for n in position.neighbors(i) {
        if position.state(n).color() == Some(color) {
            let block = position.block_at(n).expect("stone");
            if block.liberties.len() >= 2 {
                return false;
            }
        }
    }
    true
}

/// Flood fill from `seeds` through points accepted by `passable`,
/// returning the reached region and the blocking boundary points.
pub fn flood_through(
    position: &Position,
    seeds: &Zone,
    passable: impl Fn(PointState) -> bool,
) -> (Zone, Zone) {
    let size = position.size();
    let mut region = *seeds;
    let mut boundary = Zone::empty(size);
    let mut stack: Vec<Intersection> = seeds.iter().collect();
    while let Some(p) = stack.pop() {
        for n in position.neighbors(p) {
            if region.contains(n) || boundary.contains(n) {
                continue;
            }
            if passable(position.state(n)) {
                region.insert(n);
                stack.push(n);
            } else {
                boundary.insert(n);
            }
        }
    }
    (region, boundary)
}

impl Move {
    /// The point added to a zone for this move; passes add nothing.
    pub fn zone_point(self) -> Option<Intersection> {
        self.intersection()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Move;
    use crate::problems::GoalId;
    use proptest::prelude::*;

    fn ix(col: usize, row: usize, size: u8) -> Intersection {
        Intersection::from_coords(col, row, size)
    }

    #[test]
    fn bitset_basics() {
        let mut z = Zone::empty(9);
        assert!(z.is_empty());
        z.insert(ix(3, 4, 9));
        z.insert(ix(0, 0, 9));
        assert_eq!(z.len(), 2);
        assert!(z.contains(ix(3, 4, 9)));
        assert!(!z.contains(ix(4, 3, 9)));
        assert_eq!(z.to_indices(), vec![0, 39]);
        z.remove(ix(0, 0, 9));
        assert_eq!(z.len(), 1);
    }

    #[test]
    fn and_propagate_is_plain_union() {
        let z1 = Zone::from_points(5, [ix(0, 0, 5), ix(1, 0, 5)]);
        let z2 = Zone::from_points(5, [ix(2, 2, 5)]);
        let z3 = Zone::from_points(5, [ix(4, 4, 5)]);

        // Single null child: the result is that child's zone.
        let only_null = and_propagate(&[(None, z1)]);
        assert_eq!(only_null, z1);

        // Three refuted moves: union of the three zones plus the moves.
        let m1 = ix(3, 3, 5);
        let out = and_propagate(&[(None, z1), (Some(m1), z2), (Some(ix(4, 0, 5)), z3)]);
        let mut expected = z1.union(&z2).union(&z3);
        expected.insert(m1);
        expected.insert(ix(4, 0, 5));
        assert_eq!(out, expected);

        // Disjoint child zones: popcount adds up.
        let disjoint = and_propagate(&[(None, z2), (None, z3)]);
        assert_eq!(disjoint.len(), z2.len() + z3.len());
    }

    #[test]
    fn matches_is_zone_restricted() {
        let size = 5;
        let stones = [
            (ix(1, 1, size), crate::board::Color::Black),
            (ix(2, 1, size), crate::board::Color::White),
        ];
        let pos = Position::from_setup(size, &stones, crate::board::Color::Black).unwrap();
        let zone = Zone::from_points(size, [ix(1, 1, size), ix(2, 1, size), ix(3, 1, size)]);
        let pattern = RZPattern::from_position(
            &pos,
            zone,
            crate::board::Color::White,
            GoalId(1),
            None,
            3,
        );

        // Reflexive on the generating position.
        assert!(matches(&pos, &pattern));

        // Flip one in-zone point: no match.
        let changed = pos.play(Move::Play(ix(3, 1, size))).unwrap();
        assert!(!matches(&changed, &pattern));

        // Out-of-zone edits don't matter (play two moves to restore the
        // player to move).
        let out1 = pos.play(Move::Play(ix(0, 4, size))).unwrap();
        let out2 = out1.play(Move::Play(ix(4, 4, size))).unwrap();
        assert!(matches(&out2, &pattern));
    }

    #[test]
    fn or_propagate_simple_move_adds_only_the_move() {
        // Move into the child zone with no captures, all neighbors already
        // in the child zone.
        let size = 5;
        let parent = Position::from_setup(
            size,
            &[(ix(1, 2, size), crate::board::Color::White)],
            crate::board::Color::Black,
        )
        .unwrap();
        let m = ix(2, 2, size);
        let child = parent.play(Move::Play(m)).unwrap();
        let mut child_zone = Zone::empty(size);
        for n in parent.neighbors(m) {
            child_zone.insert(n);
        }
        child_zone.insert(ix(2, 1, size));
        let out = or_propagate(&child_zone, m, &parent, &child);
        let mut expected = child_zone;
        expected.insert(m);
        assert_eq!(out, expected);
    }

    #[test]
    fn or_propagate_capture_pins_captured_block() {
        // Black captures a 3-stone white block; the zone gains those stones
        // and their pre-capture liberties.
        let size = 5;
        let white: Vec<_> = [(1usize, 1usize), (2, 1), (3, 1)]
            .iter()
            .map(|&(c, r)| (ix(c, r, size), crate::board::Color::White))
            .collect();
        let black: Vec<_> = [(1usize, 0usize), (2, 0), (3, 0), (0, 1), (4, 1), (1, 2), (3, 2)]
            .iter()
            .map(|&(c, r)| (ix(c, r, size), crate::board::Color::Black))
            .collect();
        let mut stones = white.clone();
        stones.extend(black.iter().cloned());
        let parent = Position::from_setup(size, &stones, crate::board::Color::Black).unwrap();
        let m = ix(2, 2, size); // fills the last liberty
        let child = parent.play(Move::Play(m)).unwrap();
        assert!(child.state(ix(1, 1, size)).is_empty());

        let out = or_propagate(&Zone::empty(size), m, &parent, &child);
        for &(c, r) in &[(1, 1), (2, 1), (3, 1)] {
            assert!(out.contains(ix(c, r, size)), "captured stone ({},{})", c, r);
        }
        // Pre-capture liberty of the white block was exactly the move point.
        assert!(out.contains(m));
        // Monotone: child zone always contained.
        let bigger = or_propagate(&Zone::from_points(size, [ix(4, 4, size)]), m, &parent, &child);
        assert!(out.is_subset_of(&bigger));
        assert!(bigger.contains(ix(4, 4, size)));
    }

    proptest! {
        #[test]
        fn union_contains_both_and_popcount_bounds(
            a in proptest::collection::vec(0usize..81, 0..30),
            b in proptest::collection::vec(0usize..81, 0..30),
        ) {
            let za = Zone::from_points(9, a.iter().map(|&i| Intersection::from_index(i)));
            let zb = Zone::from_points(9, b.iter().map(|&i| Intersection::from_index(i)));
            let u = za.union(&zb);
            prop_assert!(za.is_subset_of(&u));
            prop_assert!(zb.is_subset_of(&u));
            prop_assert!(u.len() <= za.len() + zb.len());
            prop_assert!(u.len() >= za.len().max(zb.len()));
            // Round trip through the canonical serialization.
            let round = Zone::from_indices(9, &u.to_indices());
            prop_assert_eq!(round, u);
        }
    }
}
