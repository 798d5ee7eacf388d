//! Benson-style unconditional life detection: the terminal win test for a
//! defender, plus the proof regions needed for terminal zone construction.
//!
//! Definitions follow Benson's classical construction. For a color X:
//!
//! - An *X-enclosed region* is a maximal 4-connected component of non-X
//!   points (empty points and opponent stones).
//! - A region R is *vital* to an X block b iff every empty point of R is a
//!   liberty of b. Opponent stones inside R are permitted; small regions in
//!   Benson's sense are exactly those vital to some bordering block.
//! - The unconditionally alive set is the maximal collection of X blocks
//!   and regions stable under: delete blocks with fewer than two vital
//!   regions; delete regions bordered by any deleted block.
//!
//! A block in the resulting set cannot be captured even if the opponent
//! plays unlimited consecutive stones; [`uca_oracle`] checks the same
//! property by brute force and is used as the test reference.

use std::collections::HashSet;

use crate::board::{Block, Color, Intersection, Move, PointState, Position};
use crate::zone::Zone;

/// An enclosed region participating in a life proof.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VitalRegion {
    /// All points of the region (empty points and opponent stones).
    pub points: Zone,
    /// The empty points of the region.
    pub empties: Zone,
    /// Stones of the proof color bordering the region.
    pub border: Zone,
}

/// A proven-alive block together with the regions certifying its life.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UcaBlockProof {
    pub block: Block,
    pub vital_regions: Vec<VitalRegion>,
}

/// The result of Benson's fixpoint: every unconditionally alive block of
/// one color, each with at least two surviving vital regions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UcaProof {
    pub color: Color,
    pub entries: Vec<UcaBlockProof>,
}

impl UcaProof {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether the stone at `i` belongs to a proven-alive block.
    pub fn covers(&self, i: Intersection) -> bool {
        self.entries.iter().any(|e| e.block.stones.contains(i))
    }

    /// Union of all alive blocks' stones.
    pub fn alive_stones(&self, size: u8) -> Zone {
        let mut z = Zone::empty(size);
        for e in &self.entries {
            z.union_with(&e.block.stones);
        }
        z
    }
}

/// Compute the maximal unconditionally-alive set for `color`.
pub fn benson_uca(position: &Position, color: Color) -> UcaProof {
    let size = position.size();
    let color_state: PointState = color.into();
    let blocks: Vec<Block> = position
        .blocks()
        .into_iter()
        .filter(|b| b.color == color)
        .collect();
    if blocks.is_empty() {
        return UcaProof {
            color,
            entries: Vec::new(),
        };
    }

    let mut block_of = vec![usize::MAX; position.point_count()];
    for (k, b) in blocks.iter().enumerate() {
        for s in b.stones.iter() {
            block_of[s.index()] = k;
        }
    }

    // Enclosed regions: components of non-color points.
    struct Region {
        points: Zone,
        empties: Zone,
        border: Zone,
        adjacent: Vec<usize>,
    }
    let mut regions: Vec<Region> = Vec::new();
    let mut assigned = Zone::empty(size);
    for idx in 0..position.point_count() {
        let start = Intersection::from_index(idx);
        if position.state(start) == color_state || assigned.contains(start) {
            continue;
        }
        let mut points = Zone::empty(size);
        let mut empties = Zone::empty(size);
        let mut border = Zone::empty(size);
        let mut adjacent: Vec<usize> = Vec::new();
        let mut stack = vec![start];
        points.insert(start);
        while let Some(p) = stack.pop() {
            if position.state(p).is_empty() {
                empties.insert(p);
            }
            for n in position.neighbors(p) {
                if position.state(n) == color_state {
                    border.insert(n);
                    let b = block_of[n.index()];
                    if !adjacent.contains(&b) {
                        adjacent.push(b);
                    }
                } else if !points.contains(n) {
                    points.insert(n);
                    stack.push(n);
                }
            }
        }
        assigned.union_with(&points);
        adjacent.sort_unstable();
        regions.push(Region {
            points,
            empties,
            border,
            adjacent,
        });
    }

    // vital[r][b]: every empty point of region r is a liberty of block b.
    let vital: Vec<Vec<bool>> = regions
        .iter()
        .map(|r| {
            blocks
                .iter()
                .map(|b| !r.empties.is_empty() && r.empties.is_subset_of(&b.liberties))
                .collect()
        })
        .collect();

    let mut block_alive = vec![true; blocks.len()];
    let mut region_alive = vec![true; regions.len()];
    loop {
        let mut changed = false;
        for (bi, alive) in block_alive.iter_mut().enumerate() {
            if !*alive {
                continue;
            }
            let count = regions
                .iter()
                .enumerate()
                .filter(|(ri, _)| region_alive[*ri] && vital[*ri][bi])
                .count();
            if count < 2 {
                *alive = false;
                changed = true;
            }
        }
        for (ri, alive) in region_alive.iter_mut().enumerate() {
            if !*alive {
                continue;
            }
            if regions[ri].adjacent.iter().any(|&b| !block_alive[b]) {
                *alive = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let entries = blocks
        .iter()
        .enumerate()
        .filter(|(bi, _)| block_alive[*bi])
        .map(|(bi, b)| {
            let vital_regions = regions
                .iter()
                .enumerate()
                .filter(|(ri, _)| region_alive[*ri] && vital[*ri][bi])
                .map(|(_, r)| VitalRegion {
                    points: r.points,
                    empties: r.empties,
                    border: r.border,
                })
                .collect();
            UcaBlockProof {
                block: b.clone(),
                vital_regions,
            }
        })
        .collect();
    UcaProof { color, entries }
}

/// Errors from the brute-force life oracle.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum LifeError {
    #[error("capture search exceeded {0} states")]
    ResourceExceeded(usize),
}

pub const DEFAULT_ORACLE_STATES: usize = 1 << 20;

/// Brute-force reference for unconditional life: true iff `block` cannot
/// be captured when the opponent moves every turn and the defender never
/// responds. Used only as a test reference for [`benson_uca`].
pub fn uca_oracle(position: &Position, color: Color, block: &Block) -> Result<bool, LifeError> {
    uca_oracle_bounded(position, color, block, DEFAULT_ORACLE_STATES)
}

/// [`uca_oracle`] with an explicit bound on explored states.
///
/// The search is a reachability sweep over whole-board states with the
/// attacker to move: if capture is reachable by any legal sequence it is
/// reachable by one without repeated states, so a visited set both prunes
/// and implements superko. Attacker passes change nothing and are skipped.
pub fn uca_oracle_bounded(
    position: &Position,
    color: Color,
    block: &Block,
    max_states: usize,
) -> Result<bool, LifeError> {
    let attacker = color.opponent();
    let rep = block
        .stones
        .iter()
        .next()
        .expect("oracle target block is non-empty");
    let color_state: PointState = color.into();

    let start = position.with_to_move(attacker);
    let mut visited: HashSet<u64> = HashSet::new();
    visited.insert(start.hash());
    let mut stack = vec![start];
    while let Some(p) = stack.pop() {
        if p.state(rep) != color_state {
            return Ok(false);
        }
        for i in p.empties().collect::<Vec<_>>() {
            let Ok(next) = p.play(Move::Play(i)) else {
                continue;
            };
            let next = next.with_to_move(attacker);
            if visited.insert(next.hash()) {
                if visited.len() > max_states {
                    return Err(LifeError::ResourceExceeded(max_states));
                }
                stack.push(next);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Color;

    fn pos_from(
        size: u8,
        black: &[(usize, usize)],
        white: &[(usize, usize)],
        to_move: Color,
    ) -> Position {
        let mut stones = Vec::new();
        for &(c, r) in black {
            stones.push((Intersection::from_coords(c, r, size), Color::Black));
        }
        for &(c, r) in white {
            stones.push((Intersection::from_coords(c, r, size), Color::White));
        }
        Position::from_setup(size, &stones, to_move).unwrap()
    }

    /// Black group along the top edge with two one-point eyes at (0,0)
    /// and (2,0).
    fn two_eye_group(size: u8) -> (Position, Vec<(usize, usize)>) {
        let stones = vec![(1, 0), (3, 0), (0, 1), (1, 1), (2, 1), (3, 1)];
        (pos_from(size, &stones, &[], Color::White), stones)
    }

    /// Black group with a single straight-three eye space at (0,0)..(2,0).
    fn straight_three_group(size: u8) -> Position {
        let stones = vec![(3, 0), (0, 1), (1, 1), (2, 1), (3, 1)];
        pos_from(size, &stones, &[], Color::White)
    }

    #[test]
    fn empty_board_has_no_uca_blocks() {
        let pos = Position::empty(7).unwrap();
        assert!(benson_uca(&pos, Color::Black).is_empty());
        assert!(benson_uca(&pos, Color::White).is_empty());
    }

    #[test]
    fn two_one_point_eyes_are_alive() {
        let (pos, _) = two_eye_group(5);
        let proof = benson_uca(&pos, Color::Black);
        assert_eq!(proof.entries.len(), 1);
        assert!(proof.entries[0].vital_regions.len() >= 2);
        // Every vital region's empty points are liberties of the block.
        for vr in &proof.entries[0].vital_regions {
            assert!(vr.empties.is_subset_of(&proof.entries[0].block.liberties));
        }
        // Oracle agrees.
        let block = proof.entries[0].block.clone();
        assert_eq!(uca_oracle(&pos, Color::Black, &block), Ok(true));
    }

    #[test]
    fn straight_three_eye_space_is_not_alive() {
        let pos = straight_three_group(5);
        let proof = benson_uca(&pos, Color::Black);
        assert!(proof.is_empty());
        // Oracle: White plays the center of the eye space, then fills.
        let block = pos
            .block_at(Intersection::from_coords(3, 0, 5))
            .unwrap();
        assert_eq!(uca_oracle(&pos, Color::Black, &block), Ok(false));
    }

    #[test]
    fn open_boundary_group_is_capturable() {
        // A lone two-stone group in the open: the opponent walls and fills.
        let pos = pos_from(4, &[(1, 1), (2, 1)], &[], Color::White);
        let block = pos
            .block_at(Intersection::from_coords(1, 1, 4))
            .unwrap();
        assert_eq!(uca_oracle(&pos, Color::Black, &block), Ok(false));
        assert!(benson_uca(&pos, Color::Black).is_empty());
    }

    #[test]
    fn opponent_stones_inside_vital_region_are_allowed() {
        // Same two-eye group but one eye holds a doomed white stone in a
        // two-point region: (0,0),(2,0) eyes; widen one eye to two points
        // with a white prisoner.
        //   . X o X .      eyes: (0,0); region {(2,0),(3,0)} holds a white
        //   X X X X X      stone at (2,0) with empty (3,0)... border needs
        // a black stone at (4,0).
        let black = vec![(1, 0), (4, 0), (0, 1), (1, 1), (2, 1), (3, 1), (4, 1)];
        let white = vec![(2, 0)];
        let pos = pos_from(5, &black, &white, Color::White);
        let proof = benson_uca(&pos, Color::Black);
        assert_eq!(proof.entries.len(), 1, "group with prisoner should live");
        let block = proof.entries[0].block.clone();
        assert_eq!(uca_oracle(&pos, Color::Black, &block), Ok(true));
    }

    #[test]
    fn oracle_rejects_single_big_eye_shapes() {
        // Square-four eye space in the corner: dead (opponent plays the
        // vital 2x2 sequence).
        //   . . X
        //   . . X
        //   X X X
        let black = vec![(2, 0), (2, 1), (0, 2), (1, 2), (2, 2)];
        let pos = pos_from(5, &black, &[], Color::White);
        let proof = benson_uca(&pos, Color::Black);
        assert!(proof.is_empty());
        let block = pos
            .block_at(Intersection::from_coords(2, 0, 5))
            .unwrap();
        assert_eq!(uca_oracle(&pos, Color::Black, &block), Ok(false));
    }

    #[test]
    fn benson_agrees_with_oracle_on_small_shapes() {
        // A handful of canonical shapes; the exhaustive corpus lives in the
        // acceptance suite.
        let cases: Vec<(Vec<(usize, usize)>, bool)> = vec![
            // Two one-point eyes: alive.
            (vec![(1, 0), (3, 0), (0, 1), (1, 1), (2, 1), (3, 1)], true),
            // One one-point eye: dead.
            (vec![(1, 0), (0, 1), (1, 1)], false),
        ];
        for (stones, expect) in cases {
            let pos = pos_from(6, &stones, &[], Color::White);
            let proof = benson_uca(&pos, Color::Black);
            let block = pos
                .block_at(Intersection::from_coords(
                    stones[0].0,
                    stones[0].1,
                    6,
                ))
                .unwrap();
            let oracle = uca_oracle(&pos, Color::Black, &block).unwrap();
            assert_eq!(oracle, expect, "oracle on {:?}", stones);
            assert_eq!(
                proof.covers(Intersection::from_coords(stones[0].0, stones[0].1, 6)),
                expect,
                "benson on {:?}",
                stones
            );
        }
    }

    #[test]
    fn uca_depends_only_on_blocks_and_vital_regions() {
        use rand::{Rng, SeedableRng};
        let (pos, _) = two_eye_group(6);
        let proof = benson_uca(&pos, Color::Black);
        assert_eq!(proof.entries.len(), 1);
        let mut protected = proof.entries[0].block.stones;
        for vr in &proof.entries[0].vital_regions {
            protected.union_with(&vr.points);
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        for _ in 0..200 {
            // Randomize every unprotected point.
            let mut stones = Vec::new();
            for i in pos.intersections() {
                if protected.contains(i) {
                    if let Some(c) = pos.state(i).color() {
                        stones.push((i, c));
                    }
                } else {
                    match rng.gen_range(0..3) {
                        1 => stones.push((i, Color::Black)),
                        2 => stones.push((i, Color::White)),
                        _ => {}
                    }
                }
            }
            let Ok(perturbed) = Position::from_setup(6, &stones, Color::White) else {
                continue; // dead-block setups rejected
            };
            let p2 = benson_uca(&perturbed, Color::Black);
            for s in proof.entries[0].block.stones.iter() {
                assert!(p2.covers(s), "alive stone lost under perturbation");
            }
            checked += 1;
        }
        assert!(checked > 50);
    }
}
