//! Problem model, SGF ingestion/export, and the goal predicate shared by
//! the search and the oracle.
//!
//! A problem designates crucial stones and assigns the OR role: either the
//! defender must make some crucial stone unconditionally alive
//! ([`GoalKind::LiveAnyCrucial`]) or the attacker must capture all of them
//! ([`GoalKind::KillAllCrucial`]).

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::board::{Color, Intersection, PointState, Position, SetupError};
use crate::life::benson_uca;
use crate::search::{Solution, SolutionNode, TerminalKind};
use crate::sgf::{self, SgfNode, SgfTree};

/// What the OR-player is trying to achieve.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum GoalKind {
    /// OR is the defender: some crucial block must become unconditionally
    /// alive.
    LiveAnyCrucial,
    /// OR is the attacker: every crucial stone must be captured.
    KillAllCrucial,
}

impl fmt::Display for GoalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoalKind::LiveAnyCrucial => write!(f, "live"),
            GoalKind::KillAllCrucial => write!(f, "kill"),
        }
    }
}

/// Identifier binding memo entries and patterns to one goal's semantics:
/// reuse across different goals is unsound in general.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct GoalId(pub u64);

/// Terminal evaluation of a position with respect to a problem.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum TerminalStatus {
    OrWins,
    AndWins,
    Ongoing,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProblemError {
    #[error(transparent)]
    Parse(#[from] sgf::SgfParseError),
    #[error("invalid problem: {0}")]
    InvariantViolation(String),
    #[error("invalid setup: {0}")]
    Setup(#[from] SetupError),
    #[error("solution has no proven winner")]
    UnverifiedSolution,
}

/// A life-and-death problem: initial position, role assignment and crucial
/// stones.
#[derive(Clone, Debug)]
pub struct Problem {
    pub position: Position,
    pub or_color: Color,
    pub goal: GoalKind,
    /// Intersections holding the stones the goal is about, sorted.
    pub crucial: Vec<Intersection>,
    pub label: String,
    pub source: Option<String>,
    /// Expected winner, when the problem file records one (benchmarking).
    pub expected: Option<Color>,
}

impl Problem {
    pub fn new(
        position: Position,
        or_color: Color,
        goal: GoalKind,
        mut crucial: Vec<Intersection>,
        label: impl Into<String>,
    ) -> Result<Problem, ProblemError> {
        crucial.sort_unstable();
        crucial.dedup();
        let problem = Problem {
            position,
            or_color,
            goal,
            crucial,
            label: label.into(),
            source: None,
            expected: None,
        };
        problem.validate()?;
        Ok(problem)
    }

    fn validate(&self) -> Result<(), ProblemError> {
        if self.crucial.is_empty() {
            return Err(ProblemError::InvariantViolation(
                "no crucial stones designated".into(),
            ));
        }
        let want: PointState = self.target_color().into();
        for &i in &self.crucial {
            if i.index() >= self.position.point_count() {
                return Err(ProblemError::InvariantViolation(format!(
                    "crucial point {:?} off board",
                    i
                )));
            }
            if self.position.state(i) != want {
                return Err(ProblemError::InvariantViolation(format!(
                    "crucial point {:?} does not hold a {} stone",
                    i,
                    self.target_color()
                )));
            }
        }
        Ok(())
    }

    /// Color of the stones the goal is about: the OR-player's own stones
    /// when living, the opponent's when killing.
    pub fn target_color(&self) -> Color {
        match self.goal {
            GoalKind::LiveAnyCrucial => self.or_color,
            GoalKind::KillAllCrucial => self.or_color.opponent(),
        }
    }

    pub fn and_color(&self) -> Color {
        self.or_color.opponent()
    }

    /// Stable identifier over (goal, OR color, board size, crucial set).
    pub fn goal_id(&self) -> GoalId {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut mix = |v: u64| {
            h ^= v;
            h = h.wrapping_mul(0x100_0000_01b3);
        };
        mix(match self.goal {
            GoalKind::LiveAnyCrucial => 1,
            GoalKind::KillAllCrucial => 2,
        });
        mix(match self.or_color {
            Color::Black => 1,
            Color::White => 2,
        });
        mix(self.position.size() as u64);
        for &i in &self.crucial {
            mix(i.index() as u64 + 3);
        }
        GoalId(h)
    }

    /// Re-target the goal, flipping the OR role if needed. The crucial
    /// stones keep their color; only the role assignment changes.
    pub fn override_goal(&mut self, goal: GoalKind) -> Result<(), ProblemError> {
        if self.goal == goal {
            return Ok(());
        }
        let marked_color = self
            .position
            .state(self.crucial[0])
            .color()
            .ok_or_else(|| ProblemError::InvariantViolation("crucial point empty".into()))?;
        self.goal = goal;
        self.or_color = match goal {
            GoalKind::LiveAnyCrucial => marked_color,
            GoalKind::KillAllCrucial => marked_color.opponent(),
        };
        self.validate()
    }

    /// Goal-terminal test: `OrWins` iff the goal's success predicate holds,
    /// `AndWins` iff the dual predicate holds.
    pub fn terminal_status(&self, position: &Position) -> TerminalStatus {
        let target: PointState = self.target_color().into();
        let all_captured = self.crucial.iter().all(|&i| position.state(i) != target);
        match self.goal {
            GoalKind::LiveAnyCrucial => {
                if all_captured {
                    return TerminalStatus::AndWins;
                }
                if self.any_crucial_alive(position) {
                    TerminalStatus::OrWins
                } else {
                    TerminalStatus::Ongoing
                }
            }
            GoalKind::KillAllCrucial => {
                if all_captured {
                    return TerminalStatus::OrWins;
                }
                if self.any_crucial_alive(position) {
                    TerminalStatus::AndWins
                } else {
                    TerminalStatus::Ongoing
                }
            }
        }
    }

    /// Whether some block containing a crucial intersection is
    /// unconditionally alive.
    pub fn any_crucial_alive(&self, position: &Position) -> bool {
        let target: PointState = self.target_color().into();
        if !self.crucial.iter().any(|&i| position.state(i) == target) {
            return false;
        }
        let proof = benson_uca(position, self.target_color());
        self.crucial.iter().any(|&i| proof.covers(i))
    }
}

// ---------------------------------------------------------------------------
// SGF ingestion
// ---------------------------------------------------------------------------

/// Load a problem from SGF. Recognized root properties: SZ, AB, AW, PL,
/// MA (crucial stones), GN (label), C. The comment may carry
/// `goal:live` / `goal:kill` and `expected:black` / `expected:white`
/// directives; the goal defaults to making the marked stones live, so
/// kill problems need the directive or a caller override.
pub fn load_sgf(bytes: &[u8]) -> Result<Problem, ProblemError> {
    let tree = sgf::parse(bytes)?;
    let root = tree
        .nodes
        .first()
        .ok_or_else(|| ProblemError::InvariantViolation("empty SGF".into()))?;

    let size: u8 = root
        .value("SZ")
        .unwrap_or("19")
        .parse()
        .map_err(|_| ProblemError::InvariantViolation("bad SZ".into()))?;

    let mut stones: Vec<(Intersection, Color)> = Vec::new();
    for (prop, color) in [("AB", Color::Black), ("AW", Color::White)] {
        if let Some(values) = root.values(prop) {
            for v in values {
                let i = sgf::sgf_to_point(v, size).ok_or_else(|| {
                    ProblemError::InvariantViolation(format!("bad point {v:?} in {prop}"))
                })?;
                stones.push((i, color));
            }
        }
    }

    let to_move = match root.value("PL") {
        Some("B") | Some("b") | None => Color::Black,
        Some("W") | Some("w") => Color::White,
        Some(other) => {
            return Err(ProblemError::InvariantViolation(format!(
                "bad PL value {other:?}"
            )))
        }
    };
    let position = Position::from_setup(size, &stones, to_move)?;

    let mut crucial = Vec::new();
    for v in root.values("MA").unwrap_or(&[]) {
        let i = sgf::sgf_to_point(v, size)
            .ok_or_else(|| ProblemError::InvariantViolation(format!("bad point {v:?} in MA")))?;
        crucial.push(i);
    }
    if crucial.is_empty() {
        return Err(ProblemError::InvariantViolation(
            "no crucial stones marked (MA)".into(),
        ));
    }
    let marked_color = position
        .state(crucial[0])
        .color()
        .ok_or_else(|| ProblemError::InvariantViolation("MA on empty point".into()))?;
    for &i in &crucial {
        if position.state(i).color() != Some(marked_color) {
            return Err(ProblemError::InvariantViolation(
                "MA points must all hold stones of one color".into(),
            ));
        }
    }

    let comment = root.value("C").unwrap_or("");
    let goal = if comment.contains("goal:kill") {
        GoalKind::KillAllCrucial
    } else {
        GoalKind::LiveAnyCrucial
    };
    let or_color = match goal {
        GoalKind::LiveAnyCrucial => marked_color,
        GoalKind::KillAllCrucial => marked_color.opponent(),
    };
    let expected = if comment.contains("expected:black") {
        Some(Color::Black)
    } else if comment.contains("expected:white") {
        Some(Color::White)
    } else {
        None
    };

    let label = root
        .value("GN")
        .map(|s| s.to_string())
        .unwrap_or_else(|| "unnamed".to_string());

    let mut problem = Problem::new(position, or_color, goal, crucial, label)?;
    problem.expected = expected;
    Ok(problem)
}

// ---------------------------------------------------------------------------
// Solution export
// ---------------------------------------------------------------------------

/// Serialize a verified solution: root carries the problem setup with the
/// zone as TR marks; the tree has one branch per winner move and one per
/// refuted reply plus a pass branch for the null move. Re-importable via
/// [`load_sgf`].
pub fn export_solution_sgf(problem: &Problem, solution: &Solution) -> Result<Vec<u8>, ProblemError> {
    let winner = solution.winner.ok_or(ProblemError::UnverifiedSolution)?;
    let size = problem.position.size();

    let mut root = SgfNode::default();
    root.push("FF", "4");
    root.push("GM", "1");
    root.push("SZ", size.to_string());
    root.push("GN", problem.label.clone());
    for i in problem.position.intersections() {
        match problem.position.state(i) {
            PointState::Black => root.push("AB", sgf::point_to_sgf(i, size)),
            PointState::White => root.push("AW", sgf::point_to_sgf(i, size)),
            PointState::Empty => {}
        }
    }
    root.push(
        "PL",
        match problem.position.to_move() {
            Color::Black => "B",
            Color::White => "W",
        },
    );
    for &i in &problem.crucial {
        root.push("MA", sgf::point_to_sgf(i, size));
    }
    for i in solution.zone.iter() {
        root.push("TR", sgf::point_to_sgf(i, size));
    }
    root.push(
        "C",
        format!(
            "goal:{} winner:{} zone_size:{}",
            problem.goal,
            winner,
            solution.zone.len()
        ),
    );

    let mut tree = SgfTree {
        nodes: vec![root],
        variations: Vec::new(),
    };
    attach_solution_nodes(&mut tree, &solution.tree.root, problem.position.to_move(), size);
    Ok(sgf::write(&tree).into_bytes())
}

fn move_node(
    mov: Option<Intersection>,
    color: Color,
    child: &SolutionNode,
    size: u8,
) -> SgfNode {
    let mut node = SgfNode::default();
    let prop = match color {
        Color::Black => "B",
        Color::White => "W",
    };
    match mov {
        Some(i) => node.push(prop, sgf::point_to_sgf(i, size)),
        None => node.push(prop, ""), // pass
    }
    node.push(
        "C",
        format!("status:{} depth:{}", child.status_label(), child.proven_depth),
    );
    node
}

fn attach_solution_nodes(tree: &mut SgfTree, node: &SolutionNode, to_move: Color, size: u8) {
    match node {
        SolutionNode::Terminal { .. } => {}
        SolutionNode::WinnerMove { mov, child, .. } => {
            let mut sub = SgfTree {
                nodes: vec![move_node(mov.intersection(), to_move, child, size)],
                variations: Vec::new(),
            };
            attach_solution_nodes(&mut sub, child, to_move.opponent(), size);
            tree.variations.push(sub);
        }
        SolutionNode::Refuted {
            null_child,
            refutations,
            ..
        } => {
            let mut null_tree = SgfTree {
                nodes: vec![move_node(None, to_move, null_child, size)],
                variations: Vec::new(),
            };
            attach_solution_nodes(&mut null_tree, null_child, to_move.opponent(), size);
            tree.variations.push(null_tree);
            for (mov, child) in refutations {
                let mut sub = SgfTree {
                    nodes: vec![move_node(Some(*mov), to_move, child, size)],
                    variations: Vec::new(),
                };
                attach_solution_nodes(&mut sub, child, to_move.opponent(), size);
                tree.variations.push(sub);
            }
        }
    }
}

impl SolutionNode {
    pub fn status_label(&self) -> &'static str {
        match self {
            SolutionNode::Terminal { kind, .. } => match kind {
                TerminalKind::CrucialAlive => "terminal-uca",
                TerminalKind::AllCaptured => "terminal-captured",
                TerminalKind::PassOut => "terminal-passout",
            },
            SolutionNode::WinnerMove { .. } => "winner-move",
            SolutionNode::Refuted { .. } => "refuted",
        }
    }
}

// ---------------------------------------------------------------------------
// Suites and stats records
// ---------------------------------------------------------------------------

/// An ordered benchmark suite with unique labels.
#[derive(Clone, Debug, Default)]
pub struct ProblemSuite {
    pub problems: Vec<Problem>,
}

impl ProblemSuite {
    pub fn new(problems: Vec<Problem>) -> Result<ProblemSuite, ProblemError> {
        let mut labels: Vec<&str> = problems.iter().map(|p| p.label.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != problems.len() {
            return Err(ProblemError::InvariantViolation(
                "duplicate problem labels in suite".into(),
            ));
        }
        Ok(ProblemSuite { problems })
    }

    /// Load every `.sgf` file in a directory, sorted by file name.
    pub fn from_dir(dir: &Path) -> Result<ProblemSuite, std::io::Error> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().map(|x| x == "sgf").unwrap_or(false))
            .collect();
        paths.sort();
        let mut problems = Vec::new();
        for path in paths {
            let bytes = std::fs::read(&path)?;
            let mut problem = load_sgf(&bytes).map_err(|e| {
                std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    format!("{}: {e}", path.display()),
                )
            })?;
            if problem.label == "unnamed" {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    problem.label = stem.to_string();
                }
            }
            problem.source = Some(path.display().to_string());
            problems.push(problem);
        }
        ProblemSuite::new(problems).map_err(|e| {
            std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string())
        })
    }
}

/// One line of the line-delimited stats file: a JSON record per solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveRecord {
    pub label: String,
    pub backend: String,
    pub winner: String,
    pub nodes: u64,
    pub table_hits: u64,
    pub pattern_reuses: u64,
    pub zone_size: usize,
    pub wall_ms: u64,
    pub seed: u64,
}

impl SolveRecord {
    pub fn to_jsonl(&self) -> String {
        let mut s = serde_json::to_string(self).expect("record serializes");
        s.push('\n');
        s
    }
}
