//! Game sessions and scrambles.

use std::sync::Arc;

use chrono::{DateTime, Utc};
use hexslide_core::{BoardSpec, Cell, Configuration, Decision, Shape, SlideMove, Solver};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScrambleMode {
    #[default]
    Solvable,
    Unsolvable,
    Random,
}

pub const DEFAULT_STEPS: u32 = 100;

fn default_steps() -> u32 {
    DEFAULT_STEPS
}

/// Scramble request. A missing seed is drawn at random and echoed back.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ScramblePolicy {
    #[serde(default)]
    pub mode: ScrambleMode,
    #[serde(default = "default_steps")]
    pub steps: u32,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrambleInfo {
    pub mode: ScrambleMode,
    pub steps: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScrambleError {
    /// No non-isolated configuration exists for this hole count.
    Isolated,
    /// The board offers no provably unsolvable scramble.
    Unsupported(String),
}

fn random_walk(start: &Configuration, steps: u32, rng: &mut ChaCha8Rng) -> Configuration {
    let mut cur = start.clone();
    for _ in 0..steps {
        let moves = cur.legal_moves();
        if moves.is_empty() {
            break;
        }
        let m = moves[rng.gen_range(0..moves.len())];
        cur = cur.apply_move(&m).expect("legal move");
    }
    cur
}

/// Start configuration for `target` under `mode`. `solver` must not fall
/// back to search, so an unsolvable scramble is only accepted when a rule
/// proves it.
pub fn scramble(
    target: &Configuration,
    mode: ScrambleMode,
    steps: u32,
    seed: u64,
    solver: &Solver,
) -> Result<Configuration, ScrambleError> {
    if target.is_isolated() {
        return Err(ScrambleError::Isolated);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        ScrambleMode::Solvable => Ok(random_walk(target, steps, &mut rng)),
        ScrambleMode::Random => {
            let holes: Vec<usize> = target.hole_indices();
            let mut tiles = target.tile_labels();
            tiles.shuffle(&mut rng);
            let mut it = tiles.into_iter();
            let labels = (0..target.board().len())
                .map(|i| {
                    if holes.contains(&i) {
                        0
                    } else {
                        it.next().expect("one label per tile")
                    }
                })
                .collect();
            Ok(Configuration::new(target.board_arc().clone(), labels).expect("permuted labels"))
        }
        ScrambleMode::Unsolvable => {
            if target.t() < 2 {
                return Err(ScrambleError::Unsupported("fewer than two tiles".into()));
            }
            let walked = random_walk(target, steps, &mut rng);
            let tiles: Vec<Cell> = walked
                .board()
                .cells()
                .iter()
                .copied()
                .filter(|&c| walked.label_at(c) != Some(0))
                .collect();
            let picked: Vec<&Cell> = tiles.choose_multiple(&mut rng, 2).collect();
            let swapped = walked
                .swap_cells(*picked[0], *picked[1])
                .expect("tile cells");
            let verdict = solver
                .decide(&swapped, target)
                .expect("same board and labels");
            if verdict.decision == Decision::Unsolvable {
                Ok(swapped)
            } else {
                Err(ScrambleError::Unsupported(format!(
                    "no rule proves a transposed configuration unsolvable on {} with {} holes",
                    target.board(),
                    target.h()
                )))
            }
        }
    }
}

/// Cached shortest path from `from` to the session target.
#[derive(Debug, Clone)]
pub struct HintMemo {
    pub from: Configuration,
    pub path: Vec<SlideMove>,
}

#[derive(Debug, Clone)]
pub struct GameSession {
    pub id: String,
    pub initial: Configuration,
    pub current: Configuration,
    pub target: Configuration,
    pub move_log: Vec<SlideMove>,
    pub created_at: DateTime<Utc>,
    pub scramble: ScrambleInfo,
    pub hint_memo: Option<HintMemo>,
}

impl GameSession {
    pub fn new(
        id: String,
        initial: Configuration,
        target: Configuration,
        scramble: ScrambleInfo,
    ) -> GameSession {
        GameSession {
            id,
            current: initial.clone(),
            initial,
            target,
            move_log: Vec::new(),
            created_at: Utc::now(),
            scramble,
            hint_memo: None,
        }
    }

    pub fn board(&self) -> &Arc<BoardSpec> {
        self.initial.board_arc()
    }

    /// Slides the tile at `from` into the hole at `to`; `None` when that
    /// slide is not legal.
    pub fn apply(&mut self, from: Cell, to: Cell) -> Option<SlideMove> {
        let m = self.current.find_move(from, to)?;
        self.current = self.current.apply_move(&m).expect("legal move");
        self.move_log.push(m);
        self.hint_memo = match self.hint_memo.take() {
            Some(HintMemo { path, .. })
                if path
                    .first()
                    .is_some_and(|p| p.tile_from == from && p.tile_to == to) =>
            {
                Some(HintMemo {
                    from: self.current.clone(),
                    path: path[1..].to_vec(),
                })
            }
            _ => None,
        };
        Some(m)
    }

    pub fn solved(&self) -> bool {
        self.current == self.target
    }

    /// True when replaying the move log from the initial configuration
    /// reproduces the current one.
    pub fn replays(&self) -> bool {
        self.initial
            .apply_all(&self.move_log)
            .is_ok_and(|c| c == self.current)
    }

    pub fn view(&self) -> GameView {
        GameView {
            id: self.id.clone(),
            board: self.board().shape().clone(),
            board_name: self.board().name(),
            holes: self.current.h(),
            initial: self.initial.clone(),
            current: self.current.clone(),
            target: self.target.clone(),
            legal_moves: self.current.legal_moves(),
            isolated: self.current.is_isolated(),
            move_log: self.move_log.clone(),
            moves: self.move_log.len(),
            solved: self.solved(),
            created_at: self.created_at,
            scramble: self.scramble,
        }
    }

    pub fn snapshot(&self) -> SessionSnapshot {
        SessionSnapshot {
            id: self.id.clone(),
            initial: self.initial.clone(),
            current: self.current.clone(),
            target: self.target.clone(),
            move_log: self.move_log.clone(),
            created_at: self.created_at,
            scramble: self.scramble,
        }
    }

    /// Restores a session, rejecting snapshots whose log does not replay.
    pub fn from_snapshot(s: SessionSnapshot) -> Option<GameSession> {
        let target = s.target.with_board(s.initial.board_arc().clone()).ok()?;
        let current = s.current.with_board(s.initial.board_arc().clone()).ok()?;
        let session = GameSession {
            id: s.id,
            initial: s.initial,
            current,
            target,
            move_log: s.move_log,
            created_at: s.created_at,
            scramble: s.scramble,
            hint_memo: None,
        };
        session.replays().then_some(session)
    }
}

/// Session state as returned by the API.
#[derive(Debug, Clone, Serialize)]
pub struct GameView {
    pub id: String,
    pub board: Shape,
    pub board_name: String,
    pub holes: usize,
    pub initial: Configuration,
    pub current: Configuration,
    pub target: Configuration,
    pub legal_moves: Vec<SlideMove>,
    pub isolated: bool,
    pub move_log: Vec<SlideMove>,
    pub moves: usize,
    pub solved: bool,
    pub created_at: DateTime<Utc>,
    pub scramble: ScrambleInfo,
}

/// On-disk form of a session.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionSnapshot {
    pub id: String,
    pub initial: Configuration,
    pub current: Configuration,
    pub target: Configuration,
    pub move_log: Vec<SlideMove>,
    pub created_at: DateTime<Utc>,
    pub scramble: ScrambleInfo,
}
